from typing import Iterable, List, Union

from xloop import xloop, DEFAULT_NOT_ITERATE

from awnbench.errors import SeedError

Seeds = Union[int, Iterable[int]]


def seed_list(*seeds: Seeds) -> List[int]:
    """
    Flattens single seeds and collections of seeds into one list, in order.

    >>> seed_list(7, range(3))
    [7, 0, 1, 2]

    Raises:
        SeedError: a value that is not an int (bools included).
    """
    flat = list(xloop(*seeds, not_iterate=[*DEFAULT_NOT_ITERATE, dict]))
    bad = [s for s in flat if isinstance(s, bool) or not isinstance(s, int)]
    if bad:
        raise SeedError(f"Seeds must be integers, got ({', '.join(map(repr, bad))}).")
    return flat
