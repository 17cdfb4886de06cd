"""
Root of the awnbench exception tree.

Each sub-package keeps its own `errors.py` beside its code, deriving from `AwnError`.
The CLI reports input problems as exit code 2 and any other `AwnError` as exit code 4.
"""


class AwnError(Exception):
    """ Anything awnbench raises on purpose; bugs stay plain Python exceptions. """


class SeedError(AwnError, ValueError):
    """ A seed that is not an integer. """
