import hashlib
import random
from typing import Union

from awnbench.crypto.types import Nonce, NONCE_BYTES

Seed = Union[int, str, bytes]


def _seed_material(seed: Seed) -> bytes:
    if isinstance(seed, bool) or not isinstance(seed, (int, str, bytes)):
        raise TypeError(f"Seeds are int, str or bytes, got ({seed!r}).")
    if isinstance(seed, int):
        return b'int:' + str(seed).encode()
    if isinstance(seed, str):
        return b'str:' + seed.encode()
    return b'bytes:' + seed


class Rng:
    """
    Seedable deterministic generator; the only source of randomness in awnbench.

    One generator per engine / simulator, never shared. `Rng.read` matches the `randfunc`
    interface pycryptodome expects, so RSA key generation and OAEP padding are reproducible.
    """

    def __init__(self, seed: Seed):
        self.seed = seed
        self._material = _seed_material(seed)
        self._random = random.Random(self._material)

    def read(self, n: int) -> bytes:
        return self._random.randbytes(n)

    def random(self) -> float:
        return self._random.random()

    def randint(self, a: int, b: int) -> int:
        return self._random.randint(a, b)

    def derive(self, *labels: Seed) -> 'Rng':
        """ Independent child generator; does not consume state from this one. """
        digest = hashlib.sha256(self._material)
        for label in labels:
            digest.update(b'/' + _seed_material(label))
        return Rng(digest.digest())

    def __repr__(self):
        return f"Rng(seed={self.seed!r})"


def gen_nonce(rng: Rng, origin: str) -> Nonce:
    return Nonce(value=rng.read(NONCE_BYTES), origin=origin)


class NonceSource:
    """ Hands out nonces for one engine, never repeating a value within its lifetime. """

    def __init__(self, rng: Rng, origin: str):
        self._rng = rng
        self._origin = origin
        self._issued = set()

    def next(self) -> Nonce:
        nonce = gen_nonce(self._rng, self._origin)
        while nonce.value in self._issued:
            nonce = gen_nonce(self._rng, self._origin)
        self._issued.add(nonce.value)
        return nonce
