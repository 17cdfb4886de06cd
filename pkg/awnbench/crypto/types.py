from dataclasses import dataclass, field
from enum import Enum

from Crypto.PublicKey.RSA import RsaKey

from awnbench.crypto.errors import KeyLengthError

SYM_KEY_BITS = (128, 256)
NONCE_BYTES = 16
RSA_MODULUS_BITS = 2048


class Scheme(Enum):
    AEAD = 1
    PUBLIC_KEY = 2


@dataclass(frozen=True)
class SymKey:
    bits: int
    material: bytes = field(repr=False)

    def __post_init__(self):
        if self.bits not in SYM_KEY_BITS:
            raise KeyLengthError(f"Symmetric keys are 128 or 256 bits, got ({self.bits}).")
        if len(self.material) * 8 != self.bits:
            raise KeyLengthError(
                f"Key material is ({len(self.material) * 8}) bits but key claims ({self.bits})."
            )

    @classmethod
    def from_material(cls, material: bytes) -> 'SymKey':
        return cls(bits=len(material) * 8, material=bytes(material))


@dataclass(frozen=True)
class Nonce:
    value: bytes
    origin: str


@dataclass(frozen=True)
class SealedBox:
    """ Carrier for every `{...}K` term: symmetric AEAD or public-key encryption. """
    scheme: Scheme
    header: bytes
    """ Associated data (authenticated, not encrypted); empty for public-key boxes. """
    body: bytes
    tag: bytes
    iv: bytes = b''


@dataclass(frozen=True)
class AsymKeyPair:
    public_part: RsaKey
    private_part: RsaKey = field(repr=False)
    modulus_bits: int = RSA_MODULUS_BITS

    def __post_init__(self):
        if self.modulus_bits != RSA_MODULUS_BITS:
            raise KeyLengthError(f"RSA modulus must be 2048 bits, got ({self.modulus_bits}).")
        if self.private_part.size_in_bits() != self.modulus_bits:
            raise KeyLengthError(
                f"RSA key is ({self.private_part.size_in_bits()}) bits, expected 2048."
            )


@dataclass(frozen=True)
class DhSecret:
    material: bytes = field(repr=False)
