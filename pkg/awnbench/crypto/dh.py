from typing import Tuple

from cryptography.hazmat.primitives.asymmetric.x25519 import X25519PrivateKey, X25519PublicKey
from cryptography.hazmat.primitives.serialization import Encoding, PublicFormat

from awnbench.crypto.errors import DhError
from awnbench.crypto.meter import CryptoMeter, CryptoOp
from awnbench.crypto.rng import Rng
from awnbench.crypto.types import DhSecret

DH_PUBLIC_BYTES = 32


def dh_keygen(rng: Rng) -> Tuple[bytes, DhSecret]:
    """ Ephemeral X25519 keypair; the secret comes from the injected generator. """
    material = rng.read(32)
    with CryptoMeter.grab().measure(CryptoOp.DH):
        public = X25519PrivateKey.from_private_bytes(material).public_key().public_bytes(
            Encoding.Raw, PublicFormat.Raw
        )
    return public, DhSecret(material=material)


def dh_shared(secret: DhSecret, peer_public: bytes) -> bytes:
    if len(peer_public) != DH_PUBLIC_BYTES:
        raise DhError(f"X25519 public values are 32 bytes, got ({len(peer_public)}).")

    with CryptoMeter.grab().measure(CryptoOp.DH):
        try:
            shared = X25519PrivateKey.from_private_bytes(secret.material).exchange(
                X25519PublicKey.from_public_bytes(peer_public)
            )
        except ValueError as e:
            # Low-order points (including the identity) produce an all-zero secret.
            raise DhError(f"Peer public value rejected ({e}).") from e

    if not any(shared):
        raise DhError("Peer public value is of low order.")
    return shared
