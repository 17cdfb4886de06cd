from functools import lru_cache
from logging import getLogger

from Crypto.Cipher import PKCS1_OAEP
from Crypto.Hash import SHA256
from Crypto.PublicKey import RSA
from Crypto.PublicKey.RSA import RsaKey
from Crypto.Signature import pkcs1_15

from awnbench.crypto.errors import DecryptError, PayloadTooLarge, CryptoError
from awnbench.crypto.meter import CryptoMeter, CryptoOp
from awnbench.crypto.rng import Rng
from awnbench.crypto.types import AsymKeyPair, SealedBox, Scheme, RSA_MODULUS_BITS

log = getLogger(__name__)

# OAEP with SHA-256 over a 2048-bit modulus: k - 2*hLen - 2.
OAEP_MAX_PLAINTEXT = RSA_MODULUS_BITS // 8 - 2 * SHA256.digest_size - 2


def generate_keypair(rng: Rng) -> AsymKeyPair:
    key = RSA.generate(RSA_MODULUS_BITS, randfunc=rng.read)
    return AsymKeyPair(public_part=key.publickey(), private_part=key)


@lru_cache(maxsize=None)
def long_term_keypair(seed: int, node: str) -> AsymKeyPair:
    """
    Deterministic long-term RSA keypair for `node` under a provisioning seed.

    Generation takes a noticeable fraction of a second, so results are memoized for the
    life of the process. Only long-term keys come from here; session randomness never does.
    """
    log.debug(f"Generating long-term RSA keypair for node ({node}) seed ({seed}).")
    return generate_keypair(Rng(seed).derive('long-term-rsa', node))


def pk_encrypt(public: RsaKey, plaintext: bytes, rng: Rng) -> SealedBox:
    if len(plaintext) > OAEP_MAX_PLAINTEXT:
        raise PayloadTooLarge(
            f"Plaintext of ({len(plaintext)}) bytes exceeds the OAEP limit "
            f"({OAEP_MAX_PLAINTEXT}) for a 2048-bit modulus."
        )
    with CryptoMeter.grab().measure(CryptoOp.PK_ENCRYPT):
        body = PKCS1_OAEP.new(public, hashAlgo=SHA256, randfunc=rng.read).encrypt(plaintext)
    return SealedBox(scheme=Scheme.PUBLIC_KEY, header=b'', body=body, tag=b'')


def pk_decrypt(private: RsaKey, box: SealedBox) -> bytes:
    if box.scheme is not Scheme.PUBLIC_KEY:
        raise DecryptError(f"Box scheme ({box.scheme.name}) is not public-key.")
    with CryptoMeter.grab().measure(CryptoOp.PK_DECRYPT):
        try:
            return PKCS1_OAEP.new(private, hashAlgo=SHA256).decrypt(box.body)
        except (ValueError, TypeError) as e:
            raise DecryptError(f"Public-key box failed to decrypt ({e}).") from e


def sign(private: RsaKey, message: bytes) -> bytes:
    with CryptoMeter.grab().measure(CryptoOp.SIGN):
        return pkcs1_15.new(private).sign(SHA256.new(message))


def verify(public: RsaKey, message: bytes, signature: bytes) -> bool:
    with CryptoMeter.grab().measure(CryptoOp.VERIFY):
        try:
            pkcs1_15.new(public).verify(SHA256.new(message), signature)
        except (ValueError, TypeError):
            return False
        return True


def export_public(public: RsaKey) -> bytes:
    return public.export_key(format='DER')


def import_public(der: bytes) -> RsaKey:
    try:
        key = RSA.import_key(der)
    except (ValueError, IndexError, TypeError) as e:
        raise CryptoError(f"Not an RSA public key ({e}).") from e
    if key.has_private() or key.size_in_bits() != RSA_MODULUS_BITS:
        raise CryptoError("Expected a bare 2048-bit RSA public key.")
    return key


def export_private(private: RsaKey) -> bytes:
    return private.export_key(format='DER')


def import_private(der: bytes) -> RsaKey:
    return RSA.import_key(der)
