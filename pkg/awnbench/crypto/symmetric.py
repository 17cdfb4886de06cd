import hmac
import struct
from typing import Iterable, Dict

from Crypto.Cipher import AES
from Crypto.Hash import HMAC, SHA256
from Crypto.Protocol.KDF import HKDF

from awnbench.crypto.errors import IntegrityError, KdfError, CryptoError
from awnbench.crypto.meter import CryptoMeter, CryptoOp
from awnbench.crypto.rng import Rng
from awnbench.crypto.types import SymKey, SealedBox, Scheme, SYM_KEY_BITS

KDF_SALT = b'awnbench/kdf/v1'
KDF_INFO = b'awnbench/kdf'
GCM_TAG_BYTES = 16
MAC_BYTES = 16


def frame_labels(labels: Iterable[bytes]) -> bytes:
    """ Length-prefixed concatenation; ("ab", "c") and ("a", "bc") frame differently. """
    return b''.join(struct.pack('>I', len(label)) + bytes(label) for label in labels)


def kdf(labels: Iterable[bytes], out_bits: int = 256) -> SymKey:
    """
    Extract-then-expand (HKDF-SHA256) over the length-prefixed labels.

    Pure: equal labels give byte-identical keys in every process.
    """
    if out_bits not in SYM_KEY_BITS:
        raise KdfError(f"kdf output must be 128 or 256 bits, got ({out_bits}).")
    labels = [bytes(x) for x in labels]
    if not any(labels):
        raise KdfError("kdf needs at least one non-empty label.")

    with CryptoMeter.grab().measure(CryptoOp.KDF):
        material = HKDF(frame_labels(labels), out_bits // 8, KDF_SALT, SHA256, context=KDF_INFO)
    return SymKey(bits=out_bits, material=material)


class IvSource:
    """
    GCM IVs for one owner: 64-bit random prefix drawn once, then a 32-bit counter per key.

    An IV never repeats for a given key within one source; distinct sources are separated
    by their random prefixes.
    """

    def __init__(self, rng: Rng):
        self._prefix = rng.read(8)
        self._counters: Dict[bytes, int] = {}

    def next_iv(self, key: SymKey) -> bytes:
        counter = self._counters.get(key.material, 0)
        if counter >= 2 ** 32:
            raise CryptoError("IV counter exhausted for this key.")
        self._counters[key.material] = counter + 1
        return self._prefix + struct.pack('>I', counter)


def aead_seal(key: SymKey, plaintext: bytes, aad: bytes, iv_source: IvSource) -> SealedBox:
    iv = iv_source.next_iv(key)
    with CryptoMeter.grab().measure(CryptoOp.AEAD):
        cipher = AES.new(key.material, AES.MODE_GCM, nonce=iv, mac_len=GCM_TAG_BYTES)
        cipher.update(aad)
        body, tag = cipher.encrypt_and_digest(plaintext)
    return SealedBox(scheme=Scheme.AEAD, header=bytes(aad), body=body, tag=tag, iv=iv)


def aead_open(key: SymKey, box: SealedBox, aad: bytes) -> bytes:
    if box.scheme is not Scheme.AEAD:
        raise IntegrityError(f"Box scheme ({box.scheme.name}) is not symmetric AEAD.")
    with CryptoMeter.grab().measure(CryptoOp.AEAD):
        try:
            cipher = AES.new(key.material, AES.MODE_GCM, nonce=box.iv, mac_len=GCM_TAG_BYTES)
            cipher.update(aad)
            return cipher.decrypt_and_verify(box.body, box.tag)
        except (ValueError, TypeError) as e:
            raise IntegrityError(f"Sealed box failed to open ({e}).") from e


def mac(key: SymKey, labels: Iterable[bytes]) -> bytes:
    """ HMAC-SHA256 over length-prefixed labels, truncated to 128 bits. """
    with CryptoMeter.grab().measure(CryptoOp.MAC):
        return HMAC.new(key.material, frame_labels(labels), digestmod=SHA256).digest()[:MAC_BYTES]


def mac_verify(key: SymKey, labels: Iterable[bytes], tag: bytes) -> bool:
    return hmac.compare_digest(mac(key, labels), tag)
