"""
Cryptographic primitives used by every protocol engine.

- Authenticated symmetric encryption: AES-GCM with 128-bit tags (`aead_seal` / `aead_open`).
- Public-key encryption: RSA-2048 with OAEP/SHA-256 (`pk_encrypt` / `pk_decrypt`).
- Signatures: RSA-2048 PKCS#1 v1.5 over SHA-256 (`sign` / `verify`).
- Ephemeral Diffie-Hellman: X25519 (`dh_keygen` / `dh_shared`).
- Key derivation: HKDF-SHA256 over length-prefixed labels (`kdf`), plus a truncated HMAC.

All randomness comes from an injected `Rng`; nothing reads ambient entropy.

.. note:: WEP's RC4 is deliberately not here. The WEP-analog engine seals with the same
    AEAD under a 128-bit key, so timing differences come from protocol structure.
"""
from .errors import (
    CryptoError, IntegrityError, DecryptError, KeyLengthError, PayloadTooLarge, DhError, KdfError
)
from .types import SymKey, Nonce, SealedBox, Scheme, AsymKeyPair, DhSecret
from .rng import Rng, gen_nonce, NonceSource
from .meter import CryptoMeter, CryptoOp
from .symmetric import aead_seal, aead_open, IvSource, kdf, mac, mac_verify, frame_labels
from .asymmetric import (
    generate_keypair, long_term_keypair, pk_encrypt, pk_decrypt, sign, verify,
    export_public, import_public, export_private, import_private, OAEP_MAX_PLAINTEXT
)
from .dh import dh_keygen, dh_shared, DH_PUBLIC_BYTES

__all__ = [
    'CryptoError',
    'IntegrityError',
    'DecryptError',
    'KeyLengthError',
    'PayloadTooLarge',
    'DhError',
    'KdfError',
    'SymKey',
    'Nonce',
    'SealedBox',
    'Scheme',
    'AsymKeyPair',
    'DhSecret',
    'Rng',
    'gen_nonce',
    'NonceSource',
    'CryptoMeter',
    'CryptoOp',
    'aead_seal',
    'aead_open',
    'IvSource',
    'kdf',
    'mac',
    'mac_verify',
    'frame_labels',
    'generate_keypair',
    'long_term_keypair',
    'pk_encrypt',
    'pk_decrypt',
    'sign',
    'verify',
    'export_public',
    'import_public',
    'export_private',
    'import_private',
    'OAEP_MAX_PLAINTEXT',
    'dh_keygen',
    'dh_shared',
    'DH_PUBLIC_BYTES',
]
