import hashlib
import hmac

import pytest
from cryptography.hazmat.primitives.ciphers.aead import AESGCM

from awnbench.crypto import (
    CryptoMeter, CryptoOp, DhError, IntegrityError, IvSource, KdfError, KeyLengthError,
    NonceSource, OAEP_MAX_PLAINTEXT, PayloadTooLarge, Rng, SymKey, aead_open, aead_seal,
    dh_keygen, dh_shared, frame_labels, kdf, long_term_keypair, mac, mac_verify, pk_decrypt,
    pk_encrypt, sign, verify, DecryptError
)
from awnbench.crypto.symmetric import KDF_INFO, KDF_SALT


def _key(rng: Rng, n: int = 32) -> SymKey:
    return SymKey.from_material(rng.read(n))


def test_rng_is_reproducible_and_children_are_independent():
    assert Rng(5).read(16) == Rng(5).read(16)
    assert Rng(5).read(16) != Rng(6).read(16)

    parent = Rng(5)
    child = parent.derive('a', 1)
    # Deriving does not consume parent state.
    assert parent.read(8) == Rng(5).read(8)
    assert child.read(8) == Rng(5).derive('a', 1).read(8)
    assert Rng(5).derive('a').read(8) != Rng(5).derive('b').read(8)

    with pytest.raises(TypeError):
        Rng(1.5)


def test_nonce_source_never_repeats():
    source = NonceSource(Rng(0), 'A')
    nonces = [source.next() for _ in range(10_000)]
    assert len({n.value for n in nonces}) == 10_000
    assert {n.origin for n in nonces} == {'A'}


def test_sym_key_lengths():
    SymKey.from_material(bytes(16))
    SymKey.from_material(bytes(32))
    with pytest.raises(KeyLengthError):
        SymKey.from_material(bytes(24))
    with pytest.raises(KeyLengthError):
        SymKey(bits=128, material=bytes(32))


def test_aead_round_trip_and_tamper():
    rng = Rng(1)
    key = _key(rng)
    ivs = IvSource(rng.derive('iv'))
    box = aead_seal(key, b'hello', b'hdr', ivs)
    assert aead_open(key, box, b'hdr') == b'hello'

    with pytest.raises(IntegrityError):
        aead_open(key, box, b'other')
    with pytest.raises(IntegrityError):
        aead_open(_key(rng), box, b'hdr')

    flipped = bytes([box.body[0] ^ 1]) + box.body[1:]
    tampered = type(box)(box.scheme, box.header, flipped, box.tag, box.iv)
    with pytest.raises(IntegrityError):
        aead_open(key, tampered, b'hdr')


def test_iv_never_repeats_for_a_key():
    rng = Rng(2)
    key = _key(rng, 16)
    ivs = IvSource(rng)
    seen = {aead_seal(key, b'x', b'', ivs).iv for _ in range(10_000)}
    assert len(seen) == 10_000


def test_kdf_is_pure_and_framed():
    a = kdf([b'ab', b'c'])
    assert a == kdf([b'ab', b'c'])
    assert a != kdf([b'a', b'bc'])
    assert frame_labels([b'ab', b'c']) != frame_labels([b'a', b'bc'])
    assert kdf([b'x'], out_bits=128).bits == 128

    with pytest.raises(KdfError):
        kdf([b'', b''])
    with pytest.raises(KdfError):
        kdf([b'x'], out_bits=192)


def test_mac_verify():
    key = _key(Rng(3))
    tag = mac(key, [b'one', b'two'])
    assert len(tag) == 16
    assert mac_verify(key, [b'one', b'two'], tag)
    assert not mac_verify(key, [b'onetwo'], tag)


def test_public_key_operations():
    pair = long_term_keypair(0, 'A')
    other = long_term_keypair(0, 'B')
    rng = Rng(4)

    box = pk_encrypt(pair.public_part, b'secret', rng)
    assert pk_decrypt(pair.private_part, box) == b'secret'
    with pytest.raises(DecryptError):
        pk_decrypt(other.private_part, box)
    with pytest.raises(PayloadTooLarge):
        pk_encrypt(pair.public_part, bytes(OAEP_MAX_PLAINTEXT + 1), rng)

    signature = sign(pair.private_part, b'msg')
    assert verify(pair.public_part, b'msg', signature)
    assert not verify(pair.public_part, b'msg!', signature)
    assert not verify(other.public_part, b'msg', signature)


def test_long_term_keypair_is_deterministic():
    assert long_term_keypair(0, 'A') is long_term_keypair(0, 'A')
    assert long_term_keypair(0, 'A').public_part != long_term_keypair(1, 'A').public_part


def test_dh_agreement_and_low_order_rejection():
    rng = Rng(5)
    pub_a, sec_a = dh_keygen(rng)
    pub_b, sec_b = dh_keygen(rng)
    assert dh_shared(sec_a, pub_b) == dh_shared(sec_b, pub_a)

    with pytest.raises(DhError):
        dh_shared(sec_a, bytes(32))
    with pytest.raises(DhError):
        dh_shared(sec_a, bytes(31))


def test_dh_agreement_over_many_keypairs():
    rng = Rng(9).derive('dh')
    pairs = [dh_keygen(rng) for _ in range(100)]
    assert len({public for public, _ in pairs}) == 100

    secrets = set()
    for (pub_a, sec_a), (pub_b, sec_b) in zip(pairs, pairs[1:] + pairs[:1]):
        shared = dh_shared(sec_a, pub_b)
        assert shared == dh_shared(sec_b, pub_a)
        secrets.add(shared)
    assert len(secrets) == 100


def test_meter_counts_operations():
    key = _key(Rng(6))
    with CryptoMeter() as meter:
        mac(key, [b'a'])
        mac(key, [b'b'])
        kdf([b'c'])
    assert meter.counts[CryptoOp.MAC] == 2
    assert meter.counts[CryptoOp.KDF] == 1
    assert meter.counts[CryptoOp.SIGN] == 0
    assert meter.wallclock_ns == 0


def test_kdf_matches_hkdf_sha256():
    labels = [b'A', b'B', bytes(range(16))]
    prk = hmac.new(KDF_SALT, frame_labels(labels), hashlib.sha256).digest()
    okm = hmac.new(prk, KDF_INFO + b'\x01', hashlib.sha256).digest()
    assert kdf(labels).material == okm
    assert kdf(labels, out_bits=128).material == okm[:16]


def test_aead_matches_aes_gcm():
    rng = Rng(8)
    key = _key(rng)
    box = aead_seal(key, b'plaintext', b'header', IvSource(rng))
    expected = AESGCM(key.material).encrypt(box.iv, b'plaintext', b'header')
    assert box.body + box.tag == expected
    assert len(box.iv) == 12


def test_mac_matches_truncated_hmac_sha256():
    key = _key(Rng(9))
    expected = hmac.new(key.material, frame_labels([b'x', b'yz']), hashlib.sha256).digest()
    assert mac(key, [b'x', b'yz']) == expected[:16]
