import json
import string

import pytest

from awnbench.crypto import IvSource, Rng, Scheme, SealedBox, SymKey, aead_seal
from awnbench.crypto.types import NONCE_BYTES
from awnbench.kinds import ProtocolKind, Role
from awnbench.wire import (
    CodecError, FieldType, Frame, FrameKind, SchemaError, Transcript, WireError, WireField,
    WireMessage, decode, decode_terms, encode, encode_terms, flow, identity_bytes,
    identity_label, pack_box, schema_for, try_decode
)


def _hello() -> WireMessage:
    return WireMessage(
        ProtocolKind.TKDF_SYM, 1, 'A', 'B',
        [WireField.identity('A'), WireField.identity('B'), WireField.nonce(bytes(range(16)))],
    )


def test_encode_layout():
    data = encode(_hello())
    assert data[0] == ProtocolKind.TKDF_SYM.tag
    assert data[1] == 1
    assert data[2:10] == b'A' + bytes(7)
    assert data[10:18] == b'B' + bytes(7)
    # First field: identity tag, 2 byte length, 8 byte value.
    assert data[18:21] == bytes([FieldType.IDENTITY, 0, 8])
    assert len(data) == 18 + 2 * (3 + 8) + (3 + 16)


def test_decode_is_strict_inverse():
    data = encode(_hello())
    assert decode(data) == _hello()
    assert encode(decode(data)) == data

    with pytest.raises(CodecError):
        decode(data + b'\0')
    with pytest.raises(CodecError):
        decode(data[:-1])
    with pytest.raises(CodecError):
        decode(data[:5])
    assert try_decode(b'\xff' * 20) is None


def test_decode_rejects_unknown_protocol_and_index():
    data = bytearray(encode(_hello()))
    data[0] = 0xEE
    with pytest.raises(CodecError, match='Unknown protocol id'):
        decode(bytes(data))

    data = bytearray(encode(_hello()))
    data[1] = 9
    with pytest.raises(CodecError, match='outside the flow'):
        decode(bytes(data))


def test_identity_padding_is_canonical():
    assert identity_bytes('S') == b'S' + bytes(7)
    assert identity_label(b'S' + bytes(7)) == 'S'
    with pytest.raises(CodecError):
        identity_label(b'\0S' + bytes(6))
    with pytest.raises(SchemaError):
        identity_bytes('TOO-LONG-ID')
    with pytest.raises(SchemaError):
        identity_bytes('')


def test_encode_rejects_schema_mismatch():
    bad = WireMessage(ProtocolKind.TKDF_SYM, 1, 'A', 'B', [WireField.identity('A')])
    with pytest.raises(SchemaError, match='does not match'):
        encode(bad)
    with pytest.raises(SchemaError):
        encode(WireMessage(ProtocolKind.PSK_DIRECT, 5, 'A', 'B', []))
    with pytest.raises(SchemaError):
        encode(WireMessage(
            ProtocolKind.PSK_DIRECT, 2, 'B', 'A', [WireField(FieldType.NONCE, bytes(3))]
        ))


def test_flows_match_message_counts():
    for kind in ProtocolKind:
        assert len(flow(kind)) == kind.info.flow_length
    first = schema_for(ProtocolKind.TKDF_ASYM, 1)
    assert (first.sender, first.receiver) == (Role.INITIATOR, Role.KEY_SERVER)
    with pytest.raises(KeyError):
        schema_for(ProtocolKind.ON_DEMAND_STS, 5)


_LABEL_CHARS = string.ascii_uppercase + string.digits


def _random_field(rng: Rng, kind: FieldType) -> WireField:
    if kind is FieldType.IDENTITY:
        size = rng.randint(1, 8)
        return WireField.identity(''.join(_LABEL_CHARS[rng.randint(0, 35)] for _ in range(size)))
    if kind in (FieldType.SEALED, FieldType.PK_SEALED):
        aead = kind is FieldType.SEALED
        box = SealedBox(
            scheme=Scheme.AEAD if aead else Scheme.PUBLIC_KEY,
            header=rng.read(rng.randint(0, 40)) if aead else b'',
            body=rng.read(rng.randint(0, 120)),
            tag=rng.read(16) if aead else b'',
            iv=rng.read(12) if aead else b'',
        )
        return WireField(kind, pack_box(box))
    if kind is FieldType.NONCE:
        return WireField.nonce(rng.read(NONCE_BYTES))
    if kind is FieldType.KEY:
        return WireField(kind, rng.read(16 if rng.random() < 0.5 else 32))
    sizes = kind.sizes
    size = sizes[0] if sizes else rng.randint(1, 300)
    return WireField(kind, rng.read(size))


def test_random_messages_encode_injectively():
    rng = Rng(3).derive('messages')
    kinds = list(ProtocolKind)
    messages, encodings = set(), set()
    for _ in range(10_000):
        kind = kinds[rng.randint(0, len(kinds) - 1)]
        schema = flow(kind)[rng.randint(0, kind.info.flow_length - 1)]
        payload = [_random_field(rng, t) for t in schema.fields]
        msg = WireMessage(kind, schema.index, 'A', 'B', payload)
        data = encode(msg)
        assert decode(data) == msg
        assert encode(decode(data)) == data
        messages.add(msg)
        encodings.add(data)
    assert len(encodings) == len(messages)


def test_sealed_terms_round_trip():
    rng = Rng(0)
    key = SymKey.from_material(rng.read(32))
    box = aead_seal(key, b'payload', b'aad', IvSource(rng))
    field = WireField.sealed(box)
    assert field.type is FieldType.SEALED
    assert field.box() == box

    terms = encode_terms([WireField.identity('B'), WireField.key(key)])
    fields = decode_terms(terms, [FieldType.IDENTITY, FieldType.KEY])
    assert fields[1].sym_key() == key
    with pytest.raises(CodecError):
        decode_terms(terms, [FieldType.KEY, FieldType.IDENTITY])


def test_transcript_order_and_json():
    transcript = Transcript()
    data = encode(_hello())
    transcript.append(Frame(10, data, True, ('A', 'B')))
    transcript.append(Frame(10, b'\x01', False, ('A', 'R'), FrameKind.CONTROL))
    with pytest.raises(WireError):
        transcript.append(Frame(5, data, True, ('A', 'B')))

    assert len(transcript) == 2
    assert len(transcript.messages()) == 1
    assert transcript.last_time == 10

    first = json.loads(transcript.to_json_lines().splitlines()[0])
    assert first['decoded']['protocol'] == 'TkdfSym'
    assert first['decoded']['fields'] == ['identity', 'identity', 'nonce']

    other = Transcript()
    other.append(Frame(10, data, True, ('A', 'B')))
    assert other.digest() != transcript.digest()
