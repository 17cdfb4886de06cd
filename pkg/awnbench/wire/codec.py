"""
Byte-exact message codec.

```
protocol_id u8 | msg_index u8 | sender (8) | receiver (8) | field TLV ...
```

There is no field count; the fields run to the end of the buffer and must match the
schema for (protocol_id, msg_index) exactly. `decode` is strict, so every accepted byte
string re-encodes to itself.
"""
import struct
from dataclasses import dataclass, field
from typing import Tuple, Optional

from awnbench.kinds import ProtocolKind
from awnbench.wire.errors import SchemaError, CodecError
from awnbench.wire.fields import (
    WireField, FieldType, encode_fields, decode_fields, identity_bytes, identity_label,
    IDENTITY_BYTES,
)
from awnbench.wire.schemas import SCHEMAS

HEADER_BYTES = 2 + 2 * IDENTITY_BYTES


@dataclass(frozen=True)
class WireMessage:
    kind: ProtocolKind
    index: int
    sender: str
    receiver: str
    payload: Tuple[WireField, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, 'payload', tuple(self.payload))

    def fields(self, kind: FieldType) -> Tuple[WireField, ...]:
        return tuple(f for f in self.payload if f.type is kind)

    def first(self, kind: FieldType) -> WireField:
        for f in self.payload:
            if f.type is kind:
                return f
        raise KeyError(kind)


def encode(msg: WireMessage) -> bytes:
    schema = SCHEMAS.get((msg.kind, msg.index))
    if schema is None:
        raise SchemaError(
            f"Message index ({msg.index}) outside the flow of ({msg.kind.value})."
        )

    got = tuple(f.type for f in msg.payload)
    if got != schema.fields:
        missing = [t.name.lower() for t in schema.fields if t not in got]
        detail = f"; missing ({', '.join(missing)})" if missing else ""
        raise SchemaError(
            f"Payload ({', '.join(t.name for t in got)}) does not match the schema of "
            f"({msg.kind.value}) message ({msg.index}){detail}."
        )

    header = struct.pack('>BB', msg.kind.tag, msg.index)
    return (
        header
        + identity_bytes(msg.sender)
        + identity_bytes(msg.receiver)
        + encode_fields(msg.payload)
    )


def decode(data: bytes) -> WireMessage:
    data = bytes(data)
    if len(data) < HEADER_BYTES:
        raise CodecError(f"Truncated header: ({len(data)}) of ({HEADER_BYTES}) bytes.")

    tag, index = data[0], data[1]
    try:
        kind = ProtocolKind.from_tag(tag)
    except KeyError:
        raise CodecError(f"Unknown protocol id ({tag}).")

    schema = SCHEMAS.get((kind, index))
    if schema is None:
        raise CodecError(f"Message index ({index}) outside the flow of ({kind.value}).")

    sender = identity_label(data[2:2 + IDENTITY_BYTES])
    receiver = identity_label(data[2 + IDENTITY_BYTES:HEADER_BYTES])
    payload = decode_fields(data[HEADER_BYTES:], f"{kind.value} message {index}")

    if tuple(f.type for f in payload) != schema.fields:
        raise CodecError(
            f"Fields ({', '.join(f.type.name for f in payload)}) do not match the schema "
            f"of ({kind.value}) message ({index})."
        )
    return WireMessage(kind, index, sender, receiver, payload)


def try_decode(data: bytes) -> Optional[WireMessage]:
    """ `decode`, returning None for anything that is not a valid message. """
    try:
        return decode(data)
    except CodecError:
        return None


def decoded_view(data: bytes) -> Optional[dict]:
    """ JSON-friendly summary of a frame, used by transcript dumps. """
    msg = try_decode(data)
    if msg is None:
        return None
    return {
        'protocol': msg.kind.value,
        'index': msg.index,
        'sender': msg.sender,
        'receiver': msg.receiver,
        'fields': [f.type.name.lower() for f in msg.payload],
    }
