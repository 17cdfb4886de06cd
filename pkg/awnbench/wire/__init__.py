"""
Deterministic byte encoding of every protocol message, plus the on-air transcript.

See `awnbench.wire.codec` for the message layout and `docs/index.md` for a worked byte
table of a TKDF hello.
"""
from .errors import WireError, SchemaError, CodecError
from .fields import (
    FieldType, WireField, encode_terms, decode_terms, pack_box, unpack_box,
    identity_bytes, identity_label, IDENTITY_BYTES,
)
from .schemas import MessageSchema, schema_for, flow, SCHEMAS
from .codec import WireMessage, encode, decode, try_decode, decoded_view
from .transcript import Frame, FrameKind, Transcript

__all__ = [
    'WireError',
    'SchemaError',
    'CodecError',
    'FieldType',
    'WireField',
    'encode_terms',
    'decode_terms',
    'pack_box',
    'unpack_box',
    'identity_bytes',
    'identity_label',
    'IDENTITY_BYTES',
    'MessageSchema',
    'schema_for',
    'flow',
    'SCHEMAS',
    'WireMessage',
    'encode',
    'decode',
    'try_decode',
    'decoded_view',
    'Frame',
    'FrameKind',
    'Transcript',
]
