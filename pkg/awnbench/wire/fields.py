"""
Typed payload fields and their tag-length-value encoding.

Every field on the wire is `type (u8) | length (u16, big-endian) | value`. The same
encoding is used for the plaintext inside sealed boxes (`encode_terms` / `decode_terms`),
so a box's contents are as strictly parsed as a top-level message.
"""
import struct
from dataclasses import dataclass
from enum import IntEnum
from typing import Iterable, Optional, Sequence, Tuple, Type

from awnbench.crypto import SealedBox, Scheme, SymKey
from awnbench.crypto.types import NONCE_BYTES
from awnbench.wire.errors import WireError, SchemaError, CodecError

IDENTITY_BYTES = 8
MAX_FIELD_BYTES = 0xFFFF


class FieldType(IntEnum):
    IDENTITY = 0x01
    NONCE = 0x02
    SEALED = 0x03
    """ Symmetric AEAD box. """
    DH_PUBLIC = 0x04
    SIGNATURE = 0x05
    TIMESTAMP = 0x06
    """ 64-bit virtual microseconds. """
    MAC = 0x07
    STATUS = 0x08
    PUBLIC_KEY = 0x09
    """ DER encoded RSA public key. """
    KEY = 0x0A
    """ Raw symmetric key material (only ever inside a sealed box). """
    PK_SEALED = 0x0B
    """ Public-key (RSA-OAEP) box. """

    @property
    def sizes(self) -> Optional[Tuple[int, ...]]:
        """ Permitted value lengths, or None for variable-length fields. """
        return _FIXED_SIZES.get(self)


_FIXED_SIZES = {
    FieldType.IDENTITY: (IDENTITY_BYTES,),
    FieldType.NONCE: (NONCE_BYTES,),
    FieldType.DH_PUBLIC: (32,),
    FieldType.TIMESTAMP: (8,),
    FieldType.MAC: (16,),
    FieldType.STATUS: (1,),
    FieldType.KEY: (16, 32),
}

_BOX_SCHEMES = {FieldType.SEALED: Scheme.AEAD, FieldType.PK_SEALED: Scheme.PUBLIC_KEY}


def identity_bytes(label: str, error: Type[WireError] = SchemaError) -> bytes:
    """ 'A' -> b'A\\x00\\x00\\x00\\x00\\x00\\x00\\x00' """
    try:
        raw = label.encode('ascii')
    except (UnicodeEncodeError, AttributeError):
        raise error(f"Identity ({label!r}) is not an ASCII label.")
    if not raw or len(raw) > IDENTITY_BYTES or b'\0' in raw:
        raise error(f"Identity ({label!r}) must be 1 to 8 ASCII characters without NUL.")
    return raw.ljust(IDENTITY_BYTES, b'\0')


def identity_label(raw: bytes, error: Type[WireError] = CodecError) -> str:
    label = bytes(raw).rstrip(b'\0')
    try:
        text = label.decode('ascii')
    except UnicodeDecodeError:
        raise error(f"Identity bytes ({raw.hex()}) are not ASCII.")
    # Only the canonical padding is accepted, so one identity has one encoding.
    if len(raw) != IDENTITY_BYTES or not label or b'\0' in label:
        raise error(f"Identity bytes ({raw.hex()}) are not a padded 8-byte label.")
    return text


class _Reader:
    def __init__(self, data: bytes, what: str):
        self.data = bytes(data)
        self.pos = 0
        self.what = what

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise CodecError(
                f"Truncated {self.what}: wanted ({n}) bytes at offset ({self.pos}), "
                f"only ({len(self.data) - self.pos}) left."
            )
        chunk = self.data[self.pos:self.pos + n]
        self.pos += n
        return chunk

    def u8(self) -> int:
        return self.take(1)[0]

    def u16(self) -> int:
        return struct.unpack('>H', self.take(2))[0]

    @property
    def remaining(self) -> int:
        return len(self.data) - self.pos


def pack_box(box: SealedBox) -> bytes:
    """ scheme u8 | iv (len u8) | header (len u16) | body (len u16) | tag (len u8) """
    if len(box.iv) > 0xFF or len(box.tag) > 0xFF:
        raise SchemaError("Sealed box iv/tag longer than 255 bytes.")
    if len(box.header) > MAX_FIELD_BYTES or len(box.body) > MAX_FIELD_BYTES:
        raise SchemaError("Sealed box header/body longer than 65535 bytes.")
    return b''.join([
        struct.pack('>BB', box.scheme.value, len(box.iv)), box.iv,
        struct.pack('>H', len(box.header)), box.header,
        struct.pack('>H', len(box.body)), box.body,
        struct.pack('>B', len(box.tag)), box.tag,
    ])


def unpack_box(data: bytes) -> SealedBox:
    reader = _Reader(data, 'sealed box')
    try:
        scheme = Scheme(reader.u8())
    except ValueError:
        raise CodecError(f"Unknown sealed box scheme ({data[0]}).")
    iv = reader.take(reader.u8())
    header = reader.take(reader.u16())
    body = reader.take(reader.u16())
    tag = reader.take(reader.u8())
    if reader.remaining:
        raise CodecError(f"Trailing ({reader.remaining}) bytes after sealed box.")
    return SealedBox(scheme=scheme, header=header, body=body, tag=tag, iv=iv)


@dataclass(frozen=True)
class WireField:
    type: FieldType
    value: bytes

    @classmethod
    def identity(cls, label: str) -> 'WireField':
        return cls(FieldType.IDENTITY, identity_bytes(label))

    @classmethod
    def nonce(cls, value: bytes) -> 'WireField':
        return cls(FieldType.NONCE, bytes(value))

    @classmethod
    def sealed(cls, box: SealedBox) -> 'WireField':
        kind = FieldType.SEALED if box.scheme is Scheme.AEAD else FieldType.PK_SEALED
        return cls(kind, pack_box(box))

    @classmethod
    def dh_public(cls, value: bytes) -> 'WireField':
        return cls(FieldType.DH_PUBLIC, bytes(value))

    @classmethod
    def signature(cls, value: bytes) -> 'WireField':
        return cls(FieldType.SIGNATURE, bytes(value))

    @classmethod
    def timestamp(cls, virtual_us: int) -> 'WireField':
        return cls(FieldType.TIMESTAMP, struct.pack('>Q', virtual_us))

    @classmethod
    def mac(cls, value: bytes) -> 'WireField':
        return cls(FieldType.MAC, bytes(value))

    @classmethod
    def status(cls, code: int) -> 'WireField':
        return cls(FieldType.STATUS, bytes([code]))

    @classmethod
    def public_key(cls, der: bytes) -> 'WireField':
        return cls(FieldType.PUBLIC_KEY, bytes(der))

    @classmethod
    def key(cls, key: SymKey) -> 'WireField':
        return cls(FieldType.KEY, key.material)

    def label(self) -> str:
        return identity_label(self.value)

    def box(self) -> SealedBox:
        return unpack_box(self.value)

    def timestamp_us(self) -> int:
        return struct.unpack('>Q', self.value)[0]

    def sym_key(self) -> SymKey:
        return SymKey.from_material(self.value)

    def check(self, error: Type[WireError]):
        """ Raises `error` unless this field's value is well-formed for its type. """
        sizes = self.type.sizes
        if sizes is not None and len(self.value) not in sizes:
            raise error(
                f"Field ({self.type.name}) must be ({'|'.join(map(str, sizes))}) bytes, "
                f"got ({len(self.value)})."
            )
        if len(self.value) > MAX_FIELD_BYTES:
            raise error(f"Field ({self.type.name}) longer than 65535 bytes.")
        if self.type is FieldType.IDENTITY:
            identity_label(self.value, error=error)
        scheme = _BOX_SCHEMES.get(self.type)
        if scheme is not None:
            try:
                box = unpack_box(self.value)
            except CodecError as e:
                raise error(str(e)) from e
            if box.scheme is not scheme:
                raise error(f"Field ({self.type.name}) carries a ({box.scheme.name}) box.")


def encode_fields(fields: Iterable[WireField]) -> bytes:
    out = []
    for f in fields:
        f.check(SchemaError)
        out.append(struct.pack('>BH', f.type, len(f.value)) + f.value)
    return b''.join(out)


def decode_fields(data: bytes, what: str = 'fields') -> Tuple[WireField, ...]:
    reader = _Reader(data, what)
    fields = []
    while reader.remaining:
        code = reader.u8()
        try:
            kind = FieldType(code)
        except ValueError:
            raise CodecError(f"Unknown field type ({code:#04x}) in {what}.")
        field = WireField(kind, reader.take(reader.u16()))
        field.check(CodecError)
        fields.append(field)
    return tuple(fields)


def encode_terms(fields: Iterable[WireField]) -> bytes:
    """ Encodes the plaintext of a sealed box; same TLV as message payloads. """
    return encode_fields(fields)


def decode_terms(
        data: bytes, expected: Optional[Sequence[FieldType]] = None
) -> Tuple[WireField, ...]:
    """
    Parses a box plaintext. When `expected` is given, the field types must match it exactly
    (order and count), otherwise `CodecError`.
    """
    fields = decode_fields(data, 'sealed terms')
    if expected is not None and tuple(f.type for f in fields) != tuple(expected):
        got = ', '.join(f.type.name for f in fields)
        raise CodecError(
            f"Sealed terms ({got}) do not match ({', '.join(t.name for t in expected)})."
        )
    return fields
