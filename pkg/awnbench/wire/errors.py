from awnbench.errors import AwnError


class WireError(AwnError):
    pass


class SchemaError(WireError):
    """ Raised by `encode` when a message's payload does not fit its (protocol, index) schema. """


class CodecError(WireError):
    """
    Raised by `decode` for bytes that are not the encoding of any schema-valid message:
    truncation, trailing bytes, unknown protocol tags, or fields that belong to another
    protocol's flow.
    """
