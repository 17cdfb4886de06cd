from awnbench.errors import AwnError


class ProtocolError(AwnError):
    pass


class PrerequisiteError(ProtocolError):
    """ The keystore handed to `new_engine` lacks (or has unusable) long-term material. """


class RoleError(ProtocolError):
    pass


class NotEstablished(ProtocolError):
    pass


class HandshakeReject(ProtocolError):
    """
    Raised inside an engine's message handler when a check fails; the engine turns it into
    a `Fail(reason)` action. Never escapes `on_message`.
    """

    def __init__(self, reason: str, detail: str = ''):
        super().__init__(f"{reason}: {detail}" if detail else reason)
        self.reason = reason
