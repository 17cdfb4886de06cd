from awnbench.errors import AwnError


class NetsimError(AwnError):
    pass


class Unreachable(NetsimError):
    pass


class BindingError(NetsimError):
    """ An engine was attached to a node that does not exist or does not match its ids. """


class HorizonExceeded(NetsimError):
    """ Events were still queued past the configured virtual horizon. """


class StreamError(NetsimError):
    pass


class SetupTimeout(StreamError):
    pass


class DeliveryTimeout(StreamError):
    pass
