from awnbench.errors import AwnError


class AdversaryError(AwnError):
    pass


class ScriptError(AdversaryError):
    """ The attack script does not apply to the protocol, or names unknown nodes. """
