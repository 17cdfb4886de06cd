from awnbench.errors import AwnError


class GoalsError(AwnError):
    pass


class FixtureChecksumError(GoalsError):
    """ The bundled comparison table does not match its pinned checksum. """
