from typing import List, Optional

from awnbench.errors import AwnError


class BenchError(AwnError):
    pass


class ParseError(BenchError):
    """ A scenario file is not valid JSON; `line`/`column` point at the problem. """

    def __init__(self, msg: str, line: Optional[int] = None, column: Optional[int] = None):
        super().__init__(msg)
        self.line = line
        self.column = column


class ValidationError(BenchError):
    """ A scenario parsed but breaks its invariants. Every violation is listed, by field. """

    def __init__(self, problems: List[str], source: str = 'config'):
        self.problems = list(problems)
        self.source = source
        listing = '\n'.join(f"  - {p}" for p in self.problems)
        super().__init__(f"Scenario ({source}) has ({len(self.problems)}) problem(s):\n{listing}")


class InsecureProtocolError(BenchError):
    """ A negative-control protocol was asked for without explicitly allowing it. """


class IncompleteSummary(BenchError):
    """ An ordering check is missing one of the families it compares. """
