"""
Verdict vocabulary of the goals comparison, and the goal / column catalogue.
"""
from enum import Enum
from typing import Dict, Tuple

from awnbench.kinds import ProtocolKind


class Verdict(Enum):
    MEETS = '*'
    CONDITIONAL = '(*)'
    """ Met under conditions the table does not state. """
    FAILS = '×'
    IMPLICIT = '−*'
    """ Met implicitly, through a prior relationship between the nodes. """

    @property
    def symbol(self) -> str:
        return self.value

    @classmethod
    def parse(cls, value) -> 'Verdict':
        if isinstance(value, Verdict):
            return value
        for v in cls:
            if value == v.value or str(value).upper() == v.name:
                return v
        # ASCII hyphen for the minus sign and 'x' for the cross are common in typed input.
        aliases = {'-*': cls.IMPLICIT, 'x': cls.FAILS, 'X': cls.FAILS}
        try:
            return aliases[value]
        except KeyError:
            raise ValueError(f"Unknown verdict ({value}).") from None


class Origin(Enum):
    STATIC_PAPER = 'static-paper'
    DYNAMIC_ATTACK = 'dynamic-attack'
    STATIC_STRUCTURAL = 'static-structural'


GOALS: Dict[str, str] = {
    'G1': 'Mutual entity authentication',
    'G2': 'Asymmetric architecture',
    'G3': 'Mutual key agreement',
    'G4': 'Joint key control',
    'G5': 'Key freshness',
    'G6': 'Mutual key confirmation',
    'G7': 'Known-key security',
    'G8': 'Unknown key-share resilience',
    'G9': 'Key compromise impersonation resilience',
    'G10': 'Perfect forward secrecy',
    'G11': 'Mutual non-repudiation',
    'G12': 'Partial chosen-key resilience',
    'G13': 'Identity privacy',
}

DYNAMIC_GOALS: Tuple[str, ...] = ('G1', 'G5', 'G6', 'G8', 'G9', 'G10', 'G13')
STRUCTURAL_GOALS: Tuple[str, ...] = ('G2', 'G3', 'G4', 'G7', 'G11', 'G12')

COLUMNS: Tuple[str, ...] = ('WEP', 'WPA-PSK', 'IPSec', 'SymTKDF', 'AsymTKDF', 'SSH', 'SSL')


def column_kind(column: str) -> ProtocolKind:
    """ Representative kind of a comparison column (SSH and SSL share one). """
    for kind in ProtocolKind:
        if column in kind.info.analogs:
            return kind
    raise ValueError(f"Unknown comparison column ({column}), expected one of {COLUMNS}.")


def kind_column(kind: ProtocolKind) -> str:
    """ First comparison column `kind` stands for. """
    analogs = kind.info.analogs
    if not analogs:
        raise ValueError(f"Protocol ({kind.value}) has no comparison column.")
    return analogs[0]
