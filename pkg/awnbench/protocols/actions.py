"""
What engines ask their driver to do. Engines never perform I/O or read a clock; a driver
(`awnbench.protocols.driver.drive` in memory, or `awnbench.netsim.Simulator`) interprets
these.
"""
from dataclasses import dataclass
from typing import FrozenSet, Union

from awnbench.crypto import SymKey
from awnbench.kinds import ProtocolKind, Transport, Layer


@dataclass(frozen=True)
class SessionKeyMaterial:
    kind: ProtocolKind
    key: SymKey
    local: str
    peer: str
    """ Who this side believes it shares the key with. """
    contributors: FrozenSet[str]
    """
    Nodes whose fresh per-session inputs entered the key. Empty for pre-provisioned
    session keys (PskDirect, PskNetLayer).
    """
    inputs_digest: str
    """ sha256 (hex) of the ordered, length-prefixed derivation inputs. """
    established_at: int


@dataclass(frozen=True)
class Send:
    to: str
    data: bytes
    transport: Transport = Transport.DATAGRAM
    layer: Layer = Layer.NETWORK
    retransmit: bool = False


@dataclass(frozen=True)
class StartTimer:
    timer_id: int
    delay: int
    """ Virtual microseconds from now. """


@dataclass(frozen=True)
class Established:
    material: SessionKeyMaterial


@dataclass(frozen=True)
class Fail:
    reason: str


Action = Union[Send, StartTimer, Established, Fail]
