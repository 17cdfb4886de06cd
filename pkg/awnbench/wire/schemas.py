"""
Per-(protocol, message index) schemas: who sends the message to whom, and the exact
field types of its payload, in order.

Engines read the sender/receiver roles from here to know which messages they send and
which they wait for; the codec uses the field list to reject anything else.
"""
from dataclasses import dataclass
from typing import Dict, Tuple

from awnbench.kinds import ProtocolKind, Role
from awnbench.wire.fields import FieldType as F

_I, _R, _S = Role.INITIATOR, Role.RESPONDER, Role.KEY_SERVER


@dataclass(frozen=True)
class MessageSchema:
    kind: ProtocolKind
    index: int
    sender: Role
    receiver: Role
    fields: Tuple[F, ...]


_PSK_CHALLENGE = [
    (_I, _R, (F.IDENTITY,)),
    (_R, _I, (F.NONCE,)),
    (_I, _R, (F.SEALED,)),
    (_R, _I, (F.STATUS,)),
]

_FLOWS = {
    ProtocolKind.PSK_DIRECT: _PSK_CHALLENGE,
    ProtocolKind.PSK_NET_LAYER: _PSK_CHALLENGE,
    ProtocolKind.PSK_MASTER: [
        (_I, _R, (F.IDENTITY, F.NONCE)),
        (_R, _I, (F.NONCE, F.MAC)),
        (_I, _R, (F.MAC,)),
        (_R, _I, (F.MAC,)),
    ],
    ProtocolKind.TKDF_SYM: [
        (_I, _R, (F.IDENTITY, F.IDENTITY, F.NONCE)),
        (_R, _I, (F.SEALED,)),
        (_I, _S, (F.IDENTITY, F.IDENTITY, F.NONCE, F.SEALED)),
        (_S, _I, (F.SEALED,)),
        (_I, _R, (F.SEALED,)),
        (_R, _I, (F.SEALED,)),
        (_I, _R, (F.SEALED,)),
    ],
    ProtocolKind.TKDF_SYM_UNFIXED: [
        (_I, _S, (F.IDENTITY, F.IDENTITY, F.NONCE)),
        (_S, _I, (F.SEALED,)),
        (_I, _R, (F.SEALED,)),
        (_R, _I, (F.SEALED,)),
        (_I, _R, (F.SEALED,)),
    ],
    ProtocolKind.ON_DEMAND_STS: [
        (_I, _R, (F.DH_PUBLIC, F.NONCE)),
        (_R, _I, (F.DH_PUBLIC, F.NONCE, F.SIGNATURE)),
        (_I, _R, (F.SIGNATURE,)),
        (_R, _I, (F.MAC,)),
    ],
}

_ASYM = [
    (_I, _S, (F.IDENTITY, F.IDENTITY)),
    (_S, _I, (F.PUBLIC_KEY, F.IDENTITY, F.SIGNATURE)),
    (_I, _R, (F.PK_SEALED,)),
    (_R, _S, (F.IDENTITY, F.IDENTITY)),
    (_S, _R, (F.PUBLIC_KEY, F.IDENTITY, F.SIGNATURE)),
    (_R, _I, (F.PK_SEALED,)),
    (_I, _R, (F.PK_SEALED,)),
]
_FLOWS[ProtocolKind.TKDF_ASYM] = _ASYM
_FLOWS[ProtocolKind.TKDF_ASYM_UNFIXED] = _ASYM

SCHEMAS: Dict[Tuple[ProtocolKind, int], MessageSchema] = {
    (kind, index): MessageSchema(kind, index, sender, receiver, fields)
    for kind, flow in _FLOWS.items()
    for index, (sender, receiver, fields) in enumerate(flow, start=1)
}

for _kind in ProtocolKind:
    assert len(_FLOWS[_kind]) == _kind.info.flow_length, _kind


def schema_for(kind: ProtocolKind, index: int) -> MessageSchema:
    """ Raises `KeyError` for an index outside the protocol's flow. """
    return SCHEMAS[(kind, index)]


def flow(kind: ProtocolKind) -> Tuple[MessageSchema, ...]:
    return tuple(SCHEMAS[(kind, i)] for i in range(1, kind.info.flow_length + 1))
