"""
Loss-free, zero-latency pump for engines; what the property checks and structural goal
analysis run on. The network simulator is the timing-accurate counterpart.
"""
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Tuple, Optional, Iterable

from xsentinels.default import Default

from awnbench.crypto import CryptoMeter, CryptoOp, Rng
from awnbench.kinds import ProtocolKind, Role
from awnbench.protocols.actions import Action, Send, Established, Fail
from awnbench.protocols.engine import ProtocolEngine, NodeIds, RetryPolicy
from awnbench.protocols.errors import ProtocolError
from awnbench.protocols.factory import new_engine
from awnbench.protocols.keystore import Keystore, provision


@dataclass
class DriveResult:
    frames: List[Tuple[str, str, bytes]] = field(default_factory=list)
    """ (from, to, bytes) in delivery order. """
    actions: Dict[str, List[Action]] = field(default_factory=dict)
    crypto: Dict[str, Dict[CryptoOp, int]] = field(default_factory=dict)
    """ Per-node crypto operation counts. """

    def established(self, node: str) -> bool:
        return any(isinstance(a, Established) for a in self.actions.get(node, ()))

    def failures(self, node: str) -> List[str]:
        return [a.reason for a in self.actions.get(node, ()) if isinstance(a, Fail)]


def drive(
        engines: Mapping[str, ProtocolEngine],
        max_messages: int = 1000,
) -> DriveResult:
    """
    Starts every initiator in `engines` and delivers each Send to the engine bound to its
    destination, in FIFO order, until nothing is left in flight. Timers never fire.
    """
    result = DriveResult()
    in_flight = deque()

    def run(node: str, call) -> None:
        with CryptoMeter() as meter:
            actions = call()
        counts = result.crypto.setdefault(node, {})
        for op, n in meter.counts.items():
            counts[op] = counts.get(op, 0) + n
        result.actions.setdefault(node, []).extend(actions)
        in_flight.extend((node, a) for a in actions if isinstance(a, Send))

    for node, engine in engines.items():
        if engine.role is Role.INITIATOR:
            run(node, lambda e=engine: e.start(0))

    while in_flight:
        if len(result.frames) >= max_messages:
            raise ProtocolError(f"Handshake did not settle within ({max_messages}) messages.")
        sender, send = in_flight.popleft()
        result.frames.append((sender, send.to, send.data))
        target = engines.get(send.to)
        if target is not None:
            run(send.to, lambda t=target, s=send: t.on_message(sender, s.data, 0))

    return result


def build_engines(
        kind: ProtocolKind,
        stores: Dict[str, Keystore],
        seed: int,
        ids: NodeIds = NodeIds('A', 'B', 'S'),
        roles: Optional[Iterable[Role]] = None,
        retry: RetryPolicy = Default,
) -> Dict[str, ProtocolEngine]:
    """ One engine per role of `ids`, each with its own child generator of `seed`. """
    if roles is None:
        roles = [Role.INITIATOR, Role.RESPONDER]
        if kind.uses_server:
            roles.append(Role.KEY_SERVER)

    rng = Rng(seed).derive('engines', kind.value)
    engines = {}
    for role in roles:
        node = ids.of(role)
        engines[node] = new_engine(
            kind, role, ids, stores[node], rng.derive(role.value, node), retry
        )
    return engines


def handshake(
        kind: ProtocolKind,
        seed: int = 0,
        provisioning_seed: int = 0,
        stores: Optional[Dict[str, Keystore]] = None,
        ids: NodeIds = NodeIds('A', 'B', 'S'),
        retry: RetryPolicy = Default,
) -> Tuple[Dict[str, ProtocolEngine], DriveResult]:
    """
    One loss-free run of `kind` between `ids.initiator` and `ids.responder`.

    Pass `stores` to keep long-term state (e.g. ratcheted server keys) across runs;
    otherwise fresh material is provisioned from `provisioning_seed`. `retry` only matters
    to callers that go on to fire the engines' timers themselves; `drive` never does.
    """
    if stores is None:
        stores = provision(
            kind, [ids.initiator, ids.responder], ids.server, provisioning_seed
        )
    engines = build_engines(kind, stores, seed, ids, retry=retry)
    return engines, drive(engines)
