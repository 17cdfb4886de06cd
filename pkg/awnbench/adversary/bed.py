"""
The attack bed: a fully meshed, loss-free, zero-cost network holding the honest peers
`A` and `B`, a bystander `C`, the intruder's registered identity `I`, its alias `Z`
and, for the TKDF kinds, the key server `S`.

The attacker controls the network through the simulator's interceptor: it sees every
frame an engine sends and decides what actually goes on the air.
"""
from itertools import combinations
from logging import getLogger
from typing import Dict, Iterable, Optional

from awnbench.crypto import Rng
from awnbench.kinds import ProtocolKind, Role
from awnbench.netsim import CryptoCostModel, LinkModel, NodeRole, Simulator, Topology
from awnbench.protocols import (
    Keystore, NodeIds, PrerequisiteError, ProtocolEngine, new_engine, provision
)
from awnbench.adversary.errors import ScriptError
from awnbench.adversary.knowledge import Knowledge

log = getLogger(__name__)

ATTACK_PEERS = ('A', 'B', 'C', 'I', 'Z')
ATTACK_SERVER = 'S'


def attack_topology(kind: ProtocolKind) -> Topology:
    nodes = [(p, NodeRole.PEER) for p in ATTACK_PEERS]
    if kind.uses_server:
        nodes.append((ATTACK_SERVER, NodeRole.KEY_SERVER))
    links = [
        LinkModel(a=a, b=b, latency_base=1000, latency_jitter=0)
        for (a, _), (b, _) in combinations(nodes, 2)
    ]
    return Topology.build(nodes, links)


class AttackBed:
    def __init__(self, kind: ProtocolKind, seed: int, provisioning_seed: int = 0):
        self.kind = kind
        self.seed = seed
        self.server = ATTACK_SERVER if kind.uses_server else None
        self.stores: Dict[str, Keystore] = provision(
            kind, ATTACK_PEERS, self.server, provisioning_seed
        )
        self.topology = attack_topology(kind)
        self.knowledge = Knowledge()
        self._rng = Rng(seed).derive('attack', kind.value)
        self._sessions = 0

    def ids(self, initiator: str = 'A', responder: str = 'B') -> NodeIds:
        return NodeIds(initiator, responder, self.server)

    def check_node(self, node: str, what: str = 'node'):
        if node not in self.stores:
            raise ScriptError(f"The attack bed has no {what} ({node}).")

    def simulator(self) -> Simulator:
        """ A fresh simulator for the next session; long-term keystores carry over. """
        self._sessions += 1
        return Simulator(
            self.topology,
            self._rng.derive('network', self._sessions),
            costs=CryptoCostModel(),
        )

    def engine(
            self,
            role: Role,
            ids: NodeIds,
            store: Optional[Keystore] = None,
            label: str = 'honest',
    ) -> ProtocolEngine:
        node = ids.of(role)
        store = self.stores[node] if store is None else store
        rng = self._rng.derive('session', self._sessions, label, role.value, node)
        retry = self.topology.retry_policy(ids, self.kind)
        return new_engine(self.kind, role, ids, store, rng, retry)

    def bind(self, sim: Simulator, engines: Iterable[ProtocolEngine]):
        for engine in engines:
            sim.attach_engine(engine.self_id, engine)

    def bind_server(self, sim: Simulator, ids: NodeIds):
        if self.server:
            self.bind(sim, [self.engine(Role.KEY_SERVER, ids)])

    def run(self, sim: Simulator, start: Optional[str] = None) -> Simulator:
        if start is not None:
            sim.start(start)
        sim.run()
        self.knowledge.observe(f.data for f in sim.transcript)
        return sim

    def honest_session(self, ids: Optional[NodeIds] = None) -> Simulator:
        """ One undisturbed handshake between `A` and `B`, observed by the attacker. """
        ids = ids or self.ids()
        sim = self.simulator()
        self.bind(sim, [self.engine(Role.INITIATOR, ids), self.engine(Role.RESPONDER, ids)])
        self.bind_server(sim, ids)
        return self.run(sim, ids.initiator)

    def impostor_store(self, source: Keystore, owner: str) -> Keystore:
        """
        `source`'s material, presented under `owner`'s name. A secret `source` shares with
        `owner` is the one `owner` uses towards `source`, so it is filed under both names.
        """
        shared = dict(source.shared)
        if owner in shared:
            shared.setdefault(source.owner, shared[owner])
        directory = dict(source.directory)
        if source.keypair is not None:
            directory.setdefault(source.owner, source.keypair.public_part)
        return Keystore(
            owner=owner,
            group_key=source.group_key,
            shared=shared,
            keypair=source.keypair,
            server_public=source.server_public,
            directory=directory,
        )

    def attacker_rng(self, label: str) -> Rng:
        return self._rng.derive('attacker', self._sessions, label)

    def try_engine(self, role: Role, ids: NodeIds, store: Keystore, label: str):
        """ The attacker's engine, or None when its material cannot even run the role. """
        try:
            return self.engine(role, ids, store, label)
        except PrerequisiteError as e:
            log.debug(f"Attacker cannot run ({role.value}) of ({self.kind.value}): {e}")
            return None
