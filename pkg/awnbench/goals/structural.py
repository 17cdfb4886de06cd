"""
Goals that concern protocol structure rather than what an attacker can reach. Each one
is decided by a rule over a loss-free handshake (`awnbench.protocols.drive`):

| Goal | Rule                                                                               |
|------|------------------------------------------------------------------------------------|
| G2   | both peers hold a key pair whose public half the other side can vouch for          |
|      | (a trusted server key or a pre-installed peer key) -> Meets, else Fails            |
| G3   | key contributors include both peers -> Meets; no contributors -> Fails; only the   |
|      | server contributes -> Implicit; a single peer -> Conditional                       |
| G4   | both peers contribute and the server does not -> Meets; server only -> Implicit;   |
|      | otherwise Fails                                                                    |
| G7   | the key depends on some per-session fresh input -> Meets, else Fails               |
| G11  | both peers perform a private-key operation (sign or decrypt) -> Meets, else Fails  |
| G12  | the key is not determined by one peer alone -> Meets, else Fails                   |

Contributors are found by dependency analysis: the handshake is re-run with one node's
randomness replaced at a time, and a node contributes when its randomness changes the
key. The result is cross-checked against the contributors the engines declare.
"""
from dataclasses import dataclass
from logging import getLogger
from typing import Dict, FrozenSet, Optional

from awnbench.crypto import CryptoOp, Rng
from awnbench.kinds import ProtocolKind
from awnbench.protocols import (
    DriveResult, Established, NodeIds, Keystore, build_engines, drive, new_engine, provision
)
from awnbench.goals.errors import GoalsError
from awnbench.goals.verdicts import Verdict

log = getLogger(__name__)

IDS = NodeIds('A', 'B', 'S')
PEERS = frozenset((IDS.initiator, IDS.responder))
PRIVATE_OPS = (CryptoOp.SIGN, CryptoOp.PK_DECRYPT)


@dataclass(frozen=True)
class StructuralVerdict:
    verdict: Verdict
    note: str = ''


@dataclass(frozen=True)
class KeyStructure:
    """ What the structural rules look at, for one kind. """
    contributors: FrozenSet[str]
    private_ops: Dict[str, int]
    """ Private-key operations per peer during the handshake. """
    certified: bool
    """ Both peers hold key pairs the other side can authenticate. """


def _stores(kind: ProtocolKind, provisioning_seed: int) -> Dict[str, Keystore]:
    return provision(kind, [IDS.initiator, IDS.responder], IDS.server, provisioning_seed)


def _key(result: DriveResult, node: str) -> Optional[bytes]:
    for action in result.actions.get(node, ()):
        if isinstance(action, Established):
            return action.material.key.material
    return None


def _run(kind, seed, provisioning_seed, perturbed: str = None) -> DriveResult:
    # Fresh stores each time; the fixed symmetric TKDF ratchets its server keys.
    stores = _stores(kind, provisioning_seed)
    engines = build_engines(kind, stores, seed, IDS)
    if perturbed is not None:
        role = engines[perturbed].role
        rng = Rng(seed).derive('perturbed', kind.value, perturbed)
        engines[perturbed] = new_engine(kind, role, IDS, stores[perturbed], rng)
    return drive(engines)


def key_structure(
        kind: ProtocolKind, seed: int = 0, provisioning_seed: int = 0
) -> KeyStructure:
    """
    Raises:
        GoalsError: the honest handshake did not agree on a key, or the measured
            contributors disagree with the ones the engines declare.
    """
    kind = ProtocolKind.parse(kind)
    base = _run(kind, seed, provisioning_seed)
    key = _key(base, IDS.initiator)
    if key is None or key != _key(base, IDS.responder):
        raise GoalsError(f"Honest ({kind.value}) handshake did not agree on a key.")

    nodes = [IDS.initiator, IDS.responder] + ([IDS.server] if kind.uses_server else [])
    contributors = set()
    for node in nodes:
        other = _run(kind, seed, provisioning_seed, perturbed=node)
        if _key(other, IDS.initiator) != key:
            contributors.add(node)
    contributors = frozenset(contributors)

    declared = next(
        a.material.contributors
        for a in base.actions[IDS.initiator]
        if isinstance(a, Established)
    )
    if frozenset(declared) != contributors:
        raise GoalsError(
            f"({kind.value}) declares key contributors ({sorted(declared)}) but the key "
            f"depends on ({sorted(contributors)})."
        )

    stores = _stores(kind, provisioning_seed)
    certified = all(_vouched(stores, p) for p in PEERS)
    private_ops = {
        p: sum(base.crypto.get(p, {}).get(op, 0) for op in PRIVATE_OPS) for p in PEERS
    }
    return KeyStructure(contributors, private_ops, certified)


def _vouched(stores: Dict[str, Keystore], peer: str) -> bool:
    store = stores[peer]
    if store.keypair is None:
        return False
    if store.server_public is not None:
        return IDS.server in stores and stores[IDS.server].directory.get(peer) is not None
    others = [s for n, s in stores.items() if n in PEERS and n != peer]
    return all(s.directory.get(peer) is not None for s in others)


def _agreement(contributors: FrozenSet[str]) -> Verdict:
    if PEERS <= contributors:
        return Verdict.MEETS
    if not contributors:
        return Verdict.FAILS
    if contributors == {IDS.server}:
        return Verdict.IMPLICIT
    return Verdict.CONDITIONAL


def _joint_control(contributors: FrozenSet[str]) -> Verdict:
    if PEERS <= contributors and IDS.server not in contributors:
        return Verdict.MEETS
    if contributors == {IDS.server}:
        return Verdict.IMPLICIT
    return Verdict.FAILS


def evaluate_structural(
        kind: ProtocolKind, seed: int = 0, provisioning_seed: int = 0
) -> Dict[str, StructuralVerdict]:
    """ Verdicts for G2, G3, G4, G7, G11 and G12 by the rules in the module docs. """
    s = key_structure(kind, seed, provisioning_seed)
    who = ', '.join(sorted(s.contributors)) or 'none'
    peer_alone = len(s.contributors) == 1 and s.contributors <= PEERS

    return {
        'G2': StructuralVerdict(
            Verdict.MEETS if s.certified else Verdict.FAILS,
            'certified key pairs' if s.certified else 'no certified public keys',
        ),
        'G3': StructuralVerdict(_agreement(s.contributors), f"contributors: {who}"),
        'G4': StructuralVerdict(_joint_control(s.contributors), f"contributors: {who}"),
        'G7': StructuralVerdict(
            Verdict.MEETS if s.contributors else Verdict.FAILS,
            'fresh per-session input' if s.contributors else 'provisioned session key',
        ),
        'G11': StructuralVerdict(
            Verdict.MEETS if all(s.private_ops.values()) else Verdict.FAILS,
            'private-key operations: '
            + ', '.join(f"{p}={n}" for p, n in sorted(s.private_ops.items())),
        ),
        'G12': StructuralVerdict(
            Verdict.FAILS if peer_alone else Verdict.MEETS, f"contributors: {who}"
        ),
    }
