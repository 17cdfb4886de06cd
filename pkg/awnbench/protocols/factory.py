from typing import Union

from xsentinels.default import Default

from awnbench.crypto import Rng
from awnbench.kinds import ProtocolKind, Role, Family
from awnbench.protocols.engine import ProtocolEngine, NodeIds, RetryPolicy
from awnbench.protocols.errors import RoleError
from awnbench.protocols.keystore import Keystore
from awnbench.protocols.psk import PskChallengeEngine, PskMasterEngine
from awnbench.protocols.sts import StsEngine
from awnbench.protocols.tkdf_asym import TkdfAsymEngine, TkdfAsymServer
from awnbench.protocols.tkdf_sym import TkdfSymEngine, TkdfSymServer

_PEER_ENGINES = {
    ProtocolKind.PSK_DIRECT: PskChallengeEngine,
    ProtocolKind.PSK_NET_LAYER: PskChallengeEngine,
    ProtocolKind.PSK_MASTER: PskMasterEngine,
    ProtocolKind.TKDF_SYM: TkdfSymEngine,
    ProtocolKind.TKDF_SYM_UNFIXED: TkdfSymEngine,
    ProtocolKind.TKDF_ASYM: TkdfAsymEngine,
    ProtocolKind.TKDF_ASYM_UNFIXED: TkdfAsymEngine,
    ProtocolKind.ON_DEMAND_STS: StsEngine,
}

_SERVER_ENGINES = {
    Family.TKDF_SYM: TkdfSymServer,
    Family.TKDF_ASYM: TkdfAsymServer,
}


def new_engine(
        kind: Union[ProtocolKind, str],
        role: Role,
        ids: NodeIds,
        keystore: Keystore,
        rng: Union[Rng, int],
        retry: RetryPolicy = Default,
) -> ProtocolEngine:
    """
    Builds the engine for `role` in a `kind` handshake.

    Args:
        kind: Protocol variant (or its name / comparison column id).
        role: Initiator, responder or key server.
        ids: Node ids of the three roles; `ids.server` only matters for TKDF kinds.
        keystore: Long-term material visible to this role, see `provision`.
        rng: Engine randomness (nonces, IVs, ephemeral secrets, issued keys).
        retry: Retransmission schedule; defaults from `BenchSettings`.

    Raises:
        PrerequisiteError: keystore lacks material the kind needs, or it has the wrong size.
        RoleError: asked for a key server on a kind without one.
    """
    kind = ProtocolKind.parse(kind)
    if not isinstance(rng, Rng):
        rng = Rng(rng)

    if role is Role.KEY_SERVER:
        server_cls = _SERVER_ENGINES.get(kind.family)
        if server_cls is None:
            raise RoleError(f"({kind.value}) has no key server role.")
        return server_cls(kind, ids, keystore, rng, retry)

    return _PEER_ENGINES[kind](kind, role, ids, keystore, rng, retry)
