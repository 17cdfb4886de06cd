"""
Benchmark campaigns: every protocol of a scenario, `trials` seeded handshakes each, on a
fresh simulator per trial.
"""
from logging import getLogger
from typing import Callable, List, Optional, Tuple

from xmodel import JsonModel
from xsentinels.default import Default

from awnbench.kinds import ProtocolKind
from awnbench.netsim import NetsimError, Simulator, Topology
from awnbench.protocols import ProtocolError, build_engines, provision
from awnbench.bench.config import ScenarioConfig
from awnbench.bench.errors import InsecureProtocolError

log = getLogger(__name__)

COLUMNS = (
    'protocol',
    'trial',
    'establishment_virtual_us',
    'crypto_wallclock_us',
    'messages_sent',
    'retransmissions',
    'bytes_on_air',
    'completed',
)
""" Report column order; fixed. """


class MeasurementRecord(JsonModel):
    protocol: str
    trial: int
    establishment_virtual_us: int
    """ Virtual time from the initiator's start until both peers hold the key. """
    crypto_wallclock_us: int
    """ Real time spent in crypto primitives, when wall-clock capture is on. """
    messages_sent: int = 0
    retransmissions: int = 0
    bytes_on_air: int = 0
    completed: bool = False

    def row(self) -> list:
        return [getattr(self, c) for c in COLUMNS]


TrialHook = Callable[[MeasurementRecord, Simulator], None]


def check_protocols(kinds: List[ProtocolKind], allow_insecure: bool = False):
    """
    Raises:
        InsecureProtocolError: a negative-control kind without `allow_insecure`.
    """
    insecure = [k.value for k in kinds if k.insecure]
    if insecure and not allow_insecure:
        raise InsecureProtocolError(
            f"Protocol(s) ({', '.join(insecure)}) are negative controls; "
            f"allow them explicitly to run them."
        )


def run_trial(
        config: ScenarioConfig,
        kind: ProtocolKind,
        trial: int,
        seed: int,
        topology: Optional[Topology] = None,
) -> Tuple[MeasurementRecord, Simulator]:
    """
    One handshake of `kind` under `config`. Network failures (unreachable peers, the
    horizon running out, streams giving up) and engine Fails end up as an incomplete
    record rather than an exception.
    """
    topology = topology or config.build_topology()
    ids = config.ids
    server = ids.server if kind.uses_server else None
    costs = config.crypto_costs
    sim = Simulator(topology, seed=seed, costs=costs, horizon_us=config.horizon)
    record = MeasurementRecord(protocol=kind.value, trial=trial)

    try:
        stores = provision(kind, [ids.initiator, ids.responder], server, config.provisioning_seed)
        retry = topology.retry_policy(ids, kind)
        engines = build_engines(kind, stores, seed, ids, retry=retry)
        for node, engine in engines.items():
            sim.attach_engine(node, engine)
        sim.start(ids.initiator)
        sim.run()
    except (NetsimError, ProtocolError) as e:
        log.warning(f"Trial ({trial}) of ({kind.value}) did not complete: {e}")
    else:
        peers = (ids.initiator, ids.responder)
        failed = [n for n in peers if n in sim.failures]
        if failed:
            reasons = ', '.join(f"{n}: {sim.failures[n][1]}" for n in failed)
            log.warning(f"Trial ({trial}) of ({kind.value}) failed ({reasons}).")
        elif all(n in sim.established for n in peers):
            record.completed = True
            record.establishment_virtual_us = max(sim.established[n].time for n in peers)
        else:
            log.warning(f"Trial ({trial}) of ({kind.value}) ended without a session key.")

    record.messages_sent = sim.messages_sent
    record.retransmissions = sim.retransmissions
    record.bytes_on_air = sim.bytes_on_air
    if sim.measure_wallclock:
        record.crypto_wallclock_us = sim.wallclock_ns // 1000
    return record, sim


def run_benchmark(
        config: ScenarioConfig,
        seed: int = Default,
        trials: int = Default,
        allow_insecure: bool = False,
        on_trial: Optional[TrialHook] = None,
) -> List[MeasurementRecord]:
    """
    Runs every protocol of `config` for `trials` trials; trial `i` uses seed `seed + i`,
    so equal (config, seed) pairs give identical records.

    Args:
        config: Validated scenario (see `load_config`).
        seed: Overrides `config.seed`.
        trials: Overrides `config.trials`.
        allow_insecure: Permit the negative-control kinds.
        on_trial: Called with each record and its simulator (for transcript dumps).

    Returns: Records ordered by protocol (as configured), then trial index.
    """
    seed = config.seed if seed is Default else seed
    trials = config.trials if trials is Default else trials
    kinds = config.kinds
    check_protocols(kinds, allow_insecure)
    topology = config.build_topology()

    log.info(
        f"Running scenario ({config.name}): ({len(kinds)}) protocol(s) x ({trials}) trials, "
        f"seed ({seed})."
    )
    records = []
    for kind in kinds:
        for trial in range(trials):
            record, sim = run_trial(config, kind, trial, seed + trial, topology)
            log.debug(
                f"({kind.value}) trial ({trial}): completed ({record.completed}) "
                f"at ({record.establishment_virtual_us})."
            )
            if on_trial is not None:
                on_trial(record, sim)
            records.append(record)

    done = sum(1 for r in records if r.completed)
    log.info(f"Scenario ({config.name}) finished: ({done}/{len(records)}) trials completed.")
    return records
