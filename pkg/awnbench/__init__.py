"""
Secure-channel establishment for avionics wireless networks, in the deployment families
an aircraft could use: pre-shared keys, a key-server-mediated trusted key distribution
(symmetric and asymmetric) and on-demand station-to-station.

Every family is a sans-IO `awnbench.protocols.ProtocolEngine`; engines only ever see
bytes and return actions, so the same engine runs under:

- `awnbench.protocols.handshake`: an instant, in-memory exchange.
- `awnbench.netsim.Simulator`: a seeded discrete-event test-bed with link latency,
  jitter, loss and retransmission, counting virtual time and crypto cost.
- `awnbench.adversary.run_attack`: a Dolev-Yao network that can read, drop, replay and
  inject frames, and compromise long-term keys.

On top of these:

- `awnbench.goals`: the published security-goal matrix, checked per protocol against
  verdicts observed from attacks and key-structure analysis.
- `awnbench.bench`: scenario files, benchmark campaigns, reports and the `awnbench` CLI.

>>> from awnbench import ProtocolKind
>>> from awnbench.protocols import handshake
>>> engines, result = handshake(ProtocolKind.TKDF_SYM, seed=7)
>>> engines['A'].session_key().key == engines['B'].session_key().key
True

Shell:

    awnbench run --config table2-default --format md --check-ordering
    awnbench goals --all --check

## Errors

Everything raised on purpose derives from `awnbench.errors.AwnError`; each sub-package
keeps its own in an `errors.py` (`CryptoError`, `WireError`, `ProtocolError`,
`NetsimError`, `AdversaryError`, `GoalsError`, `BenchError`).

## Settings

`awnbench.settings.BenchSettings` is an `xinject.Dependency`; activate a new one to
change the default horizon, retry limits or wall-clock capture for a block of code.
"""
from .errors import AwnError
from .kinds import ProtocolKind, Family, Role, MAPPED_KINDS
from .settings import BenchSettings

__all__ = [
    'AwnError',
    'ProtocolKind',
    'Family',
    'Role',
    'MAPPED_KINDS',
    'BenchSettings',
]
