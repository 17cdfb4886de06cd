"""
Campaign reports (csv, json lines or a markdown summary) and the ordering check against
the published establishment times.

The published times were measured on real hardware and are never a numeric target; the
summary prints them next to ours and `check_ordering` only compares which family is
slower than which.
"""
import csv
import io
import json
from dataclasses import dataclass, field
from logging import getLogger
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

import numpy as np

from awnbench.kinds import ProtocolKind
from awnbench.bench.errors import BenchError, IncompleteSummary
from awnbench.bench.runner import COLUMNS, MeasurementRecord

log = getLogger(__name__)

FORMATS = ('csv', 'json', 'md')


@dataclass(frozen=True)
class ReferenceRow:
    protocol: str
    kind: ProtocolKind
    key_type: str
    key_bits: int
    establishment_ms: float


REFERENCE_FIXTURE: Tuple[ReferenceRow, ...] = (
    ReferenceRow('WEP', ProtocolKind.PSK_DIRECT, 'RC4', 128, 2.42),
    ReferenceRow('WPA', ProtocolKind.PSK_MASTER, 'AES', 128, 2.55),
    ReferenceRow('IPSec', ProtocolKind.PSK_NET_LAYER, 'AES', 256, 2.67),
    ReferenceRow('Symmetric TKDF', ProtocolKind.TKDF_SYM, 'AES', 256, 5092.88),
    ReferenceRow('Asymmetric TKDF', ProtocolKind.TKDF_ASYM, 'RSA', 2048, 14447.63),
    ReferenceRow('SSH', ProtocolKind.ON_DEMAND_STS, 'RSA', 2048, 911.21),
    ReferenceRow('SSL', ProtocolKind.ON_DEMAND_STS, 'RSA', 2048, 1310.93),
)
""" Published establishment times (ms) per protocol. """

ORDERING_GROUPS: Tuple[Tuple[ProtocolKind, ...], ...] = (
    (ProtocolKind.PSK_DIRECT, ProtocolKind.PSK_MASTER, ProtocolKind.PSK_NET_LAYER),
    (ProtocolKind.ON_DEMAND_STS,),
    (ProtocolKind.TKDF_SYM,),
    (ProtocolKind.TKDF_ASYM,),
)
""" Fastest to slowest. """

MODEL_NOTES = (
    "PskDirect stands in for WEP with AES-GCM and a 128-bit key; RC4 is not modelled.",
    "SSH and SSL share the OnDemandSts representative.",
)


@dataclass(frozen=True)
class ProtocolSummary:
    protocol: str
    trials: int
    completed: int
    mean_us: float
    """ Over completed trials; NaN when none completed. """
    std_us: float


@dataclass
class OrderingResult:
    passed: bool
    broken: List[str] = field(default_factory=list)
    """ Each inequality that did not hold, with the values compared. """

    def __bool__(self):
        return self.passed


def summarize(records: Iterable[MeasurementRecord]) -> Dict[str, ProtocolSummary]:
    """ Per-protocol mean and (population) standard deviation, in first-seen order. """
    grouped: Dict[str, List[MeasurementRecord]] = {}
    for r in records:
        grouped.setdefault(r.protocol, []).append(r)

    out = {}
    for protocol, rs in grouped.items():
        times = np.array(
            [r.establishment_virtual_us for r in rs if r.completed], dtype=float
        )
        mean = float(times.mean()) if times.size else float('nan')
        std = float(times.std()) if times.size else float('nan')
        out[protocol] = ProtocolSummary(protocol, len(rs), int(times.size), mean, std)
    return out


def _sorted(records: Iterable[MeasurementRecord]) -> List[MeasurementRecord]:
    order: Dict[str, int] = {}
    records = list(records)
    for r in records:
        order.setdefault(r.protocol, len(order))
    return sorted(records, key=lambda r: (order[r.protocol], r.trial))


def _cell(value):
    if value is None:
        return ''
    if isinstance(value, bool):
        return 'true' if value else 'false'
    return value


def _csv(records: List[MeasurementRecord]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(COLUMNS)
    for r in records:
        writer.writerow([_cell(v) for v in r.row()])
    return buffer.getvalue()


def _json_lines(records: List[MeasurementRecord]) -> str:
    return ''.join(json.dumps(r.api.json(), sort_keys=True) + '\n' for r in records)


def _fmt(value: float, digits: int) -> str:
    return '' if value != value else f"{value:.{digits}f}"


def _markdown(records: List[MeasurementRecord]) -> str:
    reference: Dict[ProtocolKind, List[ReferenceRow]] = {}
    for row in REFERENCE_FIXTURE:
        reference.setdefault(row.kind, []).append(row)

    lines = [
        '| protocol | analog | key | trials | completed | mean_us | std_us | mean_ms | paper_ms |',
        '|---|---|---|---|---|---|---|---|---|',
    ]
    for protocol, s in summarize(records).items():
        kind = ProtocolKind.parse(protocol)
        info = kind.info
        analog = ', '.join(info.analogs) or '-'
        paper = ' / '.join(f"{r.establishment_ms:.2f}" for r in reference.get(kind, ())) or '-'
        lines.append(
            f"| {protocol} | {analog} | {info.key_type}-{info.key_bits} | {s.trials} "
            f"| {s.completed} | {_fmt(s.mean_us, 1)} | {_fmt(s.std_us, 1)} "
            f"| {_fmt(s.mean_us / 1000, 3)} | {paper} |"
        )
    lines.append('')
    lines.extend(f"- {note}" for note in MODEL_NOTES)
    return '\n'.join(lines) + '\n'


def emit_report(records: Iterable[MeasurementRecord], fmt: str = 'csv') -> bytes:
    """
    Renders records sorted by protocol (first-seen order) then trial, so equal records
    give identical bytes.

    Formats:
        csv: header `protocol,trial,establishment_virtual_us,crypto_wallclock_us,
            messages_sent,retransmissions,bytes_on_air,completed`; absent values empty.
        json: one record object per line.
        md: per-protocol summary next to the published times.
    """
    records = _sorted(records)
    if not records:
        raise BenchError("No records to report.")
    if fmt == 'csv':
        text = _csv(records)
    elif fmt == 'json':
        text = _json_lines(records)
    elif fmt == 'md':
        text = _markdown(records)
    else:
        raise BenchError(f"Unknown report format ({fmt}), expected one of {FORMATS}.")
    return text.encode('utf-8')


def reference_means() -> Dict[ProtocolKind, List[float]]:
    """ Published times per representative; OnDemandSts carries both SSH and SSL. """
    out: Dict[ProtocolKind, List[float]] = {}
    for row in REFERENCE_FIXTURE:
        out.setdefault(row.kind, []).append(row.establishment_ms)
    return out


def measured_means(summary: Mapping[str, ProtocolSummary]) -> Dict[ProtocolKind, List[float]]:
    return {
        ProtocolKind.parse(p): [s.mean_us] for p, s in summary.items() if s.completed
    }


def check_ordering(means: Mapping[ProtocolKind, Sequence[float]]) -> OrderingResult:
    """
    Passes iff every value of a group is strictly below every value of the next group,
    for PSK family < OnDemandSts < TkdfSym < TkdfAsym. Within the PSK family any of the
    three kinds may be absent, but not all.

    Raises:
        IncompleteSummary: a group has no values at all.
    """
    groups = []
    for members in ORDERING_GROUPS:
        values = [v for k in members for v in means.get(k, ())]
        if not values:
            names = ', '.join(k.value for k in members)
            raise IncompleteSummary(f"Ordering check needs a value for ({names}).")
        groups.append((members, values))

    broken = []
    for (low, low_values), (high, high_values) in zip(groups, groups[1:]):
        if not max(low_values) < min(high_values):
            broken.append(
                f"{'/'.join(k.value for k in low)} ({max(low_values):g}) is not below "
                f"{'/'.join(k.value for k in high)} ({min(high_values):g})"
            )
    for b in broken:
        log.warning(f"Ordering broken: {b}.")
    return OrderingResult(not broken, broken)
