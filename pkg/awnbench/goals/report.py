"""
Claimed versus observed goal verdicts, per comparison column.

Only Meets against Fails (either way round) is a hard discrepancy. Conditional and
Implicit claims carry conditions a run does not model, so they never conflict on their
own; the row's note says what was observed instead.
"""
import json
from logging import getLogger
from typing import Dict, Iterable, List, Mapping, Optional, Union

from xmodel import JsonModel, Field

from awnbench.kinds import ProtocolKind
from awnbench.netsim.models import ModelListConverter
from awnbench.util import Seeds, seed_list
from awnbench.goals.dynamic import DynamicVerdict, evaluate_dynamic
from awnbench.goals.errors import GoalsError
from awnbench.goals.matrix import static_matrix
from awnbench.goals.structural import StructuralVerdict, evaluate_structural
from awnbench.goals.verdicts import COLUMNS, GOALS, Origin, Verdict, column_kind

log = getLogger(__name__)

UNSTATED = 'conditions not stated by the reference table'

Observed = Union[DynamicVerdict, StructuralVerdict, Verdict]


class GoalRow(JsonModel):
    goal: str
    title: str
    claimed: str
    """ Published symbol. """
    observed: str
    """ Symbol we arrived at; absent when the goal was not evaluated. """
    origin: str
    """ Where `observed` comes from; `static-paper` when only the claim is known. """
    note: str


class GoalReport(JsonModel):
    column: str
    protocol: str
    rows: list = Field(converter=ModelListConverter(GoalRow), default=list)
    discrepancies: list = Field(default=list)
    seeds: list = Field(default=list)

    @property
    def agrees(self) -> bool:
        return not self.discrepancies


def _observed(value: Observed):
    if isinstance(value, Verdict):
        return value, ''
    return value.verdict, value.note


def hard_conflict(claimed: Verdict, observed: Optional[Verdict]) -> bool:
    return {claimed, observed} == {Verdict.MEETS, Verdict.FAILS}


def reconcile(
        claimed: Mapping[str, Verdict],
        observed: Mapping[str, Observed],
        column: str,
        origins: Mapping[str, Origin] = None,
) -> GoalReport:
    """
    One row per goal (all thirteen); every Meets/Fails disagreement between `claimed` and
    `observed` becomes a discrepancy entry.

    Args:
        claimed: Published verdict per goal, usually `static_matrix()[column]`.
        observed: What was found per goal; goals missing here were not evaluated.
        column: Comparison column both sides describe.
        origins: Origin of each observed verdict; defaults to dynamic-attack.
    """
    if origins is None:
        origins = {}
    kind = column_kind(column)

    rows = []
    discrepancies = []
    for goal, title in GOALS.items():
        claim = Verdict.parse(claimed[goal])
        seen, note = (None, '') if goal not in observed else _observed(observed[goal])
        origin = (
            Origin.STATIC_PAPER if seen is None else origins.get(goal, Origin.DYNAMIC_ATTACK)
        )

        if seen is None and claim is Verdict.CONDITIONAL:
            note = UNSTATED
        elif seen is not None and seen is not claim and not note:
            note = f"observed ({seen.symbol}) against claimed ({claim.symbol})"

        if hard_conflict(claim, seen):
            discrepancies.append(
                f"{column} {goal}: claimed ({claim.symbol}), observed ({seen.symbol})"
                + (f"; {note}" if note else '')
            )
        rows.append(GoalRow(
            goal=goal,
            title=title,
            claimed=claim.symbol,
            observed=seen.symbol if seen is not None else None,
            origin=origin.value,
            note=note or None,
        ))

    return GoalReport(
        column=column, protocol=kind.value, rows=rows, discrepancies=discrepancies
    )


def _merge_seeds(per_seed: List[Dict[str, Observed]]) -> Dict[str, Observed]:
    """ Equal verdicts across seeds pass through; differing ones become Conditional. """
    merged = {}
    for goal in per_seed[0]:
        verdicts = [_observed(run[goal])[0] for run in per_seed]
        first = per_seed[0][goal]
        if all(v is verdicts[0] for v in verdicts):
            merged[goal] = first
        else:
            symbols = ', '.join(v.symbol for v in verdicts)
            log.warning(f"Goal ({goal}) verdict varies across seeds ({symbols}).")
            merged[goal] = DynamicVerdict(
                Verdict.CONDITIONAL, f"varies across seeds: {symbols}"
            )
    return merged


def observe(
        kind: ProtocolKind, seeds: Seeds = 0, provisioning_seed: int = 0
) -> Dict[str, Observed]:
    """ Dynamic and structural verdicts for `kind`, merged over `seeds`. """
    kind = ProtocolKind.parse(kind)
    seeds = seed_list(seeds)
    if not seeds:
        raise GoalsError("At least one seed is needed to observe goals.")
    runs = [evaluate_dynamic(kind, s, provisioning_seed) for s in seeds]
    observed = dict(_merge_seeds(runs))
    observed.update(evaluate_structural(kind, seeds[0], provisioning_seed))
    return observed


def goal_report(
        column: str,
        seeds: Seeds = 0,
        provisioning_seed: int = 0,
        observed: Mapping[str, Observed] = None,
) -> GoalReport:
    """ Claimed versus observed verdicts for one comparison column. """
    if column not in COLUMNS:
        kind = ProtocolKind.parse(column)
        column = next(c for c in COLUMNS if c in kind.info.analogs)
    if observed is None:
        observed = observe(column_kind(column), seeds, provisioning_seed)

    origins = {
        goal: (
            Origin.STATIC_STRUCTURAL if isinstance(value, StructuralVerdict)
            else Origin.DYNAMIC_ATTACK
        )
        for goal, value in observed.items()
    }
    report = reconcile(static_matrix()[column], observed, column, origins)
    report.seeds = seed_list(seeds)
    return report


def compare_all(seeds: Seeds = 0, provisioning_seed: int = 0) -> List[GoalReport]:
    """ Reports for every column; columns sharing a representative are evaluated once. """
    cache: Dict[ProtocolKind, Dict[str, Observed]] = {}
    reports = []
    for column in COLUMNS:
        kind = column_kind(column)
        if kind not in cache:
            cache[kind] = observe(kind, seeds, provisioning_seed)
        reports.append(goal_report(column, seeds, provisioning_seed, observed=cache[kind]))
    return reports


def render_reports(reports: Iterable[GoalReport], fmt: str = 'md') -> str:
    reports = list(reports)
    if fmt == 'json':
        return json.dumps(
            [r.api.json() for r in reports], ensure_ascii=False, indent=2
        )
    if fmt != 'md':
        raise GoalsError(f"Unknown format ({fmt}), expected (md) or (json).")

    out = []
    for report in reports:
        out.append(f"## {report.column} ({report.protocol})\n")
        out.append('| Goal | Title | Claimed | Observed | Origin | Note |')
        out.append('|---|---|---|---|---|---|')
        for row in report.rows:
            out.append(
                f"| {row.goal} | {row.title} | {row.claimed} | {row.observed or ''} "
                f"| {row.origin} | {row.note or ''} |"
            )
        out.append('')
        if report.discrepancies:
            out.append('Discrepancies:\n')
            out.extend(f"- {d}" for d in report.discrepancies)
        else:
            out.append('No hard discrepancies.')
        out.append('')
    return '\n'.join(out)
