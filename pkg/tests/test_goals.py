import hashlib
import json

import pytest

from awnbench.errors import AwnError, SeedError
from awnbench.kinds import ProtocolKind
from awnbench.goals import (
    COLUMNS, FIXTURE_SHA256, FixtureChecksumError, GOALS, GoalReport, GoalsError, Origin,
    StructuralVerdict, Verdict, column_kind, compare_all, evaluate_dynamic,
    evaluate_structural, goal_report, hard_conflict, key_structure, kind_column, reconcile,
    render_matrix, render_reports, static_matrix
)
from awnbench.goals import matrix as matrix_module
from awnbench.goals.dynamic import DynamicVerdict
from awnbench.goals.report import UNSTATED, observe
from awnbench.util import seed_list

M, C, F, I = Verdict.MEETS, Verdict.CONDITIONAL, Verdict.FAILS, Verdict.IMPLICIT


def test_static_matrix_cells():
    matrix = static_matrix()
    assert matrix['WEP']['G6'] is M
    assert matrix['IPSec']['G9'] is M
    assert matrix['WPA-PSK']['G9'] is F
    assert matrix['SSH']['G1'] is C
    assert matrix['SymTKDF']['G13'] is C
    assert matrix['WEP']['G1'] is I
    assert list(matrix) == list(COLUMNS)
    assert all(len(matrix[c]) == len(GOALS) for c in COLUMNS)


def test_fixture_checksum_is_pinned(mocker):
    assert hashlib.sha256(matrix_module.fixture_bytes()).hexdigest() == FIXTURE_SHA256

    static_matrix.cache_clear()
    mocker.patch.object(
        matrix_module, 'fixture_bytes', return_value=matrix_module.fixture_bytes() + b' '
    )
    try:
        with pytest.raises(FixtureChecksumError):
            static_matrix()
    finally:
        mocker.stopall()
        static_matrix.cache_clear()
    assert static_matrix()['WEP']['G6'] is M


def test_render_matrix():
    md = render_matrix()
    lines = md.strip().splitlines()
    assert lines[0] == '| Goal | WEP | WPA-PSK | IPSec | SymTKDF | AsymTKDF | SSH | SSL |'
    assert len(lines) == 2 + len(GOALS)
    assert lines[-1].startswith('| G13 | −* |')

    doc = json.loads(render_matrix(fmt='json'))
    assert doc['goals']['G10'] == ['×', '×', '×', '*', '*', '*', '*']
    with pytest.raises(GoalsError):
        render_matrix(fmt='csv')


def test_verdict_parse():
    assert Verdict.parse('*') is M
    assert Verdict.parse('(*)') is C
    assert Verdict.parse('×') is F
    assert Verdict.parse('x') is F
    assert Verdict.parse('−*') is I
    assert Verdict.parse('-*') is I
    assert Verdict.parse('meets') is M
    with pytest.raises(ValueError):
        Verdict.parse('?')


def test_columns_and_kinds():
    assert column_kind('SSL') is ProtocolKind.ON_DEMAND_STS
    assert column_kind('SSH') is ProtocolKind.ON_DEMAND_STS
    assert kind_column(ProtocolKind.TKDF_SYM) == 'SymTKDF'
    with pytest.raises(ValueError):
        column_kind('WPA3')
    with pytest.raises(ValueError):
        kind_column(ProtocolKind.TKDF_SYM_UNFIXED)


def test_hard_conflict_is_only_meets_against_fails():
    assert hard_conflict(M, F)
    assert hard_conflict(F, M)
    assert not hard_conflict(I, F)
    assert not hard_conflict(C, F)
    assert not hard_conflict(M, None)
    assert not hard_conflict(M, M)


def test_reconcile():
    claimed = static_matrix()['SymTKDF']
    observed = {
        'G1': F,
        'G3': DynamicVerdict(F, 'no contributors'),
        'G6': M,
    }
    report = reconcile(claimed, observed, 'SymTKDF', {'G3': Origin.STATIC_STRUCTURAL})
    assert isinstance(report, GoalReport)
    assert report.protocol == 'TkdfSym'
    assert len(report.rows) == len(GOALS)
    assert len(report.discrepancies) == 1
    assert report.discrepancies[0].startswith("SymTKDF G1: claimed (*), observed (×)")
    assert not report.agrees

    rows = {r.goal: r for r in report.rows}
    # Implicit claim against an observed Fails is not a conflict; the note says why.
    assert rows['G3'].observed == '×'
    assert rows['G3'].note == 'no contributors'
    assert rows['G3'].origin == 'static-structural'
    assert rows['G1'].origin == 'dynamic-attack'
    assert rows['G1'].note == 'observed (×) against claimed (*)'
    assert rows['G6'].note is None
    # Conditional claims with nothing observed carry an explicit note.
    assert rows['G13'].observed is None
    assert rows['G13'].origin == 'static-paper'
    assert rows['G13'].note == UNSTATED


def test_seed_varying_verdicts_become_conditional(mocker):
    runs = {
        0: {'G1': DynamicVerdict(M), 'G6': DynamicVerdict(M)},
        1: {'G1': DynamicVerdict(F), 'G6': DynamicVerdict(M)},
    }
    mocker.patch(
        'awnbench.goals.report.evaluate_dynamic', side_effect=lambda kind, s, p: runs[s]
    )
    mocker.patch(
        'awnbench.goals.report.evaluate_structural',
        return_value={'G7': StructuralVerdict(M)},
    )
    observed = observe(ProtocolKind.PSK_MASTER, seeds=[0, 1])
    assert observed['G1'].verdict is C
    assert 'varies across seeds' in observed['G1'].note
    assert observed['G6'].verdict is M
    assert observed['G7'].verdict is M

    with pytest.raises(GoalsError):
        observe(ProtocolKind.PSK_MASTER, seeds=[])


def test_seeds_are_flattened_and_must_be_integers(mocker):
    dynamic = mocker.patch(
        'awnbench.goals.report.evaluate_dynamic', return_value={'G6': DynamicVerdict(M)}
    )
    mocker.patch('awnbench.goals.report.evaluate_structural', return_value={})
    observe(ProtocolKind.PSK_MASTER, seeds=range(3))
    assert [c.args[1] for c in dynamic.call_args_list] == [0, 1, 2]

    assert seed_list(4, range(2), [9]) == [4, 0, 1, 9]
    with pytest.raises(SeedError):
        observe(ProtocolKind.PSK_MASTER, seeds=[0, '1'])
    with pytest.raises(SeedError):
        seed_list(True)
    assert issubclass(SeedError, AwnError)


@pytest.mark.parametrize(
    'kind, contributors',
    [
        (ProtocolKind.PSK_DIRECT, set()),
        (ProtocolKind.PSK_NET_LAYER, set()),
        (ProtocolKind.PSK_MASTER, {'A', 'B'}),
        (ProtocolKind.TKDF_SYM, {'S'}),
        (ProtocolKind.TKDF_ASYM, {'A', 'B'}),
        (ProtocolKind.ON_DEMAND_STS, {'A', 'B'}),
    ],
)
def test_key_contributors_by_perturbation(kind, contributors):
    assert key_structure(kind).contributors == frozenset(contributors)


def test_structural_verdicts():
    def verdicts(kind):
        return {g: v.verdict for g, v in evaluate_structural(kind).items()}

    assert verdicts(ProtocolKind.PSK_DIRECT) == {
        'G2': F, 'G3': F, 'G4': F, 'G7': F, 'G11': F, 'G12': M,
    }
    assert verdicts(ProtocolKind.TKDF_SYM) == {
        'G2': F, 'G3': I, 'G4': I, 'G7': M, 'G11': F, 'G12': M,
    }
    assert verdicts(ProtocolKind.ON_DEMAND_STS) == {
        'G2': M, 'G3': M, 'G4': M, 'G7': M, 'G11': M, 'G12': M,
    }
    assert verdicts(ProtocolKind.TKDF_ASYM)['G2'] is M
    assert verdicts(ProtocolKind.TKDF_ASYM)['G11'] is M


def test_dynamic_verdicts():
    wep = evaluate_dynamic('WEP')
    assert wep['G1'].verdict is M
    assert wep['G5'].verdict is F
    assert wep['G9'].verdict is F
    assert wep['G10'].verdict is F
    assert wep['G13'].verdict is F
    assert 'G8' not in wep

    sym = evaluate_dynamic(ProtocolKind.TKDF_SYM)
    assert sym['G5'].verdict is M
    assert sym['G10'].verdict is M

    asym = evaluate_dynamic(ProtocolKind.TKDF_ASYM)
    assert asym['G10'].verdict is C
    assert asym['G1'].verdict is M

    sts = evaluate_dynamic('OnDemandSts')
    assert sts['G8'].verdict is M
    assert sts['G10'].verdict is M
    assert all(o.protocol == 'OnDemandSts' for o in sts['G10'].outcomes)


def test_negative_controls_are_caught():
    assert evaluate_dynamic(ProtocolKind.TKDF_SYM_UNFIXED)['G5'].verdict is F
    assert evaluate_dynamic(ProtocolKind.TKDF_ASYM_UNFIXED)['G1'].verdict is F


def test_goal_report_accepts_kind_names():
    report = goal_report('OnDemandSts')
    assert report.column == 'SSH'
    assert report.seeds == [0]
    assert report.discrepancies == []


def test_every_column_agrees_with_the_published_claims():
    reports = compare_all(seeds=range(5))
    assert [r.column for r in reports] == list(COLUMNS)
    assert [d for r in reports for d in r.discrepancies] == []
    assert all(r.seeds == [0, 1, 2, 3, 4] for r in reports)
    # Attack outcomes do not depend on the seed.
    assert not [
        (r.column, row.goal) for r in reports for row in r.rows
        if 'varies across seeds' in (row.note or '')
    ]

    md = render_reports(reports)
    assert '## SSL (OnDemandSts)' in md
    assert md.count('No hard discrepancies.') == len(COLUMNS)

    doc = json.loads(render_reports(reports[:1], 'json'))
    assert doc[0]['column'] == 'WEP'
    assert len(doc[0]['rows']) == len(GOALS)
