"""
Security-goal comparison: the published claims, what runs show, and where they differ.

>>> from awnbench.goals import static_matrix, goal_report
>>> static_matrix()['IPSec']['G9']
<Verdict.MEETS: '*'>
>>> goal_report('SSH').discrepancies
[]
"""
from .errors import GoalsError, FixtureChecksumError
from .verdicts import (
    Verdict, Origin, GOALS, COLUMNS, DYNAMIC_GOALS, STRUCTURAL_GOALS, column_kind, kind_column
)
from .matrix import static_matrix, render_matrix, FIXTURE_SHA256
from .structural import evaluate_structural, key_structure, KeyStructure, StructuralVerdict
from .dynamic import evaluate_dynamic, DynamicVerdict
from .report import (
    GoalReport, GoalRow, reconcile, hard_conflict, observe, goal_report, compare_all,
    render_reports
)

__all__ = [
    'GoalsError',
    'FixtureChecksumError',
    'Verdict',
    'Origin',
    'GOALS',
    'COLUMNS',
    'DYNAMIC_GOALS',
    'STRUCTURAL_GOALS',
    'column_kind',
    'kind_column',
    'static_matrix',
    'render_matrix',
    'FIXTURE_SHA256',
    'evaluate_structural',
    'key_structure',
    'KeyStructure',
    'StructuralVerdict',
    'evaluate_dynamic',
    'DynamicVerdict',
    'GoalReport',
    'GoalRow',
    'reconcile',
    'hard_conflict',
    'observe',
    'goal_report',
    'compare_all',
    'render_reports',
]
