"""
The published goal comparison (seven protocol columns by thirteen goals), bundled as
`published_goals.json` and pinned by checksum so an edited fixture never passes silently.
"""
import hashlib
import json
from functools import lru_cache
from importlib import resources
from logging import getLogger
from types import MappingProxyType
from typing import Mapping

from awnbench.goals.errors import FixtureChecksumError, GoalsError
from awnbench.goals.verdicts import COLUMNS, GOALS, Verdict

log = getLogger(__name__)

FIXTURE = 'published_goals.json'
FIXTURE_SHA256 = 'edfdc664fa5b6b76fbfb6a5375a90c0ed1a203326de0ad137f88fe980d17c167'

Matrix = Mapping[str, Mapping[str, Verdict]]
""" column -> goal -> claimed verdict """


def fixture_bytes() -> bytes:
    return resources.files(__package__).joinpath(FIXTURE).read_bytes()


@lru_cache(maxsize=1)
def static_matrix() -> Matrix:
    """
    Claimed verdicts for every (column, goal) cell, exactly as published.

    >>> static_matrix()['SSH']['G1']
    <Verdict.CONDITIONAL: '(*)'>

    Raises:
        FixtureChecksumError: the bundled fixture was modified.
    """
    data = fixture_bytes()
    digest = hashlib.sha256(data).hexdigest()
    if digest != FIXTURE_SHA256:
        raise FixtureChecksumError(
            f"Fixture ({FIXTURE}) has checksum ({digest}), expected ({FIXTURE_SHA256})."
        )

    doc = json.loads(data.decode('utf-8'))
    if tuple(doc['columns']) != COLUMNS or tuple(doc['goals']) != tuple(GOALS):
        raise GoalsError(f"Fixture ({FIXTURE}) does not list the expected columns and goals.")

    matrix = {}
    for i, column in enumerate(COLUMNS):
        matrix[column] = MappingProxyType(
            {goal: Verdict.parse(row[i]) for goal, row in doc['goals'].items()}
        )
    log.debug(f"Loaded comparison fixture ({FIXTURE}) sha256 ({digest}).")
    return MappingProxyType(matrix)


def render_matrix(matrix: Matrix = None, fmt: str = 'md') -> str:
    """ The full comparison with the published symbols, as a markdown table or JSON. """
    if matrix is None:
        matrix = static_matrix()
    if fmt == 'json':
        return json.dumps(
            {
                'columns': list(COLUMNS),
                'goals': {
                    goal: [matrix[c][goal].symbol for c in COLUMNS] for goal in GOALS
                },
            },
            ensure_ascii=False,
            indent=2,
        )
    if fmt != 'md':
        raise GoalsError(f"Unknown format ({fmt}), expected (md) or (json).")

    lines = [
        '| Goal | ' + ' | '.join(COLUMNS) + ' |',
        '|---' * (len(COLUMNS) + 1) + '|',
    ]
    for goal in GOALS:
        cells = ' | '.join(matrix[c][goal].symbol for c in COLUMNS)
        lines.append(f"| {goal} | {cells} |")
    return '\n'.join(lines) + '\n'
