"""
Goals decided by running things: adversary scripts against an attack bed, and plain
handshakes for the properties an honest run already shows.

| Goal | Evidence                                                                        |
|------|---------------------------------------------------------------------------------|
| G1   | outsider impersonation of each peer to the other (and the Lowe relay for the    |
|      | public-key TKDFs); any success -> Fails, else Meets                             |
| G5   | two handshakes with equal long-term material but different seeds, and a replay  |
|      | of an old session; equal keys or a successful replay -> Fails, else Meets       |
| G6   | both peers of an honest handshake hold the same key -> Meets, else Fails        |
| G8   | unknown key-share against the public-key kinds; not evaluated for the others    |
| G9   | impersonation of B to A with a bystander peer's long-term keys                  |
| G10  | compromise of each party after the session: none recovers the key -> Meets,     |
|      | all do -> Fails, otherwise Conditional                                          |
| G13  | identities visible on the air -> Fails, else Meets                              |
"""
from dataclasses import dataclass, field
from logging import getLogger
from typing import Dict, List, Tuple

from awnbench.kinds import Family, ProtocolKind
from awnbench.adversary import (
    AttackOutcome, CompromiseAndDecryptPast, Impersonation, KciImpersonation, LoweMitm,
    PrivacyScan, Replay, UnknownKeyShare, ATTACK_SERVER, run_attack
)
from awnbench.protocols import handshake
from awnbench.goals.verdicts import Verdict

log = getLogger(__name__)


@dataclass(frozen=True)
class DynamicVerdict:
    verdict: Verdict
    note: str = ''
    outcomes: Tuple[AttackOutcome, ...] = field(default=(), compare=False)
    """ Adversary runs the verdict rests on. """


def _summary(outcomes: List[AttackOutcome]) -> str:
    return ', '.join(
        f"{o.script} {'succeeded' if o.success else 'failed'}" for o in outcomes
    )


def _any_success(outcomes: List[AttackOutcome]) -> DynamicVerdict:
    verdict = Verdict.FAILS if any(o.success for o in outcomes) else Verdict.MEETS
    return DynamicVerdict(verdict, _summary(outcomes), tuple(outcomes))


def _keys(kind: ProtocolKind, seed: int, provisioning_seed: int) -> Tuple[bytes, bytes]:
    engines, _ = handshake(kind, seed, provisioning_seed)
    keys = []
    for node in ('A', 'B'):
        engine = engines[node]
        keys.append(engine.session_key().key.material if engine.established else None)
    return keys[0], keys[1]


def _authentication(kind, seed, provisioning_seed) -> DynamicVerdict:
    scripts = [
        Impersonation(impersonated='B', victim='A'),
        Impersonation(impersonated='A', victim='B', attacker_initiates=True),
    ]
    if kind.family is Family.TKDF_ASYM:
        scripts.append(LoweMitm())
    return _any_success([run_attack(kind, s, seed, provisioning_seed) for s in scripts])


def _freshness(kind, seed, provisioning_seed) -> DynamicVerdict:
    first, _ = _keys(kind, seed, provisioning_seed)
    second, _ = _keys(kind, seed + 1, provisioning_seed)
    replay = run_attack(kind, Replay(), seed, provisioning_seed)
    notes = []
    if first is not None and first == second:
        notes.append('same key across runs')
    if replay.success:
        notes.append('old session key re-established by replay')
    verdict = Verdict.FAILS if notes else Verdict.MEETS
    return DynamicVerdict(verdict, '; '.join(notes) or 'fresh key per run', (replay,))


def _confirmation(kind, seed, provisioning_seed) -> DynamicVerdict:
    a, b = _keys(kind, seed, provisioning_seed)
    if a is not None and a == b:
        return DynamicVerdict(Verdict.MEETS, 'both peers hold the same key')
    return DynamicVerdict(Verdict.FAILS, 'peers disagree on the key')


def _key_share(kind, seed, provisioning_seed) -> DynamicVerdict:
    return _any_success([run_attack(kind, UnknownKeyShare(), seed, provisioning_seed)])


def _kci(kind, seed, provisioning_seed) -> DynamicVerdict:
    script = KciImpersonation(compromised_node='C', impersonated='B', victim='A')
    return _any_success([run_attack(kind, script, seed, provisioning_seed)])


def _forward_secrecy(kind, seed, provisioning_seed) -> DynamicVerdict:
    parties = ['A', 'B'] + ([ATTACK_SERVER] if kind.uses_server else [])
    outcomes = [
        run_attack(kind, CompromiseAndDecryptPast(compromised_node=p), seed, provisioning_seed)
        for p in parties
    ]
    recovered = [p for p, o in zip(parties, outcomes) if o.success]
    if not recovered:
        verdict = Verdict.MEETS
    elif len(recovered) == len(parties):
        verdict = Verdict.FAILS
    else:
        verdict = Verdict.CONDITIONAL
    note = f"past key recovered via ({', '.join(recovered) or 'none'})"
    return DynamicVerdict(verdict, note, tuple(outcomes))


def _privacy(kind, seed, provisioning_seed) -> DynamicVerdict:
    outcome = run_attack(kind, PrivacyScan(), seed, provisioning_seed)
    findings = outcome.evidence.findings or []
    note = f"({len(findings)}) identity exposures" if findings else 'no identity on the air'
    verdict = Verdict.FAILS if outcome.success else Verdict.MEETS
    return DynamicVerdict(verdict, note, (outcome,))


def evaluate_dynamic(
        kind: ProtocolKind, seed: int = 0, provisioning_seed: int = 0
) -> Dict[str, DynamicVerdict]:
    """
    Attack-backed verdicts for G1, G5, G6, G9, G10 and G13, plus G8 for the public-key
    kinds (it is left out for the others rather than guessed).

    >>> evaluate_dynamic('OnDemandSts')['G10'].verdict
    <Verdict.MEETS: '*'>
    """
    kind = ProtocolKind.parse(kind)
    log.debug(f"Evaluating goals of ({kind.value}) dynamically, seed ({seed}).")
    out = {
        'G1': _authentication(kind, seed, provisioning_seed),
        'G5': _freshness(kind, seed, provisioning_seed),
        'G6': _confirmation(kind, seed, provisioning_seed),
    }
    if kind.family in (Family.TKDF_ASYM, Family.ON_DEMAND):
        out['G8'] = _key_share(kind, seed, provisioning_seed)
    out['G9'] = _kci(kind, seed, provisioning_seed)
    out['G10'] = _forward_secrecy(kind, seed, provisioning_seed)
    out['G13'] = _privacy(kind, seed, provisioning_seed)
    return out
