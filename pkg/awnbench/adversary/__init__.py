"""
Scripted network attacker, turning the goal claims into executable evidence.

>>> from awnbench.adversary import run_attack, LoweMitm
>>> run_attack('TkdfAsymUnfixed', LoweMitm(), seed=1).success
True
>>> run_attack('TkdfAsym', LoweMitm(), seed=1).success
False
"""
from .errors import AdversaryError, ScriptError
from .scripts import (
    AttackScript, Eavesdrop, Replay, LoweMitm, Impersonation, KciImpersonation,
    CompromiseAndDecryptPast, UnknownKeyShare, PrivacyScan, SCRIPTS, parse_script
)
from .models import AttackOutcome, Evidence
from .knowledge import Knowledge, recover_keys, check_evidence
from .bed import AttackBed, attack_topology, ATTACK_PEERS, ATTACK_SERVER
from .attacks import run_attack

__all__ = [
    'AdversaryError',
    'ScriptError',
    'AttackScript',
    'Eavesdrop',
    'Replay',
    'LoweMitm',
    'Impersonation',
    'KciImpersonation',
    'CompromiseAndDecryptPast',
    'UnknownKeyShare',
    'PrivacyScan',
    'SCRIPTS',
    'parse_script',
    'AttackOutcome',
    'Evidence',
    'Knowledge',
    'recover_keys',
    'check_evidence',
    'AttackBed',
    'attack_topology',
    'ATTACK_PEERS',
    'ATTACK_SERVER',
    'run_attack',
]
