"""
What the attacker sets out to do. Scripts are plain frozen dataclasses; `run_attack`
interprets them against a protocol kind.

Node names refer to the attack bed (see `awnbench.adversary.bed`): honest peers `A` and
`B`, a bystander peer `C`, the intruder's own registered identity `I`, the alias `Z`
used for unknown key-share, and the key server `S`.
"""
from dataclasses import dataclass, fields
from typing import Dict, Optional, Tuple, Type, Union

from awnbench.adversary.errors import ScriptError


@dataclass(frozen=True)
class Eavesdrop:
    """ Watches one honest session and tries to compute its key. """
    name = 'eavesdrop'
    goal_refs = ('G3',)


@dataclass(frozen=True)
class Replay:
    """
    Holds the key of an old session (`source_session`, counted from 0) and replays that
    session's initiator frames to a fresh responder, up to `msg_index` (the ticket for the
    symmetric TKDFs, otherwise the last initiator frame).
    """
    source_session: int = 0
    msg_index: Optional[int] = None
    name = 'replay'
    goal_refs = ('G5', 'G7')


@dataclass(frozen=True)
class LoweMitm:
    """
    `A` opens a session with the intruder's legitimate identity; the intruder reuses it to
    pose as `A` towards `B`.
    """
    intruder: str = 'I'
    name = 'lowe-mitm'
    goal_refs = ('G1', 'G8')


@dataclass(frozen=True)
class Impersonation:
    """ An outsider runs `impersonated`'s role towards `victim` with only its own material. """
    impersonated: str = 'B'
    victim: str = 'A'
    attacker_initiates: bool = False
    name = 'impersonation'
    goal_refs = ('G1',)


@dataclass(frozen=True)
class KciImpersonation:
    """ Impersonates `impersonated` to `victim` using `compromised_node`'s long-term keys. """
    compromised_node: str = 'C'
    impersonated: str = 'B'
    victim: str = 'A'
    attacker_initiates: bool = False
    name = 'kci'
    goal_refs = ('G9',)


@dataclass(frozen=True)
class CompromiseAndDecryptPast:
    """ Reads `compromised_node`'s keystore after a session and tries to recover its key. """
    compromised_node: str = 'A'
    name = 'compromise-past'
    goal_refs = ('G10',)


@dataclass(frozen=True)
class UnknownKeyShare:
    """
    The intruder registers `A`'s public material under its alias `intruder` and relabels
    frames so that `B` believes it talks to the alias while `A` believes it talks to `B`.
    """
    intruder: str = 'Z'
    name = 'unknown-key-share'
    goal_refs = ('G8',)


@dataclass(frozen=True)
class PrivacyScan:
    """ Scans an honest session's frames for identities in the clear. """
    name = 'privacy-scan'
    goal_refs = ('G13',)


AttackScript = Union[
    Eavesdrop,
    Replay,
    LoweMitm,
    Impersonation,
    KciImpersonation,
    CompromiseAndDecryptPast,
    UnknownKeyShare,
    PrivacyScan,
]

SCRIPTS: Dict[str, Type] = {
    cls.name: cls
    for cls in (
        Eavesdrop,
        Replay,
        LoweMitm,
        Impersonation,
        KciImpersonation,
        CompromiseAndDecryptPast,
        UnknownKeyShare,
        PrivacyScan,
    )
}


def script_nodes(script: AttackScript) -> Tuple[str, ...]:
    """ Node names the script refers to. """
    out = []
    for f in fields(script):
        value = getattr(script, f.name)
        if isinstance(value, str):
            out.append(value)
    return tuple(out)


def parse_script(name: str, **options) -> AttackScript:
    """
    Builds a script from its name (`SCRIPTS` keys) and keyword options; options left None
    keep their defaults, unknown options raise `ScriptError`.
    """
    cls = SCRIPTS.get(name)
    if cls is None:
        raise ScriptError(
            f"Unknown attack script ({name}), expected one of ({', '.join(SCRIPTS)})."
        )
    accepted = {f.name for f in fields(cls)}
    given = {k: v for k, v in options.items() if v is not None}
    unknown = set(given) - accepted
    if unknown:
        raise ScriptError(
            f"Script ({name}) does not take option(s) ({', '.join(sorted(unknown))})."
        )
    return cls(**given)
