"""
Attack runs: each script plays out on a fresh `AttackBed` and ends in an `AttackOutcome`.

The attacker is a network controller. It sees every frame, may drop, relabel, inject
or replay frames, and may read the keystores a script says are compromised. It never
breaks a primitive: keys it reports come out of `recover_keys` over what it saw and was
given, and successful outcomes are double-checked with `check_evidence`.
"""
from collections import deque
from dataclasses import replace
from logging import getLogger
from typing import Callable, Dict, List, Optional, Tuple

from awnbench.crypto import (
    CryptoError, IvSource, SymKey, aead_open, aead_seal, pk_decrypt, pk_encrypt
)
from awnbench.kinds import Family, ProtocolKind, Role
from awnbench.netsim import Simulator
from awnbench.protocols import Keystore, Send, nonce_minus_one
from awnbench.protocols import psk, tkdf_sym
from awnbench.wire import (
    FieldType as F, WireError, WireField, WireMessage, decode_terms, encode, encode_terms,
    try_decode
)
from awnbench.adversary.bed import ATTACK_PEERS, AttackBed
from awnbench.adversary.errors import AdversaryError, ScriptError
from awnbench.adversary.knowledge import check_evidence, recover_keys
from awnbench.adversary.models import AttackOutcome
from awnbench.adversary.scripts import (
    AttackScript, CompromiseAndDecryptPast, Eavesdrop, Impersonation, KciImpersonation,
    LoweMitm, PrivacyScan, Replay, UnknownKeyShare, script_nodes
)

log = getLogger(__name__)

Verdict = Tuple[bool, List[bytes], List[str]]
""" (success, keys the attacker holds, findings) """


def _relabel(data: bytes, sender: str, receiver: str) -> bytes:
    msg = try_decode(data)
    return encode(replace(msg, sender=sender, receiver=receiver))


def _send_like(kind: ProtocolKind, to: str, msg: WireMessage) -> Send:
    info = kind.info
    return Send(to=to, data=encode(msg), transport=info.transport, layer=info.layer)


def _key_of(sim: Simulator, node: str) -> Optional[bytes]:
    at = sim.established.get(node)
    return None if at is None else at.material.key.material


def _peer_of(sim: Simulator, node: str) -> Optional[str]:
    at = sim.established.get(node)
    return None if at is None else at.material.peer


def _baseline(bed: AttackBed) -> Tuple[Simulator, bytes]:
    sim = bed.honest_session()
    key = _key_of(sim, 'A')
    if key is None or key != _key_of(sim, 'B'):
        raise AdversaryError(
            f"Honest ({bed.kind.value}) session did not establish a shared key "
            f"(failures {sim.failures})."
        )
    return sim, key


# ----- passive -----

def _eavesdrop(bed: AttackBed, script: Eavesdrop) -> Verdict:
    _, key = _baseline(bed)
    candidates = recover_keys(bed.kind, bed.knowledge)
    held = [key] if key in candidates else []
    return bool(held), held, []


def _compromise_past(bed: AttackBed, script: CompromiseAndDecryptPast) -> Verdict:
    node = script.compromised_node
    if node not in ('A', 'B', bed.server):
        raise ScriptError(
            f"({node}) took no part in the session; compromise A, B or the key server."
        )
    _, key = _baseline(bed)
    bed.knowledge.disclose(bed.stores[node])
    candidates = recover_keys(bed.kind, bed.knowledge)
    held = [key] if key in candidates else []
    return bool(held), held, []


def _privacy_scan(bed: AttackBed, script: PrivacyScan) -> Verdict:
    sim, _ = _baseline(bed)
    peers = {'A', 'B'}
    findings = []
    for i, frame in enumerate(sim.transcript):
        msg = try_decode(frame.data)
        if msg is None:
            continue
        for label, where in (
            (msg.sender, 'header sender'),
            (msg.receiver, 'header receiver'),
            *((f.label(), 'identity field') for f in msg.fields(F.IDENTITY)),
        ):
            if label in peers:
                findings.append(f"frame ({i}) message ({msg.index}): ({label}) in {where}")
    return bool(findings), [], findings


# ----- active, relabelling -----

class _LoweRelay:
    """
    `A` talks to the intruder; everything `A` seals for the intruder is opened and resealed
    for `B` under `A`'s name, and `B`'s answer is handed back to `A` as the intruder's.
    """

    def __init__(self, bed: AttackBed, intruder: str):
        self.kind = bed.kind
        self.intruder = intruder
        self.private = bed.stores[intruder].keypair.private_part
        self.target_public = bed.stores['B'].keypair.public_part
        self.rng = bed.attacker_rng('lowe')

    def __call__(self, sim: Simulator, node: str, send: Send) -> List[Tuple[str, Send]]:
        msg = try_decode(send.data)
        if msg is None or msg.kind is not self.kind:
            return [(node, send)]

        if node == 'A' and send.to == self.intruder and msg.index in (3, 7):
            plain = pk_decrypt(self.private, msg.first(F.PK_SEALED).box())
            box = pk_encrypt(self.target_public, plain, self.rng)
            forged = WireMessage(self.kind, msg.index, 'A', 'B', (WireField.sealed(box),))
            return [(node, send), ('A', _send_like(self.kind, 'B', forged))]

        if node == 'B' and send.to == 'A' and msg.index == 6:
            data = _relabel(send.data, self.intruder, 'A')
            return [(self.intruder, replace(send, data=data))]

        return [(node, send)]


def _lowe(bed: AttackBed, script: LoweMitm) -> Verdict:
    if bed.kind.family is not Family.TKDF_ASYM:
        raise ScriptError(f"LoweMitm targets the public-key TKDFs, not ({bed.kind.value}).")
    intruder = script.intruder
    if intruder in ('A', 'B'):
        raise ScriptError(f"The intruder ({intruder}) cannot be one of the honest peers.")

    sim = bed.simulator()
    to_intruder = bed.ids('A', intruder)
    to_b = bed.ids('A', 'B')
    bed.bind(sim, [bed.engine(Role.INITIATOR, to_intruder), bed.engine(Role.RESPONDER, to_b)])
    bed.bind_server(sim, to_b)
    sim.interceptor = _LoweRelay(bed, intruder)
    bed.run(sim, 'A')

    bed.knowledge.disclose(bed.stores[intruder])
    key = _key_of(sim, 'B')
    fooled = key is not None and _peer_of(sim, 'B') == 'A'
    held = [key] if fooled and key in recover_keys(bed.kind, bed.knowledge) else []
    findings = []
    if fooled:
        findings.append("(B) accepted a session with (A) that (A) never ran with (B)")
    if 'A' in sim.failures:
        findings.append(f"(A) aborted: {sim.failures['A'][1]}")
    return bool(held), held, findings


class _AliasRelay:
    """ Frames between `A` and `B` are relabelled so that `B` sees them as the alias's. """

    def __init__(self, kind: ProtocolKind, alias: str):
        self.kind = kind
        self.alias = alias

    def __call__(self, sim: Simulator, node: str, send: Send) -> List[Tuple[str, Send]]:
        msg = try_decode(send.data)
        if msg is None or msg.kind is not self.kind:
            return [(node, send)]
        if node == 'A' and send.to == 'B':
            return [(self.alias, replace(send, data=_relabel(send.data, self.alias, 'B')))]
        if node == 'B' and send.to == self.alias:
            return [('B', replace(send, to='A', data=_relabel(send.data, 'B', 'A')))]
        return [(node, send)]


def _unknown_key_share(bed: AttackBed, script: UnknownKeyShare) -> Verdict:
    kind = bed.kind
    alias = script.intruder
    if kind.family not in (Family.TKDF_ASYM, Family.ON_DEMAND):
        raise ScriptError(f"Unknown key-share needs public-key material, not ({kind.value}).")
    if alias in ('A', 'B'):
        raise ScriptError(f"The alias ({alias}) cannot be one of the honest peers.")

    a_public = bed.stores['A'].keypair.public_part
    if kind.family is Family.TKDF_ASYM:
        bed.stores[bed.server].directory[alias] = a_public
    else:
        bed.stores['B'].directory[alias] = a_public

    sim = bed.simulator()
    a_ids = bed.ids('A', 'B')
    b_ids = bed.ids(alias, 'B')
    bed.bind(sim, [bed.engine(Role.INITIATOR, a_ids), bed.engine(Role.RESPONDER, b_ids)])
    bed.bind_server(sim, a_ids)
    sim.interceptor = _AliasRelay(kind, alias)
    bed.run(sim, 'A')

    a_key, b_key = _key_of(sim, 'A'), _key_of(sim, 'B')
    success = (
        a_key is not None
        and a_key == b_key
        and _peer_of(sim, 'A') == 'B'
        and _peer_of(sim, 'B') == alias
    )
    findings = [f"({node}) aborted: {reason}" for node, (_, reason) in sim.failures.items()]
    if success:
        findings.append(f"(A) believes it shares the key with (B); (B) believes ({alias})")
    return success, [], findings


# ----- active, own engines -----

def _impersonate(
        bed: AttackBed,
        impersonated: str,
        victim: str,
        initiates: bool,
        store: Keystore,
        label: str,
) -> Verdict:
    for node in (impersonated, victim):
        if node not in ATTACK_PEERS:
            raise ScriptError(f"({node}) is not a peer of the attack bed.")
    if impersonated == victim:
        raise ScriptError(f"Cannot impersonate ({victim}) to itself.")

    sim = bed.simulator()
    if initiates:
        ids = bed.ids(impersonated, victim)
        attacker_role, victim_role = Role.INITIATOR, Role.RESPONDER
    else:
        ids = bed.ids(victim, impersonated)
        attacker_role, victim_role = Role.RESPONDER, Role.INITIATOR

    attacker = bed.try_engine(attacker_role, ids, bed.impostor_store(store, impersonated), label)
    if attacker is None:
        return False, [], [f"material of ({store.owner}) cannot run ({impersonated})'s role"]

    bed.bind(sim, [attacker, bed.engine(victim_role, ids)])
    bed.bind_server(sim, ids)
    bed.run(sim, ids.initiator)

    victim_key = _key_of(sim, victim)
    success = (
        victim_key is not None
        and _peer_of(sim, victim) == impersonated
        and attacker.established
        and attacker.session_key().key.material == victim_key
    )
    findings = [f"({node}) aborted: {reason}" for node, (_, reason) in sim.failures.items()]
    if not success:
        return False, [], findings
    findings.append(f"({victim}) accepted the attacker as ({impersonated})")
    held = [victim_key] if victim_key in recover_keys(bed.kind, bed.knowledge) else []
    return True, held, findings


def _outsider(bed: AttackBed, script: Impersonation) -> Verdict:
    # Individually bound material only; an outsider is no member of a group key.
    own = replace(bed.impostor_store(bed.stores['I'], 'I'), group_key=None)
    bed.knowledge.disclose(own)
    return _impersonate(
        bed, script.impersonated, script.victim, script.attacker_initiates, own, 'outsider'
    )


def _kci(bed: AttackBed, script: KciImpersonation) -> Verdict:
    compromised = script.compromised_node
    bed.check_node(compromised)
    if compromised == script.impersonated:
        raise ScriptError(
            f"Using ({compromised})'s own keys to pose as ({compromised}) is not key "
            f"compromise impersonation."
        )
    store = bed.stores[compromised]
    bed.knowledge.disclose(store)
    return _impersonate(
        bed, script.impersonated, script.victim, script.attacker_initiates, store, 'kci'
    )


# ----- replay -----

class _Replayer:
    """
    Replays an old session's initiator frames to the responder, one per responder
    message. A responder challenge sealed under a key the attacker holds gets answered.
    """

    def __init__(self, bed: AttackBed, frames: List[WireMessage]):
        self.kind = bed.kind
        self.queue = deque(frames)
        self.known = [SymKey.from_material(k) for k in bed.knowledge.session_keys]
        self.ivs = IvSource(bed.attacker_rng('replay'))

    def first(self) -> Send:
        return _send_like(self.kind, 'B', self.queue.popleft())

    def __call__(self, sim: Simulator, node: str, send: Send) -> List[Tuple[str, Send]]:
        out = [(node, send)]
        if node != 'B' or send.to != 'A' or send.retransmit:
            return out
        msg = try_decode(send.data)
        if msg is None or msg.kind is not self.kind:
            return out
        answer = self._answer(msg)
        if answer is not None:
            out.append(('A', _send_like(self.kind, 'B', answer)))
        elif self.queue:
            out.append(('A', _send_like(self.kind, 'B', self.queue.popleft())))
        return out

    def _answer(self, msg: WireMessage) -> Optional[WireMessage]:
        kind = self.kind
        if kind.family is Family.TKDF_SYM:
            steps = tkdf_sym.STEPS[kind]
            if msg.index != steps['challenge']:
                return None
            for key in self.known:
                try:
                    plain = aead_open(key, msg.first(F.SEALED).box(), tkdf_sym.CHALLENGE_AAD)
                    (nb,) = decode_terms(plain, [F.NONCE])
                except (CryptoError, WireError):
                    continue
                terms = encode_terms([WireField.nonce(nonce_minus_one(nb.value))])
                box = aead_seal(key, terms, tkdf_sym.RESPONSE_AAD, self.ivs)
                return WireMessage(kind, steps['response'], 'A', 'B', (WireField.sealed(box),))

        elif kind in (ProtocolKind.PSK_DIRECT, ProtocolKind.PSK_NET_LAYER) and msg.index == 2:
            if not self.known:
                return None
            terms = encode_terms([msg.first(F.NONCE)])
            box = aead_seal(self.known[-1], terms, psk.CHALLENGE_AAD, self.ivs)
            return WireMessage(kind, 3, 'A', 'B', (WireField.sealed(box),))
        return None


def _default_replay_index(kind: ProtocolKind, indices: List[int]) -> int:
    if kind.family is Family.TKDF_SYM:
        return tkdf_sym.STEPS[kind]['ticket']
    return indices[-1]


def _replay(bed: AttackBed, script: Replay) -> Verdict:
    if script.source_session < 0:
        raise ScriptError(f"Source session ({script.source_session}) must be >= 0.")
    for _ in range(script.source_session + 1):
        source, key = _baseline(bed)
    bed.knowledge.learn_session_key(key)

    old: Dict[int, WireMessage] = {}
    for frame in source.transcript:
        msg = try_decode(frame.data)
        if msg is not None and msg.sender == 'A' and msg.receiver == 'B':
            old.setdefault(msg.index, msg)
    indices = sorted(old)
    index = script.msg_index
    if index is None:
        index = _default_replay_index(bed.kind, indices)
    if index not in old:
        raise ScriptError(
            f"Message ({index}) of ({bed.kind.value}) is not an initiator frame; "
            f"choose from ({', '.join(map(str, indices))})."
        )

    sim = bed.simulator()
    ids = bed.ids()
    bed.bind(sim, [bed.engine(Role.RESPONDER, ids, label='replayed')])
    bed.bind_server(sim, ids)
    replayer = _Replayer(bed, [old[i] for i in indices if i <= index])
    sim.interceptor = replayer
    sim.inject('A', replayer.first())
    bed.run(sim)

    b_key = _key_of(sim, 'B')
    success = b_key is not None and b_key == key and _peer_of(sim, 'B') == 'A'
    findings = [f"({node}) aborted: {reason}" for node, (_, reason) in sim.failures.items()]
    if success:
        findings.append("(B) re-established an old session key with no live (A)")
        return True, [b_key], findings
    return False, [], findings


_ATTACKS: Dict[type, Callable[[AttackBed, AttackScript], Verdict]] = {
    Eavesdrop: _eavesdrop,
    Replay: _replay,
    LoweMitm: _lowe,
    Impersonation: _outsider,
    KciImpersonation: _kci,
    CompromiseAndDecryptPast: _compromise_past,
    UnknownKeyShare: _unknown_key_share,
    PrivacyScan: _privacy_scan,
}


def run_attack(
        kind: ProtocolKind,
        script: AttackScript,
        seed: int = 0,
        provisioning_seed: int = 0,
) -> AttackOutcome:
    """
    Plays `script` against `kind` on a fresh attack bed.

    Args:
        kind: Protocol under attack (name or comparison column id accepted).
        script: One of the `awnbench.adversary.scripts` dataclasses.
        seed: Drives every engine and network choice; equal seeds give equal outcomes.
        provisioning_seed: Long-term key material of the bed.

    Raises:
        ScriptError: the script does not apply to `kind` or names unknown nodes.
        AdversaryError: the honest baseline run failed (a bug, not an attack result).
    """
    kind = ProtocolKind.parse(kind)
    attack = _ATTACKS.get(type(script))
    if attack is None:
        raise ScriptError(f"Not an attack script ({script!r}).")

    bed = AttackBed(kind, seed, provisioning_seed)
    for node in script_nodes(script):
        bed.check_node(node)

    log.debug(f"Running ({script.name}) against ({kind.value}) seed ({seed}).")
    success, held, findings = attack(bed, script)
    outcome = AttackOutcome(
        protocol=kind.value,
        script=script.name,
        seed=seed,
        success=success,
        goal_refs=list(script.goal_refs),
        evidence=bed.knowledge.to_evidence(held, findings),
    )

    if success and outcome.evidence.empty:
        raise AdversaryError(f"Successful ({script.name}) outcome carries no evidence.")
    if held and not check_evidence(kind, outcome.evidence):
        raise AdversaryError(
            f"({script.name}) against ({kind.value}) claims keys its evidence cannot back."
        )
    return outcome
