"""
What the attacker knows, and which session keys that knowledge yields.

`recover_keys` only ever combines observed frames with disclosed material through the
same public derivations the protocols use, so anything it returns is computable by a
network attacker holding that material. `check_evidence` reruns it on an outcome's
evidence alone, independently of the attack run that produced it.
"""
from dataclasses import dataclass, field
from itertools import product
from logging import getLogger
from typing import Iterable, List, Set

from Crypto.PublicKey.RSA import RsaKey

from awnbench.crypto import (
    CryptoError, SymKey, aead_open, kdf, pk_decrypt, export_private, import_private
)
from awnbench.kinds import Family, ProtocolKind
from awnbench.protocols.keystore import Keystore
from awnbench.protocols.psk import master_session_labels
from awnbench.protocols.tkdf_asym import session_labels as asym_session_labels
from awnbench.protocols.tkdf_sym import DISTRIBUTION_AAD, TICKET_AAD
from awnbench.wire import FieldType as F, WireError, WireMessage, decode_terms, try_decode
from awnbench.adversary.models import Evidence

log = getLogger(__name__)


@dataclass
class Knowledge:
    frames: List[bytes] = field(default_factory=list)
    group_keys: List[bytes] = field(default_factory=list)
    sym_keys: List[bytes] = field(default_factory=list)
    private_keys: List[RsaKey] = field(default_factory=list)
    session_keys: List[bytes] = field(default_factory=list)

    def observe(self, frames: Iterable[bytes]):
        self.frames.extend(bytes(f) for f in frames)

    def disclose(self, store: Keystore):
        """ Adds everything secret in a compromised (or intruder-owned) keystore. """
        if store.group_key is not None and store.group_key not in self.group_keys:
            self.group_keys.append(store.group_key)
        for secret in store.shared.values():
            if secret not in self.sym_keys:
                self.sym_keys.append(secret)
        if store.keypair is not None:
            self.private_keys.append(store.keypair.private_part)

    def learn_session_key(self, material: bytes):
        if material not in self.session_keys:
            self.session_keys.append(material)

    def to_evidence(self, derived: Iterable[bytes] = (), findings: Iterable[str] = ()) -> Evidence:
        disclosed = {}
        for name, values in (
            ('group_keys', self.group_keys),
            ('sym_keys', self.sym_keys),
            ('session_keys', self.session_keys),
        ):
            if values:
                disclosed[name] = [v.hex() for v in values]
        if self.private_keys:
            disclosed['private_keys'] = [export_private(k).hex() for k in self.private_keys]
        return Evidence(
            frames=[f.hex() for f in self.frames],
            disclosed=disclosed,
            derived_keys=sorted(k.hex() for k in derived),
            findings=list(findings),
        )

    @classmethod
    def from_evidence(cls, evidence: Evidence) -> 'Knowledge':
        disclosed = evidence.disclosed or {}

        def raw(name: str) -> List[bytes]:
            return [bytes.fromhex(v) for v in disclosed.get(name, ())]

        return cls(
            frames=[bytes.fromhex(f) for f in evidence.frames or ()],
            group_keys=raw('group_keys'),
            sym_keys=raw('sym_keys'),
            private_keys=[import_private(der) for der in raw('private_keys')],
            session_keys=raw('session_keys'),
        )


def _messages(kind: ProtocolKind, frames: Iterable[bytes]) -> List[WireMessage]:
    out = []
    for data in frames:
        msg = try_decode(data)
        if msg is not None and msg.kind is kind:
            out.append(msg)
    return out


def _psk_master(messages: List[WireMessage], masters: List[bytes]) -> Set[bytes]:
    hellos = {(m.sender, m.receiver): m.first(F.NONCE).value for m in messages if m.index == 1}
    found = set()
    for m in messages:
        if m.index != 2:
            continue
        na = hellos.get((m.receiver, m.sender))
        if na is None:
            continue
        nb = m.first(F.NONCE).value
        for master in masters:
            labels = master_session_labels(master, na, nb, m.receiver, m.sender)
            found.add(kdf(labels, 128).material)
    return found


def _tkdf_sym(messages: List[WireMessage], keys: List[bytes]) -> Set[bytes]:
    candidates = []
    for material in keys:
        try:
            candidates.append(SymKey.from_material(material))
        except CryptoError:
            continue

    found = set()
    boxes = [f.box() for m in messages for f in m.fields(F.SEALED)]
    for box, key, aad in product(boxes, candidates, (DISTRIBUTION_AAD, TICKET_AAD)):
        try:
            plain = aead_open(key, box, aad)
            terms = decode_terms(plain)
        except (CryptoError, WireError):
            continue
        found.update(t.value for t in terms if t.type is F.KEY)
    return found


def _tkdf_asym(messages: List[WireMessage], private_keys: List[RsaKey]) -> Set[bytes]:
    initiator_nonces, responder_nonces = set(), set()
    pairs = set()
    for m in messages:
        if m.index in (3, 7):
            pairs.add((m.sender, m.receiver))
        for f, private in product(m.fields(F.PK_SEALED), private_keys):
            try:
                nonces = [t.value for t in decode_terms(pk_decrypt(private, f.box()))
                          if t.type is F.NONCE]
            except (CryptoError, WireError):
                continue
            if m.index == 3:
                initiator_nonces.update(nonces[:1])
            elif m.index == 6:
                initiator_nonces.update(nonces[:1])
                responder_nonces.update(nonces[1:2])
            elif m.index == 7:
                responder_nonces.update(nonces[:1])

    return {
        kdf(asym_session_labels(na, nb, a, b)).material
        for na, nb, (a, b) in product(initiator_nonces, responder_nonces, pairs)
    }


def recover_keys(kind: ProtocolKind, knowledge: Knowledge) -> Set[bytes]:
    """
    Session keys (raw material) computable from `knowledge` for sessions of `kind` seen in
    its frames. Known session keys are included as they are.

    The ephemeral Diffie-Hellman secrets of OnDemandSts are never disclosed, so nothing
    beyond known session keys comes back for it.
    """
    found = set(knowledge.session_keys)
    messages = _messages(kind, knowledge.frames)
    if not messages:
        return found

    family = kind.family
    if kind is ProtocolKind.PSK_DIRECT:
        found.update(knowledge.group_keys)
    elif kind is ProtocolKind.PSK_NET_LAYER:
        found.update(knowledge.sym_keys)
    elif kind is ProtocolKind.PSK_MASTER:
        found |= _psk_master(messages, knowledge.group_keys)
    elif family is Family.TKDF_SYM:
        found |= _tkdf_sym(messages, knowledge.sym_keys)
    elif family is Family.TKDF_ASYM:
        found |= _tkdf_asym(messages, knowledge.private_keys)
    return found


def check_evidence(kind: ProtocolKind, evidence: Evidence) -> bool:
    """ True when every key the evidence claims is re-derivable from the evidence alone. """
    candidates = recover_keys(kind, Knowledge.from_evidence(evidence))
    claimed = [bytes.fromhex(k) for k in evidence.derived_keys or ()]
    missing = [k for k in claimed if k not in candidates]
    if missing:
        log.warning(f"Evidence claims ({len(missing)}) key(s) it does not support.")
    return not missing
