"""
Public-key trusted key distribution (Needham-Schroeder public-key, with and without
Lowe's identity fix). The server only certifies public keys; the session key comes
from both peers' nonces.

    1. A -> S : A, B
    2. S -> A : Kpb, B, sig_S(Kpb, B)
    3. A -> B : {Na, A}Kpb
    4. B -> S : B, A
    5. S -> B : Kpa, A, sig_S(Kpa, A)
    6. B -> A : {Na, Nb, B}Kpa        ({Na, Nb}Kpa in TkdfAsymUnfixed)
    7. A -> B : {Nb}Kpb

    session = kdf(session, Na, Nb, A, B)
"""
from logging import getLogger
from typing import List, Optional

from Crypto.PublicKey.RSA import RsaKey
from xsentinels.default import Default

from awnbench.crypto import (
    Rng, kdf, pk_encrypt, pk_decrypt, sign, verify, export_public, import_public
)
from awnbench.kinds import ProtocolKind, Role
from awnbench.protocols.actions import Action
from awnbench.protocols.engine import ProtocolEngine, KeyServerEngine, NodeIds, RetryPolicy
from awnbench.protocols.errors import HandshakeReject, PrerequisiteError
from awnbench.protocols.keystore import Keystore
from awnbench.wire import WireField, WireMessage, FieldType as F, encode_terms, decode_terms

log = getLogger(__name__)

SESSION_LABEL = b'tkdf-asym/session'


def certificate_terms(public_der: WireField, subject: WireField) -> bytes:
    """ What the key server signs: the public key bound to its owner's identity. """
    return encode_terms([public_der, subject])


def session_labels(na: bytes, nb: bytes, initiator: str, responder: str) -> list:
    return [SESSION_LABEL, na, nb, initiator.encode('ascii'), responder.encode('ascii')]


class TkdfAsymEngine(ProtocolEngine):
    def __init__(
            self,
            kind: ProtocolKind,
            role: Role,
            ids: NodeIds,
            keystore: Keystore,
            rng: Rng,
            retry: RetryPolicy = Default,
    ):
        super().__init__(kind, role, ids, keystore, rng, retry)
        if not ids.server:
            raise PrerequisiteError(f"({kind.value}) needs a key server id.")
        if keystore.keypair is None:
            raise PrerequisiteError(f"Missing long-term key: own RSA keypair of ({self.self_id}).")
        if keystore.server_public is None:
            raise PrerequisiteError(
                f"Missing long-term key: verification key of server ({ids.server})."
            )
        self.fixed = kind is ProtocolKind.TKDF_ASYM
        self._peer_public: Optional[RsaKey] = None
        self._na = self._nb = None

        if role is Role.INITIATOR:
            self._handlers = {2: self._on_certificate, 6: self._on_nonces}
        else:
            self._handlers = {3: self._on_hello, 5: self._on_certificate, 7: self._on_confirm}
            self._expect(3)

    @property
    def _private(self) -> RsaKey:
        return self.keystore.keypair.private_part

    def _nonces_terms(self):
        if self.fixed:
            return [F.NONCE, F.NONCE, F.IDENTITY]
        return [F.NONCE, F.NONCE]

    def _begin(self, now: int) -> List[Action]:
        msg = self._message(
            1, WireField.identity(self.self_id), WireField.identity(self.peer_id)
        )
        return self._send(msg, awaits=2)

    def _check_certificate(self, msg: WireMessage) -> RsaKey:
        der, subject, sig = msg.payload
        if subject.label() != self.peer_id:
            raise HandshakeReject('identity-mismatch', f"certificate for ({subject.label()})")
        if not verify(self.keystore.server_public, certificate_terms(der, subject), sig.value):
            raise HandshakeReject('authentication', "certificate signature")
        return import_public(der.value)

    def _on_certificate(self, msg: WireMessage, now: int) -> List[Action]:
        self._peer_public = self._check_certificate(msg)

        if self.role is Role.INITIATOR:
            self._na = self._nonces.next().value
            terms = encode_terms([WireField.nonce(self._na), WireField.identity(self.self_id)])
            box = pk_encrypt(self._peer_public, terms, self._rng)
            return self._send(self._message(3, WireField.sealed(box)), awaits=6)

        self._nb = self._nonces.next().value
        terms = [WireField.nonce(self._na), WireField.nonce(self._nb)]
        if self.fixed:
            terms.append(WireField.identity(self.self_id))
        box = pk_encrypt(self._peer_public, encode_terms(terms), self._rng)
        return self._send(self._message(6, WireField.sealed(box)), awaits=7)

    def _on_hello(self, msg: WireMessage, now: int) -> List[Action]:
        plain = pk_decrypt(self._private, msg.first(F.PK_SEALED).box())
        na, a = decode_terms(plain, [F.NONCE, F.IDENTITY])
        if a.label() != self.peer_id:
            raise HandshakeReject('identity-mismatch', f"hello sealed by ({a.label()})")
        self._na = na.value
        msg = self._message(
            4, WireField.identity(self.self_id), WireField.identity(self.peer_id)
        )
        return self._send(msg, awaits=5)

    def _on_nonces(self, msg: WireMessage, now: int) -> List[Action]:
        plain = pk_decrypt(self._private, msg.first(F.PK_SEALED).box())
        terms = decode_terms(plain, self._nonces_terms())
        if terms[0].value != self._na:
            raise HandshakeReject('nonce-mismatch', "initiator nonce not echoed")
        if self.fixed and terms[2].label() != self.peer_id:
            raise HandshakeReject('identity-mismatch', f"nonces sealed by ({terms[2].label()})")
        self._nb = terms[1].value
        box = pk_encrypt(
            self._peer_public, encode_terms([WireField.nonce(self._nb)]), self._rng
        )
        actions = self._send(self._message(7, WireField.sealed(box)))
        return actions + self._finish(now)

    def _on_confirm(self, msg: WireMessage, now: int) -> List[Action]:
        plain = pk_decrypt(self._private, msg.first(F.PK_SEALED).box())
        (nb,) = decode_terms(plain, [F.NONCE])
        if nb.value != self._nb:
            raise HandshakeReject('nonce-mismatch', "responder nonce not echoed")
        return self._finish(now)

    def _finish(self, now: int) -> List[Action]:
        labels = session_labels(self._na, self._nb, self.ids.initiator, self.ids.responder)
        return self._establish(
            kdf(labels), (self.ids.initiator, self.ids.responder), labels, now
        )


class TkdfAsymServer(KeyServerEngine):
    """ Certifies directory entries: answers (requester, subject) with subject's signed key. """

    serves = {1: 2, 4: 5}

    def __init__(
            self,
            kind: ProtocolKind,
            ids: NodeIds,
            keystore: Keystore,
            rng: Rng,
            retry: RetryPolicy = Default,
    ):
        super().__init__(kind, ids, keystore, rng, retry)
        if keystore.keypair is None:
            raise PrerequisiteError(f"Missing long-term key: signing keypair of ({self.self_id}).")

    def _serve(self, msg: WireMessage, now: int) -> WireMessage:
        requester, subject = msg.payload
        if requester.label() != msg.sender:
            raise HandshakeReject('identity-mismatch', "request names another requester")
        public = self.keystore.directory.get(subject.label())
        if public is None:
            raise HandshakeReject('authentication', f"({subject.label()}) is not registered")
        der = WireField.public_key(export_public(public))
        signature = sign(self.keystore.keypair.private_part, certificate_terms(der, subject))
        return self._reply(msg, der, subject, WireField.signature(signature))
