"""
Pre-shared key engines.

PskDirect / PskNetLayer (challenge-response; the session key *is* the pre-shared key):

    1. A -> B : A
    2. B -> A : challenge
    3. A -> B : {challenge}K
    4. B -> A : status

PskMaster (per-session key derived from a group master key):

    1. A -> B : A, Na
    2. B -> A : Nb, mac(Kc; responder, A, B, Na, Nb)
    3. A -> B : mac(Kc; initiator, A, B, Na, Nb)
    4. B -> A : mac(Kc; confirm, A, B, Na, Nb)

    Kc = kdf(confirm, master, Na, Nb);  session = kdf(session, master, Na, Nb, A, B)
"""
from typing import List

from xsentinels.default import Default

from awnbench.crypto import Rng, aead_seal, aead_open, kdf, mac, mac_verify
from awnbench.kinds import ProtocolKind, Role
from awnbench.protocols.actions import Action
from awnbench.protocols.engine import ProtocolEngine, NodeIds, RetryPolicy, long_term_sym
from awnbench.protocols.errors import HandshakeReject
from awnbench.protocols.keystore import Keystore
from awnbench.wire import WireField, WireMessage, FieldType, encode_terms, decode_terms

STATUS_OK = 0x01
CHALLENGE_AAD = b'psk/challenge'


def master_session_labels(
        master: bytes, na: bytes, nb: bytes, initiator: str, responder: str
) -> list:
    return [
        b'psk-master/session',
        master,
        na,
        nb,
        initiator.encode('ascii'),
        responder.encode('ascii'),
    ]


class PskChallengeEngine(ProtocolEngine):
    """ PskDirect (group key, link layer) and PskNetLayer (pairwise key, network layer). """

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
        if kind is ProtocolKind.PSK_DIRECT:
            self._key = long_term_sym(keystore.group_key, "network group key")
        else:
            self._key = long_term_sym(
                keystore.shared.get(self.peer_id), f"pairwise key with ({self.peer_id})"
            )
        self._challenge = None
        if role is Role.INITIATOR:
            self._handlers = {2: self._on_challenge, 4: self._on_status}
        else:
            self._handlers = {1: self._on_request, 3: self._on_response}
            self._expect(1)

    def _begin(self, now: int) -> List[Action]:
        return self._send(self._message(1, WireField.identity(self.self_id)), awaits=2)

    def _on_request(self, msg: WireMessage, now: int) -> List[Action]:
        if msg.first(FieldType.IDENTITY).label() != msg.sender:
            raise HandshakeReject('identity-mismatch', "request names another node")
        self._challenge = self._nonces.next().value
        return self._send(self._message(2, WireField.nonce(self._challenge)), awaits=3)

    def _on_challenge(self, msg: WireMessage, now: int) -> List[Action]:
        challenge = msg.first(FieldType.NONCE).value
        box = aead_seal(
            self._key, encode_terms([WireField.nonce(challenge)]), CHALLENGE_AAD, self._ivs
        )
        return self._send(self._message(3, WireField.sealed(box)), awaits=4)

    def _on_response(self, msg: WireMessage, now: int) -> List[Action]:
        plain = aead_open(self._key, msg.first(FieldType.SEALED).box(), CHALLENGE_AAD)
        (answer,) = decode_terms(plain, [FieldType.NONCE])
        if answer.value != self._challenge:
            raise HandshakeReject('nonce-mismatch', "challenge answer differs")
        actions = self._send(self._message(4, WireField.status(STATUS_OK)))
        return actions + self._establish(self._key, (), [self._key.material], now)

    def _on_status(self, msg: WireMessage, now: int) -> List[Action]:
        if msg.first(FieldType.STATUS).value != bytes([STATUS_OK]):
            raise HandshakeReject('authentication', "responder refused")
        return self._establish(self._key, (), [self._key.material], now)


class PskMasterEngine(ProtocolEngine):
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
        self._master = long_term_sym(keystore.group_key, "group master key")
        self._na = self._nb = None
        self._confirm = None
        if role is Role.INITIATOR:
            self._handlers = {2: self._on_responder_nonce, 4: self._on_finished}
        else:
            self._handlers = {1: self._on_hello, 3: self._on_initiator_mac}
            self._expect(1)

    def _labels(self, purpose: bytes) -> list:
        return [
            purpose,
            self._id_bytes(self.ids.initiator),
            self._id_bytes(self.ids.responder),
            self._na,
            self._nb,
        ]

    def _derive_confirm(self):
        self._confirm = kdf([b'psk-master/confirm', self._master.material, self._na, self._nb])

    def _session_labels(self) -> list:
        return master_session_labels(
            self._master.material, self._na, self._nb, self.ids.initiator, self.ids.responder
        )

    def _begin(self, now: int) -> List[Action]:
        self._na = self._nonces.next().value
        msg = self._message(1, WireField.identity(self.self_id), WireField.nonce(self._na))
        return self._send(msg, awaits=2)

    def _on_hello(self, msg: WireMessage, now: int) -> List[Action]:
        if msg.first(FieldType.IDENTITY).label() != msg.sender:
            raise HandshakeReject('identity-mismatch', "hello names another node")
        self._na = msg.first(FieldType.NONCE).value
        self._nb = self._nonces.next().value
        self._derive_confirm()
        tag = mac(self._confirm, self._labels(b'responder'))
        msg = self._message(2, WireField.nonce(self._nb), WireField.mac(tag))
        return self._send(msg, awaits=3)

    def _on_responder_nonce(self, msg: WireMessage, now: int) -> List[Action]:
        self._nb = msg.first(FieldType.NONCE).value
        self._derive_confirm()
        tag = msg.first(FieldType.MAC).value
        if not mac_verify(self._confirm, self._labels(b'responder'), tag):
            raise HandshakeReject('authentication', "responder MAC")
        tag = mac(self._confirm, self._labels(b'initiator'))
        return self._send(self._message(3, WireField.mac(tag)), awaits=4)

    def _on_initiator_mac(self, msg: WireMessage, now: int) -> List[Action]:
        tag = msg.first(FieldType.MAC).value
        if not mac_verify(self._confirm, self._labels(b'initiator'), tag):
            raise HandshakeReject('authentication', "initiator MAC")
        tag = mac(self._confirm, self._labels(b'confirm'))
        actions = self._send(self._message(4, WireField.mac(tag)))
        return actions + self._finish(now)

    def _on_finished(self, msg: WireMessage, now: int) -> List[Action]:
        tag = msg.first(FieldType.MAC).value
        if not mac_verify(self._confirm, self._labels(b'confirm'), tag):
            raise HandshakeReject('authentication', "confirmation MAC")
        return self._finish(now)

    def _finish(self, now: int) -> List[Action]:
        labels = self._session_labels()
        key = kdf(labels, 128)
        return self._establish(key, (self.ids.initiator, self.ids.responder), labels, now)
