"""
On-demand signed Diffie-Hellman (station-to-station), carried over a stream.

    1. A -> B : gA, Na
    2. B -> A : gB, Nb, sig_B(gA, gB, Na, Nb, A)
    3. A -> B : sig_A(gB, gA, Nb, Na, B)
    4. B -> A : mac(Kc; finished, A, B)

    Kc = kdf(confirm, gAB, Na, Nb);  session = kdf(session, gAB, Na, Nb, A, B)

Each signature names the node it is meant for, so neither side can be talked into
accepting a key for a third identity. The DH secrets are per session, hence past
session keys survive a later compromise of the signing keys.
"""
from typing import List

from Crypto.PublicKey.RSA import RsaKey
from xsentinels.default import Default

from awnbench.crypto import (
    Rng, kdf, mac, mac_verify, sign, verify, dh_keygen, dh_shared, frame_labels
)
from awnbench.kinds import ProtocolKind, Role
from awnbench.protocols.actions import Action
from awnbench.protocols.engine import ProtocolEngine, NodeIds, RetryPolicy
from awnbench.protocols.errors import HandshakeReject, PrerequisiteError
from awnbench.protocols.keystore import Keystore
from awnbench.wire import WireField, WireMessage, FieldType as F


class StsEngine(ProtocolEngine):
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
        if keystore.keypair is None:
            raise PrerequisiteError(
                f"Missing long-term key: own signing keypair of ({self.self_id})."
            )
        if self.peer_id not in keystore.directory:
            raise PrerequisiteError(
                f"Missing long-term key: verification key of peer ({self.peer_id})."
            )
        self._dh_secret = None
        self._ga = self._gb = None
        self._na = self._nb = None
        self._shared = None
        self._confirm = None

        if role is Role.INITIATOR:
            self._handlers = {2: self._on_reply, 4: self._on_finished}
        else:
            self._handlers = {1: self._on_hello, 3: self._on_signature}
            self._expect(1)

    @property
    def _peer_public(self) -> RsaKey:
        return self.keystore.directory[self.peer_id]

    def _ids(self) -> List[bytes]:
        return [self._id_bytes(self.ids.initiator), self._id_bytes(self.ids.responder)]

    def _derive(self):
        self._confirm = kdf([b'sts/confirm', self._shared, self._na, self._nb])

    def _begin(self, now: int) -> List[Action]:
        self._ga, self._dh_secret = dh_keygen(self._rng)
        self._na = self._nonces.next().value
        msg = self._message(1, WireField.dh_public(self._ga), WireField.nonce(self._na))
        return self._send(msg, awaits=2)

    def _on_hello(self, msg: WireMessage, now: int) -> List[Action]:
        self._ga = msg.first(F.DH_PUBLIC).value
        self._na = msg.first(F.NONCE).value
        self._gb, self._dh_secret = dh_keygen(self._rng)
        self._nb = self._nonces.next().value
        self._shared = dh_shared(self._dh_secret, self._ga)
        self._derive()

        signed = frame_labels(
            [self._ga, self._gb, self._na, self._nb, self._id_bytes(self.peer_id)]
        )
        signature = sign(self.keystore.keypair.private_part, signed)
        msg = self._message(
            2,
            WireField.dh_public(self._gb),
            WireField.nonce(self._nb),
            WireField.signature(signature),
        )
        return self._send(msg, awaits=3)

    def _on_reply(self, msg: WireMessage, now: int) -> List[Action]:
        self._gb = msg.first(F.DH_PUBLIC).value
        self._nb = msg.first(F.NONCE).value
        signed = frame_labels(
            [self._ga, self._gb, self._na, self._nb, self._id_bytes(self.self_id)]
        )
        if not verify(self._peer_public, signed, msg.first(F.SIGNATURE).value):
            raise HandshakeReject('authentication', "responder signature")
        self._shared = dh_shared(self._dh_secret, self._gb)
        self._derive()

        signed = frame_labels(
            [self._gb, self._ga, self._nb, self._na, self._id_bytes(self.peer_id)]
        )
        signature = sign(self.keystore.keypair.private_part, signed)
        return self._send(self._message(3, WireField.signature(signature)), awaits=4)

    def _on_signature(self, msg: WireMessage, now: int) -> List[Action]:
        signed = frame_labels(
            [self._gb, self._ga, self._nb, self._na, self._id_bytes(self.self_id)]
        )
        if not verify(self._peer_public, signed, msg.first(F.SIGNATURE).value):
            raise HandshakeReject('authentication', "initiator signature")
        tag = mac(self._confirm, [b'sts/finished', *self._ids()])
        actions = self._send(self._message(4, WireField.mac(tag)))
        return actions + self._finish(now)

    def _on_finished(self, msg: WireMessage, now: int) -> List[Action]:
        if not mac_verify(self._confirm, [b'sts/finished', *self._ids()], msg.first(F.MAC).value):
            raise HandshakeReject('authentication', "finished MAC")
        return self._finish(now)

    def _finish(self, now: int) -> List[Action]:
        labels = [b'sts/session', self._shared, self._na, self._nb, *self._ids()]
        self._dh_secret = None
        return self._establish(
            kdf(labels), (self.ids.initiator, self.ids.responder), labels, now
        )
