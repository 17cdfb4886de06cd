"""
Symmetric trusted key distribution (Needham-Schroeder shared-key, with and without the
responder-nonce amendment).

Fixed (`TkdfSym`), seven messages:

    1. A -> B : A, B, Na
    2. B -> A : {A, Nb'}Kbs
    3. A -> S : A, B, Na, {A, Nb'}Kbs
    4. S -> A : {Na, B, Kab, {Kab, Nb', A}Kbs}Kas
    5. A -> B : {Kab, Nb', A}Kbs
    6. B -> A : {Nb}Kab
    7. A -> B : {Nb - 1}Kab

Every node <-> server key is replaced by a one-way successor right after it has been
used for a distribution (S after issuing, A after opening message 4, B after opening
the ticket), so old tickets and distributions stop opening once a session completes.

Unfixed (`TkdfSymUnfixed`), five messages, static keys:

    1. A -> S : A, B, Na
    2. S -> A : {Na, B, Kab, {Kab, A}Kbs}Kas
    3. A -> B : {Kab, A}Kbs
    4. B -> A : {Nb}Kab
    5. A -> B : {Nb - 1}Kab
"""
from logging import getLogger
from typing import List

from xsentinels.default import Default

from awnbench.crypto import Rng, SymKey, aead_seal, aead_open
from awnbench.kinds import ProtocolKind, Role
from awnbench.protocols.actions import Action
from awnbench.protocols.engine import (
    ProtocolEngine, KeyServerEngine, NodeIds, RetryPolicy, long_term_sym, nonce_minus_one
)
from awnbench.protocols.errors import HandshakeReject, PrerequisiteError
from awnbench.protocols.keystore import Keystore
from awnbench.wire import WireField, WireMessage, FieldType as F, encode_terms, decode_terms

log = getLogger(__name__)

RESPONDER_NONCE_AAD = b'tkdf-sym/responder-nonce'
TICKET_AAD = b'tkdf-sym/ticket'
DISTRIBUTION_AAD = b'tkdf-sym/distribution'
CHALLENGE_AAD = b'tkdf-sym/challenge'
RESPONSE_AAD = b'tkdf-sym/response'

# step name -> message index, per variant
STEPS = {
    ProtocolKind.TKDF_SYM: dict(
        hello=1, responder_nonce=2, request=3, distribution=4, ticket=5, challenge=6, response=7
    ),
    ProtocolKind.TKDF_SYM_UNFIXED: dict(
        request=1, distribution=2, ticket=3, challenge=4, response=5
    ),
}


def _ticket_types(fixed: bool):
    return (F.KEY, F.NONCE, F.IDENTITY) if fixed else (F.KEY, F.IDENTITY)


class TkdfSymEngine(ProtocolEngine):
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
        long_term_sym(keystore.shared.get(ids.server), f"key shared with server ({ids.server})")

        self.fixed = kind is ProtocolKind.TKDF_SYM
        self._step = STEPS[kind]
        self._na = self._nb = self._nb_prime = None
        self._ticket = None
        self._kab = None
        self._responder_box = None

        s = self._step
        if role is Role.INITIATOR:
            self._handlers = {
                s['distribution']: self._on_distribution,
                s['challenge']: self._on_challenge,
            }
            if self.fixed:
                self._handlers[s['responder_nonce']] = self._on_responder_nonce
        else:
            self._handlers = {s['ticket']: self._on_ticket, s['response']: self._on_response}
            if self.fixed:
                self._handlers[s['hello']] = self._on_hello
                self._expect(s['hello'])
            else:
                self._expect(s['ticket'])

    @property
    def _server_key(self) -> SymKey:
        # Read fresh each time; the fixed variant ratchets it.
        return SymKey.from_material(self.keystore.shared[self.ids.server])

    def _identity(self, node: str) -> WireField:
        return WireField.identity(node)

    # ----- initiator -----

    def _begin(self, now: int) -> List[Action]:
        self._na = self._nonces.next().value
        if self.fixed:
            msg = self._message(
                self._step['hello'],
                self._identity(self.ids.initiator),
                self._identity(self.ids.responder),
                WireField.nonce(self._na),
            )
            return self._send(msg, awaits=self._step['responder_nonce'])
        return self._request(box_field=None)

    def _on_responder_nonce(self, msg: WireMessage, now: int) -> List[Action]:
        # Opaque to A; only the server can open it.
        return self._request(box_field=msg.first(F.SEALED))

    def _request(self, box_field) -> List[Action]:
        payload = [
            self._identity(self.ids.initiator),
            self._identity(self.ids.responder),
            WireField.nonce(self._na),
        ]
        if box_field is not None:
            payload.append(box_field)
        msg = self._message(self._step['request'], *payload)
        return self._send(msg, awaits=self._step['distribution'])

    def _on_distribution(self, msg: WireMessage, now: int) -> List[Action]:
        plain = aead_open(self._server_key, msg.first(F.SEALED).box(), DISTRIBUTION_AAD)
        na, b, kab, ticket = decode_terms(plain, [F.NONCE, F.IDENTITY, F.KEY, F.SEALED])
        if na.value != self._na:
            raise HandshakeReject('nonce-mismatch', "distribution answers another request")
        if b.label() != self.ids.responder:
            raise HandshakeReject('identity-mismatch', f"key issued for ({b.label()})")
        self._kab = kab.sym_key()
        if self.fixed:
            self.keystore.ratchet(self.ids.server)
        msg = self._message(self._step['ticket'], ticket)
        return self._send(msg, awaits=self._step['challenge'])

    def _on_challenge(self, msg: WireMessage, now: int) -> List[Action]:
        plain = aead_open(self._kab, msg.first(F.SEALED).box(), CHALLENGE_AAD)
        (nb,) = decode_terms(plain, [F.NONCE])
        self._nb = nb.value
        terms = encode_terms([WireField.nonce(nonce_minus_one(self._nb))])
        box = aead_seal(self._kab, terms, RESPONSE_AAD, self._ivs)
        actions = self._send(self._message(self._step['response'], WireField.sealed(box)))
        return actions + self._finish(now)

    # ----- responder -----

    def _on_hello(self, msg: WireMessage, now: int) -> List[Action]:
        a, b, _na = msg.payload
        if a.label() != msg.sender or b.label() != self.self_id:
            raise HandshakeReject('identity-mismatch', "hello names other nodes")
        self._nb_prime = self._nonces.next().value
        terms = encode_terms([a, WireField.nonce(self._nb_prime)])
        box = aead_seal(self._server_key, terms, RESPONDER_NONCE_AAD, self._ivs)
        msg = self._message(self._step['responder_nonce'], WireField.sealed(box))
        return self._send(msg, awaits=self._step['ticket'])

    def _on_ticket(self, msg: WireMessage, now: int) -> List[Action]:
        plain = aead_open(self._server_key, msg.first(F.SEALED).box(), TICKET_AAD)
        terms = decode_terms(plain, _ticket_types(self.fixed))
        kab, ident = terms[0], terms[-1]
        if self.fixed and terms[1].value != self._nb_prime:
            raise HandshakeReject('nonce-mismatch', "ticket is not for this session")
        if ident.label() != self.ids.initiator:
            raise HandshakeReject('identity-mismatch', f"ticket names ({ident.label()})")
        self._kab = kab.sym_key()
        if self.fixed:
            self.keystore.ratchet(self.ids.server)

        self._nb = self._nonces.next().value
        box = aead_seal(
            self._kab, encode_terms([WireField.nonce(self._nb)]), CHALLENGE_AAD, self._ivs
        )
        msg = self._message(self._step['challenge'], WireField.sealed(box))
        return self._send(msg, awaits=self._step['response'])

    def _on_response(self, msg: WireMessage, now: int) -> List[Action]:
        plain = aead_open(self._kab, msg.first(F.SEALED).box(), RESPONSE_AAD)
        (answer,) = decode_terms(plain, [F.NONCE])
        if answer.value != nonce_minus_one(self._nb):
            raise HandshakeReject('nonce-mismatch', "challenge answer differs")
        return self._finish(now)

    def _finish(self, now: int) -> List[Action]:
        labels = [self._kab.material, self._nb]
        return self._establish(self._kab, (self.ids.server,), labels, now)


class TkdfSymServer(KeyServerEngine):
    """ Issues a fresh 256-bit Kab per distinct request. """

    def __init__(
            self,
            kind: ProtocolKind,
            ids: NodeIds,
            keystore: Keystore,
            rng: Rng,
            retry: RetryPolicy = Default,
    ):
        super().__init__(kind, ids, keystore, rng, retry)
        if not keystore.shared:
            raise PrerequisiteError(f"Key server ({self.self_id}) shares no node keys.")
        self.fixed = kind is ProtocolKind.TKDF_SYM
        step = STEPS[kind]
        self.serves = {step['request']: step['distribution']}

    def _key_for(self, node: str) -> SymKey:
        material = self.keystore.shared.get(node)
        if material is None:
            raise HandshakeReject('authentication', f"no key registered for ({node})")
        return SymKey.from_material(material)

    def _serve(self, msg: WireMessage, now: int) -> WireMessage:
        a, b, na = msg.payload[:3]
        if a.label() != msg.sender:
            raise HandshakeReject('identity-mismatch', "request names another initiator")
        kas = self._key_for(a.label())
        kbs = self._key_for(b.label())

        ticket_terms = []
        if self.fixed:
            plain = aead_open(kbs, msg.first(F.SEALED).box(), RESPONDER_NONCE_AAD)
            inner_a, nb_prime = decode_terms(plain, [F.IDENTITY, F.NONCE])
            if inner_a.label() != a.label():
                raise HandshakeReject('identity-mismatch', "responder nonce bound to another")
            ticket_terms = [nb_prime]

        kab = SymKey(bits=256, material=self._rng.read(32))
        ticket = aead_seal(
            kbs,
            encode_terms([WireField.key(kab), *ticket_terms, a]),
            TICKET_AAD,
            self._ivs,
        )
        distribution = aead_seal(
            kas,
            encode_terms([na, b, WireField.key(kab), WireField.sealed(ticket)]),
            DISTRIBUTION_AAD,
            self._ivs,
        )
        if self.fixed:
            self.keystore.ratchet(a.label())
            self.keystore.ratchet(b.label())
        log.debug(f"Key server ({self.self_id}) issued a key for ({a.label()}, {b.label()}).")
        return self._reply(msg, WireField.sealed(distribution))
