"""
Sans-IO base for every handshake engine.

An engine consumes three kinds of events and returns a list of `Action`:

- `start(now)` on the initiator,
- `on_message(sender, data, now)` for every frame delivered to its node,
- `on_timeout(timer_id, now)` when a `StartTimer` it asked for expires.

Subclasses only describe the protocol: which handler runs for which message index,
and what each handler checks and sends. Everything else lives here:

- Messages are accepted only if they decode, belong to this engine's protocol, are
  addressed to this node, and are the index this engine is currently waiting for.
  Anything else is ignored (logged at debug).
- A schema-valid message claiming the wrong sender fails the engine
  (`identity-mismatch`).
- Each inbound message that produced replies is remembered; a duplicate of it is
  answered with the very same bytes, flagged `retransmit`. This is how a lost final
  message gets recovered by the peer's timer.
- Request -> reply steps on datagram transports arm a retransmission timer; stale timer
  ids are ignored, and the request is resent bit-identically with exponential back-off
  until `RetryPolicy.max_retries`, then `Fail('timeout')`.
"""
import hashlib
from dataclasses import dataclass, replace, field
from logging import getLogger
from typing import Callable, Dict, List, Optional, Iterable

from xsentinels.default import Default

from awnbench.crypto import (
    Rng, NonceSource, IvSource, SymKey, CryptoError, KeyLengthError, frame_labels
)
from awnbench.kinds import ProtocolKind, Role, Transport
from awnbench.protocols.actions import (
    Action, Send, StartTimer, Established, Fail, SessionKeyMaterial
)
from awnbench.protocols.errors import (
    HandshakeReject, NotEstablished, RoleError, PrerequisiteError, ProtocolError
)
from awnbench.protocols.keystore import Keystore
from awnbench.settings import BenchSettings
from awnbench.wire import WireMessage, WireError, encode, try_decode, schema_for

log = getLogger(__name__)

Handler = Callable[[WireMessage, int], List[Action]]


@dataclass(frozen=True)
class NodeIds:
    initiator: str
    responder: str
    server: Optional[str] = None

    def of(self, role: Role) -> Optional[str]:
        return {
            Role.INITIATOR: self.initiator,
            Role.RESPONDER: self.responder,
            Role.KEY_SERVER: self.server,
        }[role]


@dataclass(frozen=True)
class RetryPolicy:
    """
    Retransmission schedule for request -> reply steps.

    delay = base_us * legs / 2 * min(2 ** attempt, max_backoff), with base_us four times
    the one-way latency estimate and `legs` the number of one-way messages between the
    request and the awaited reply (inclusive).
    """
    one_way_us: int = 2_000
    max_retries: int = Default
    max_backoff: int = Default

    def __post_init__(self):
        settings = BenchSettings.grab()
        if self.max_retries is Default:
            object.__setattr__(self, 'max_retries', settings.max_retries)
        if self.max_backoff is Default:
            object.__setattr__(self, 'max_backoff', settings.max_backoff)

    @property
    def base_us(self) -> int:
        return 4 * self.one_way_us

    def delay(self, legs: int, attempt: int) -> int:
        return self.base_us * legs // 2 * min(2 ** attempt, self.max_backoff)


@dataclass
class _Pending:
    send: Send
    awaited: int
    legs: int
    timer_id: int
    attempt: int = 0


def inputs_digest(labels: Iterable[bytes]) -> str:
    return hashlib.sha256(frame_labels(labels)).hexdigest()


def nonce_minus_one(value: bytes) -> bytes:
    """ 128-bit little-endian decrement with wraparound (Nb - 1). """
    n = (int.from_bytes(value, 'little') - 1) % (1 << (8 * len(value)))
    return n.to_bytes(len(value), 'little')


def long_term_sym(material: Optional[bytes], what: str) -> SymKey:
    if material is None:
        raise PrerequisiteError(f"Missing long-term key: {what}.")
    try:
        return SymKey.from_material(material)
    except KeyLengthError as e:
        raise PrerequisiteError(f"Unusable long-term key, {what} ({e}).") from e


class ProtocolEngine:
    """
    Base-class for the peer engines; see module docs for the shared event handling.

    Subclasses set `kind`/`role` through `__init__`, register per-index handlers in
    `self._handlers`, and implement `_begin` when they can be an initiator.
    """

    def __init__(
            self,
            kind: ProtocolKind,
            role: Role,
            ids: NodeIds,
            keystore: Keystore,
            rng: Rng,
            retry: RetryPolicy = Default,
    ):
        self.kind = kind
        self.role = role
        self.ids = ids
        self.keystore = keystore
        self.retry = RetryPolicy() if retry is Default else retry
        self.self_id = ids.of(role)
        if not self.self_id:
            raise PrerequisiteError(f"No node id given for role ({role.value}).")
        if keystore.owner != self.self_id:
            raise PrerequisiteError(
                f"Keystore of ({keystore.owner}) handed to engine for ({self.self_id})."
            )

        self._rng = rng
        self._nonces = NonceSource(rng.derive('nonce'), self.self_id)
        self._ivs = IvSource(rng.derive('iv'))
        self._handlers: Dict[int, Handler] = {}
        self._expecting: Dict[int, str] = {}
        self._replies: Dict[bytes, List[Send]] = {}
        self._pending: Optional[_Pending] = None
        self._timer_seq = 0
        self._started = False
        self._material: Optional[SessionKeyMaterial] = None
        self.failure: Optional[str] = None

    # ----- public surface -----

    @property
    def peer_id(self) -> str:
        return self.ids.responder if self.role is Role.INITIATOR else self.ids.initiator

    @property
    def established(self) -> bool:
        return self._material is not None

    @property
    def failed(self) -> bool:
        return self.failure is not None

    def start(self, now: int = 0) -> List[Action]:
        if self.role is not Role.INITIATOR:
            raise RoleError(f"Only initiators start a handshake, this is a ({self.role.value}).")
        if self._started:
            raise ProtocolError(f"Engine for ({self.self_id}) already started.")
        self._started = True
        return self._begin(now)

    def on_message(self, sender: str, data: bytes, now: int) -> List[Action]:
        if self.failed:
            return []
        data = bytes(data)

        cached = self._replies.get(data)
        if cached is not None:
            log.debug(f"({self.self_id}) answering duplicate from ({sender}) with cached reply.")
            return [replace(s, retransmit=True) for s in cached]

        msg = try_decode(data)
        if msg is None:
            log.debug(f"({self.self_id}) ignoring undecodable frame from ({sender}).")
            return []
        if msg.kind is not self.kind or msg.receiver != self.self_id:
            log.debug(f"({self.self_id}) ignoring foreign ({msg.kind.value}) frame.")
            return []
        expected_sender = self._expecting.get(msg.index)
        if expected_sender is None:
            log.debug(f"({self.self_id}) ignoring out-of-flow message ({msg.index}).")
            return []
        if msg.sender != expected_sender or sender != msg.sender:
            return self._fail(
                'identity-mismatch',
                f"message ({msg.index}) from ({msg.sender}), expected ({expected_sender})",
            )

        del self._expecting[msg.index]
        if self._pending is not None and self._pending.awaited == msg.index:
            self._pending = None

        try:
            actions = self._handlers[msg.index](msg, now)
        except HandshakeReject as e:
            return self._fail(e.reason, str(e))
        except (CryptoError, WireError) as e:
            return self._fail('authentication', str(e))

        sends = [a for a in actions if isinstance(a, Send)]
        if sends:
            self._replies[data] = sends
        return actions

    def on_timeout(self, timer_id: int, now: int) -> List[Action]:
        pending = self._pending
        if self.failed or pending is None or pending.timer_id != timer_id:
            return []
        if pending.attempt >= self.retry.max_retries:
            return self._fail('timeout', f"no reply ({pending.awaited}) after retries")

        pending.attempt += 1
        pending.timer_id = self._next_timer_id()
        log.debug(
            f"({self.self_id}) retransmitting towards ({pending.send.to}), "
            f"attempt ({pending.attempt})."
        )
        delay = self.retry.delay(pending.legs, pending.attempt)
        return [replace(pending.send, retransmit=True), StartTimer(pending.timer_id, delay)]

    def session_key(self) -> SessionKeyMaterial:
        if self._material is None:
            raise NotEstablished(f"No session key at ({self.self_id}) yet.")
        return self._material

    # ----- helpers for subclasses -----

    def _begin(self, now: int) -> List[Action]:
        raise RoleError(f"({self.kind.value}) has no initiator behaviour here.")

    def _expect(self, index: int):
        """ Start waiting for `index`, from whichever node the schema says sends it. """
        self._expecting[index] = self.ids.of(schema_for(self.kind, index).sender)

    def _message(self, index: int, *payload) -> WireMessage:
        schema = schema_for(self.kind, index)
        return WireMessage(
            self.kind, index, self.self_id, self.ids.of(schema.receiver), tuple(payload)
        )

    def _send(self, msg: WireMessage, awaits: Optional[int] = None) -> List[Action]:
        """
        Emits `msg`; if `awaits` is set, also starts waiting for that index and (on
        datagram transports) arms the retransmission timer.
        """
        info = self.kind.info
        send = Send(to=msg.receiver, data=encode(msg), transport=info.transport, layer=info.layer)
        actions: List[Action] = [send]
        if awaits is None:
            return actions

        self._expect(awaits)
        if info.transport is Transport.DATAGRAM:
            legs = awaits - msg.index + 1
            timer_id = self._next_timer_id()
            self._pending = _Pending(send, awaits, legs, timer_id)
            actions.append(StartTimer(timer_id, self.retry.delay(legs, 0)))
        return actions

    def _establish(
            self, key: SymKey, contributors: Iterable[str], labels: Iterable[bytes], now: int
    ) -> List[Action]:
        if self._material is not None:
            return []
        self._material = SessionKeyMaterial(
            kind=self.kind,
            key=key,
            local=self.self_id,
            peer=self.peer_id,
            contributors=frozenset(contributors),
            inputs_digest=inputs_digest(labels),
            established_at=now,
        )
        log.debug(f"({self.self_id}) established ({self.kind.value}) with ({self.peer_id}).")
        return [Established(self._material)]

    def _fail(self, reason: str, detail: str = '') -> List[Action]:
        log.debug(f"({self.self_id}) failing ({self.kind.value}): {reason} {detail}")
        self.failure = reason
        self._pending = None
        self._expecting.clear()
        return [Fail(reason)]

    def _next_timer_id(self) -> int:
        self._timer_seq += 1
        return self._timer_seq

    def _id_bytes(self, node: str) -> bytes:
        return node.encode('ascii')


class KeyServerEngine(ProtocolEngine):
    """
    Stateless-per-request responder for the TKDF key servers.

    Servers never fail and never time out: a request that does not check out is ignored,
    and the reply to each distinct request is cached so duplicates get the same bytes.
    Requests are served for any sender the server holds keys for, not only the scenario's
    initiator and responder.
    """

    serves: Dict[int, int] = {}
    """ request index -> reply index """

    def __init__(self, kind: ProtocolKind, ids: NodeIds, keystore: Keystore, rng: Rng,
                 retry: RetryPolicy = Default):
        super().__init__(kind, Role.KEY_SERVER, ids, keystore, rng, retry)

    def on_message(self, sender: str, data: bytes, now: int) -> List[Action]:
        data = bytes(data)
        cached = self._replies.get(data)
        if cached is not None:
            return [replace(s, retransmit=True) for s in cached]

        msg = try_decode(data)
        if (
            msg is None
            or msg.kind is not self.kind
            or msg.receiver != self.self_id
            or msg.index not in self.serves
            or sender != msg.sender
        ):
            return []

        try:
            reply = self._serve(msg, now)
        except (HandshakeReject, CryptoError, WireError) as e:
            log.debug(f"Key server ({self.self_id}) ignoring request ({msg.index}): {e}")
            return []

        info = self.kind.info
        send = Send(to=msg.sender, data=encode(reply), transport=info.transport, layer=info.layer)
        self._replies[data] = [send]
        return [send]

    def on_timeout(self, timer_id: int, now: int) -> List[Action]:
        return []

    def _serve(self, msg: WireMessage, now: int) -> WireMessage:
        raise NotImplementedError()

    def _reply(self, request: WireMessage, *payload) -> WireMessage:
        return WireMessage(
            self.kind, self.serves[request.index], self.self_id, request.sender, tuple(payload)
        )
