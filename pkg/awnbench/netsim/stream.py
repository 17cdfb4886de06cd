"""
Connection-oriented transport for the on-demand (SSH/SSL analog) handshakes.

A stream is opened with a three-leg setup (SYN, SYN-ACK, ACK) and is ready when the ACK
reaches the far end, i.e. 1.5 round trips after opening on a loss-free path. Every leg
and every data segment is retransmitted after a timeout with the same exponential
back-off the handshake engines use; the receiver hands segments up strictly in order.

The sender learns about a lost frame when the simulator drops it, standing in for the
missing acknowledgement; the retransmission still waits out the full timeout from the
original send.
"""
from logging import getLogger
from typing import Callable, Dict, List, Tuple, Type, TYPE_CHECKING

from awnbench.kinds import Layer
from awnbench.netsim.errors import SetupTimeout, DeliveryTimeout, StreamError
from awnbench.protocols.engine import RetryPolicy
from awnbench.wire import FrameKind

if TYPE_CHECKING:
    from awnbench.netsim.simulator import Simulator

log = getLogger(__name__)

SYN = b'SYN'
SYN_ACK = b'SYN-ACK'
ACK = b'ACK'

Callback = Callable[[], None]


class Stream:
    def __init__(self, sim: 'Simulator', opener: str, listener: str):
        self.sim = sim
        self.opener = opener
        self.listener = listener
        self.opened_at = sim.now
        self.ready_at = None
        topology = sim.topology
        self.retry = RetryPolicy(
            one_way_us=topology.path_latency(opener, listener)
            + topology.path_jitter(opener, listener)
        )
        self._waiting: List[Tuple[str, str, bytes, Callback]] = []
        self._next_seq: Dict[Tuple[str, str], int] = {}
        self._expected: Dict[Tuple[str, str], int] = {}
        self._buffer: Dict[Tuple[str, str], Dict[int, Tuple[bytes, Callback]]] = {}

    @property
    def ready(self) -> bool:
        return self.ready_at is not None

    def open(self):
        log.debug(f"Opening stream ({self.opener} -> {self.listener}) at ({self.sim.now}).")
        self._leg(self.opener, self.listener, SYN, self._on_syn, SetupTimeout)

    def _on_syn(self):
        self._leg(self.listener, self.opener, SYN_ACK, self._on_syn_ack, SetupTimeout)

    def _on_syn_ack(self):
        self._leg(self.opener, self.listener, ACK, self._on_ack, SetupTimeout)

    def _on_ack(self):
        self.ready_at = self.sim.now
        waiting, self._waiting = self._waiting, []
        for src, dst, data, on_delivered in waiting:
            self._segment(src, dst, data, on_delivered)

    def send(self, src: str, dst: str, data: bytes, on_delivered: Callback):
        if {src, dst} != {self.opener, self.listener}:
            raise StreamError(f"Stream ({self.opener}, {self.listener}) cannot carry ({src}).")
        if not self.ready:
            self._waiting.append((src, dst, data, on_delivered))
            return
        self._segment(src, dst, data, on_delivered)

    def _segment(self, src: str, dst: str, data: bytes, on_delivered: Callback):
        direction = (src, dst)
        seq = self._next_seq.get(direction, 0)
        self._next_seq[direction] = seq + 1
        self._leg(
            src,
            dst,
            data,
            lambda: self._arrive(direction, seq, data, on_delivered),
            DeliveryTimeout,
            kind=FrameKind.STREAM,
        )

    def _arrive(self, direction, seq: int, data: bytes, on_delivered: Callback):
        buffer = self._buffer.setdefault(direction, {})
        buffer[seq] = (data, on_delivered)
        expected = self._expected.get(direction, 0)
        while expected in buffer:
            _, callback = buffer.pop(expected)
            expected += 1
            callback()
        self._expected[direction] = expected

    def _leg(
            self,
            src: str,
            dst: str,
            data: bytes,
            on_delivered: Callback,
            error: Type[StreamError],
            kind: FrameKind = FrameKind.CONTROL,
            attempt: int = 0,
    ):
        sent_at = self.sim.now

        def dropped():
            if attempt >= self.retry.max_retries:
                raise error(
                    f"Stream ({src} -> {dst}) gave up after ({attempt + 1}) transmissions."
                )
            wait = max(0, sent_at + self.retry.delay(2, attempt) - self.sim.now)
            self.sim.schedule(
                wait, self._leg, src, dst, data, on_delivered, error, kind, attempt + 1
            )

        self.sim.send_datagram(
            src, dst, data, Layer.NETWORK, kind, on_delivered=on_delivered, on_dropped=dropped
        )
