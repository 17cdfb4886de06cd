"""
Deterministic discrete-event simulator of the test-bed.

Virtual time is integer microseconds on a `simpy.Environment`; events scheduled for the
same instant run in insertion order. All randomness (loss, jitter) comes from one `Rng`,
drawn in event order, so a (topology, seed) pair always yields the same transcript.

Engines are bound to nodes with `attach_engine`. Their actions are interpreted here:

- `Send` becomes a datagram along the routed path (each hop samples its own latency and
  loss, retrying up to the link's `retry_limit`), or a message on the pair's stream.
- `StartTimer` becomes a timer event calling `on_timeout`.
- Crypto work done while handling an event is metered and charged as virtual compute
  time: the node is busy for that long and its outputs leave when it is done.
"""
from collections import Counter
from dataclasses import dataclass
from logging import getLogger
from typing import Callable, Dict, List, Optional, Tuple, Union

import simpy
from xsentinels.default import Default

from awnbench.crypto import CryptoMeter, Rng
from awnbench.kinds import Layer, Role
from awnbench.netsim.errors import BindingError, HorizonExceeded
from awnbench.netsim.models import CryptoCostModel, LinkModel, NodeRole
from awnbench.netsim.stream import Stream
from awnbench.netsim.topology import Topology
from awnbench.protocols import (
    ProtocolEngine, Send, StartTimer, Established, Fail, SessionKeyMaterial, Transport
)
from awnbench.settings import BenchSettings
from awnbench.wire import Frame, FrameKind, Transcript

log = getLogger(__name__)

Interceptor = Callable[['Simulator', str, Send], List[Tuple[str, Send]]]
"""
Called with (simulator, sending node, send) for every engine `Send`; returns the frames
to actually transmit as (claimed sender, send). Return `[(node, send)]` to pass through,
`[]` to drop.
"""


@dataclass(frozen=True)
class Delivery:
    time: int
    src: str
    dst: str
    data: bytes
    kind: FrameKind


@dataclass(frozen=True)
class EstablishedAt:
    time: int
    material: SessionKeyMaterial


class Simulator:
    def __init__(
            self,
            topology: Topology,
            seed: Union[int, Rng] = 0,
            costs: Optional[CryptoCostModel] = None,
            horizon_us: int = Default,
            measure_wallclock: bool = Default,
    ):
        settings = BenchSettings.grab()
        self.topology = topology
        self.rng = seed if isinstance(seed, Rng) else Rng(seed).derive('netsim')
        self.costs = costs if costs is not None else CryptoCostModel()
        self.horizon_us = settings.default_horizon_us if horizon_us is Default else horizon_us
        if measure_wallclock is Default:
            measure_wallclock = settings.measure_wallclock or bool(self.costs.measure_wallclock)
        self.measure_wallclock = measure_wallclock

        self.env = simpy.Environment()
        self.transcript = Transcript()
        self.deliveries: List[Delivery] = []
        self.engines: Dict[str, ProtocolEngine] = {}
        self.established: Dict[str, EstablishedAt] = {}
        self.failures: Dict[str, Tuple[int, str]] = {}
        self.interceptor: Optional[Interceptor] = None

        self.messages_sent = 0
        self.retransmissions = 0
        self.crypto_counts = Counter()
        self.wallclock_ns = 0

        self._streams: Dict[frozenset, Stream] = {}
        self._busy_until: Dict[str, int] = {}
        self._strong = 0
        self._last_time = 0

    @property
    def now(self) -> int:
        return int(self.env.now)

    @property
    def bytes_on_air(self) -> int:
        return sum(len(f.data) for f in self.transcript)

    # ----- scheduling -----

    def schedule(self, delay: int, fn: Callable, *args, strong: bool = True):
        """
        Runs `fn(*args)` `delay` microseconds from now. Timers are scheduled weak: once
        every bound peer engine is done and only weak events remain, the run is over.
        """
        delay = int(delay)
        if delay < 0:
            raise ValueError(f"Cannot schedule in the past ({delay}).")
        if strong:
            self._strong += 1
        event = self.env.timeout(delay)
        event.callbacks.append(lambda _: self._fire(fn, args, strong))

    def _fire(self, fn: Callable, args, strong: bool):
        if strong:
            self._strong -= 1
        self._last_time = self.now
        fn(*args)

    def _settled(self) -> bool:
        return all(
            node in self.established or node in self.failures
            for node, engine in self.engines.items()
            if engine.role is not Role.KEY_SERVER
        )

    def run(self) -> int:
        """
        Processes events in time order until nothing is left to do; returns the time of
        the last processed event.

        Raises:
            HorizonExceeded: events still pending beyond `horizon_us`.
        """
        env = self.env
        while True:
            upcoming = env.peek()
            if upcoming == float('inf'):
                break
            if self._strong == 0 and self._settled():
                break
            if upcoming > self.horizon_us:
                raise HorizonExceeded(
                    f"Events still queued at ({upcoming}) past the horizon ({self.horizon_us})."
                )
            env.step()
        return self._last_time

    # ----- datagrams -----

    def _latency(self, link: LinkModel) -> int:
        jitter = link.latency_jitter or 0
        if not jitter:
            return link.latency_base
        return link.latency_base + self.rng.randint(-jitter, jitter)

    def send_datagram(
            self,
            src: str,
            dst: str,
            data: bytes,
            layer: Layer = Layer.NETWORK,
            kind: FrameKind = FrameKind.DATAGRAM,
            on_delivered: Optional[Callable[[], None]] = None,
            on_dropped: Optional[Callable[[], None]] = None,
    ):
        """
        Transmits along the routed path from `src` to `dst`. Each hop's attempt is an on-air
        frame in the transcript; a lost frame is retried by the link up to `retry_limit`
        times, after which the datagram vanishes (and `on_dropped` runs).

        Without `on_delivered`, the datagram is recorded in `deliveries` and handed to the
        engine bound at `dst`, if any.

        Raises:
            Unreachable: no path between the nodes.
        """
        data = bytes(data)
        hops = self.topology.path(src, dst)
        if on_delivered is None:
            def on_delivered():
                self._deliver(src, dst, data, kind)
        if not hops:
            self.schedule(0, on_delivered)
            return
        self._attempt(hops, 0, 0, data, layer, kind, on_delivered, on_dropped)

    def _attempt(self, hops, i, attempt, data, layer, kind, on_delivered, on_dropped):
        a, b, link = hops[i]
        latency = self._latency(link)
        lost = self.rng.random() < link.loss_for(layer)
        self.transcript.append(Frame(self.now, data, not lost, (a, b), kind))

        if not lost:
            if i + 1 == len(hops):
                self.schedule(latency, on_delivered)
            else:
                self.schedule(
                    latency, self._attempt, hops, i + 1, 0, data, layer, kind,
                    on_delivered, on_dropped,
                )
        elif attempt < (link.retry_limit or 0):
            self.schedule(
                latency, self._attempt, hops, i, attempt + 1, data, layer, kind,
                on_delivered, on_dropped,
            )
        elif on_dropped is not None:
            self.schedule(latency, on_dropped)

    def _deliver(self, src: str, dst: str, data: bytes, kind: FrameKind):
        self.deliveries.append(Delivery(self.now, src, dst, data, kind))
        engine = self.engines.get(dst)
        if engine is not None:
            self._process(dst, lambda now: engine.on_message(src, data, now))

    # ----- streams -----

    def open_stream(self, src: str, dst: str) -> Stream:
        """ The stream between the two nodes, opening it (from `src`) if needed. """
        key = frozenset((src, dst))
        stream = self._streams.get(key)
        if stream is None:
            self.topology.path(src, dst)
            stream = Stream(self, src, dst)
            self._streams[key] = stream
            stream.open()
        return stream

    def stream_send(
            self,
            src: str,
            dst: str,
            data: bytes,
            on_delivered: Optional[Callable[[], None]] = None,
    ):
        data = bytes(data)
        if on_delivered is None:
            def on_delivered():
                self._deliver(src, dst, data, FrameKind.STREAM)
        self.open_stream(src, dst).send(src, dst, data, on_delivered)

    # ----- engines -----

    def attach_engine(self, node: str, engine: ProtocolEngine):
        if node not in self.topology:
            raise BindingError(f"No node ({node}) in the topology.")
        if engine.self_id != node:
            raise BindingError(f"Engine for ({engine.self_id}) bound to node ({node}).")
        role = self.topology.role(node)
        wanted = NodeRole.KEY_SERVER if engine.role is Role.KEY_SERVER else NodeRole.PEER
        if role is not wanted:
            raise BindingError(
                f"Node ({node}) is a ({role.value}), cannot host a ({engine.role.value})."
            )
        if node in self.engines:
            raise BindingError(f"Node ({node}) already has an engine.")
        self.engines[node] = engine

    def start(self, node: str, at: int = 0):
        engine = self.engines[node]
        self.schedule(at, self._process, node, lambda now: engine.start(now))

    def inject(self, sender: str, send: Send, delay: int = 0):
        """ Puts an attacker-made frame on the air, claiming to come from `sender`. """
        self.schedule(delay, self._transmit, sender, send)

    def _timeout(self, node: str, timer_id: int):
        engine = self.engines[node]
        self._process(node, lambda now: engine.on_timeout(timer_id, now), strong=False)

    def _process(self, node: str, call: Callable[[int], list], strong: bool = True):
        now = self.now
        busy = self._busy_until.get(node, 0)
        if busy > now:
            self.schedule(busy - now, self._process, node, call, strong, strong=strong)
            return

        engine = self.engines[node]
        with CryptoMeter(measure_wallclock=self.measure_wallclock) as meter:
            actions = call(now)
        cost = self.costs.cost_us(meter.counts, engine.kind)
        self.crypto_counts.update(meter.counts)
        self.wallclock_ns += meter.wallclock_ns
        self._busy_until[node] = now + cost

        if cost and actions:
            self.schedule(cost, self._apply, node, actions)
        else:
            self._apply(node, actions)

    def _apply(self, node: str, actions: list):
        now = self.now
        for action in actions:
            if isinstance(action, Send):
                self.messages_sent += 1
                if action.retransmit:
                    self.retransmissions += 1
                if self.interceptor is not None:
                    frames = self.interceptor(self, node, action)
                else:
                    frames = [(node, action)]
                for sender, send in frames:
                    self._transmit(sender, send)
            elif isinstance(action, StartTimer):
                self.schedule(action.delay, self._timeout, node, action.timer_id, strong=False)
            elif isinstance(action, Established):
                self.established.setdefault(node, EstablishedAt(now, action.material))
            elif isinstance(action, Fail):
                log.debug(f"Engine at ({node}) failed at ({now}): {action.reason}")
                self.failures.setdefault(node, (now, action.reason))

    def _transmit(self, sender: str, send: Send):
        if send.transport is Transport.STREAM:
            self.stream_send(sender, send.to, send.data)
        else:
            self.send_datagram(sender, send.to, send.data, layer=send.layer)
