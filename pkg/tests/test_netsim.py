import math

import numpy as np
import pytest

from awnbench.crypto import CryptoOp
from awnbench.kinds import ProtocolKind, Layer
from awnbench.netsim import (
    BindingError, CryptoCostModel, HorizonExceeded, LinkMode, LinkModel, NodeRole, Simulator,
    Topology, TopologySpec, Unreachable
)
from awnbench.protocols import NodeIds, build_engines, provision
from awnbench.wire import FrameKind

PEERS = [('A', NodeRole.PEER), ('B', NodeRole.PEER)]
IDS = NodeIds('A', 'B', 'S')


def _pair(**link) -> Topology:
    options = dict(latency_base=1000, latency_jitter=0)
    options.update(link)
    return Topology.build(PEERS, [LinkModel(a='A', b='B', **options)])


def _handshake(kind: ProtocolKind, topology: Topology, seed: int = 0, **sim) -> Simulator:
    server = 'S' if kind.uses_server else None
    stores = provision(kind, ['A', 'B'], server)
    sim = Simulator(topology, seed=seed, **sim)
    retry = topology.retry_policy(IDS, kind)
    for node, engine in build_engines(kind, stores, seed, IDS, retry=retry).items():
        sim.attach_engine(node, engine)
    sim.start('A')
    sim.run()
    return sim


def test_topology_routes_by_latency():
    topology = Topology.build(
        [('A', NodeRole.PEER), ('B', NodeRole.PEER), ('R', NodeRole.RELAY)],
        [
            LinkModel(a='A', b='B', latency_base=5000, latency_jitter=0),
            LinkModel(a='A', b='R', latency_base=1000, latency_jitter=0),
            LinkModel(a='R', b='B', latency_base=1000, latency_jitter=0),
        ],
    )
    assert [(a, b) for a, b, _ in topology.path('A', 'B')] == [('A', 'R'), ('R', 'B')]
    assert topology.path_latency('A', 'B') == 2000
    assert topology.nodes_with(NodeRole.RELAY) == ['R']


def test_access_point_link_is_two_hops():
    topology = _pair(mode=LinkMode.ACCESS_POINT)
    assert len(topology.path('A', 'B')) == 2
    assert topology.path_latency('A', 'B') == 2000
    # The internal AP node is not a scenario node.
    assert 'A' in topology
    assert not any(n.startswith('ap:') and n in topology for n in topology.graph.nodes)


def test_unreachable():
    topology = Topology.build(PEERS + [('C', NodeRole.PEER)], [LinkModel(a='A', b='B')])
    assert not topology.reachable('A', 'C')
    with pytest.raises(Unreachable):
        topology.path('A', 'C')


def test_link_problems():
    link = LinkModel(a='A', b='B', loss_prob=1.3)
    assert link.problems('links[0]') == [
        "links[0].loss_prob: (1.3) is not a probability in [0, 1]."
    ]
    assert LinkModel(a='A', b='A').problems()
    assert LinkModel(a='A', b='B', latency_base=100, latency_jitter=100).problems()
    assert LinkModel(a='A', b='B').problems() == []


def test_topology_spec_problems():
    spec = TopologySpec({
        'nodes': [{'id': 'A'}, {'id': 'A'}],
        'links': [{'a': 'A', 'b': 'Z'}],
    })
    problems = spec.problems()
    assert "topology.nodes[1].id: duplicate node (A)." in problems
    assert "topology.links[0].b: unknown node (Z)." in problems


def test_link_layer_loss_override():
    link = LinkModel(a='A', b='B', loss_prob=0.5, network_loss_prob=0.0)
    assert link.loss_for(Layer.LINK) == 0.5
    assert link.loss_for(Layer.NETWORK) == 0.0
    assert LinkModel(a='A', b='B', loss_prob=0.2).loss_for(Layer.NETWORK) == 0.2


def test_psk_master_takes_four_one_way_latencies():
    sim = _handshake(ProtocolKind.PSK_MASTER, _pair())
    assert sim.established['A'].time == 4000
    assert sim.established['B'].time == 3000
    assert sim.messages_sent == 4
    assert sim.retransmissions == 0
    assert len(sim.transcript) == 4


def test_stream_is_ready_after_three_legs():
    sim = Simulator(_pair())
    stream = sim.open_stream('A', 'B')
    sim.run()
    assert stream.ready_at == 3000
    control = [f for f in sim.transcript if f.kind is FrameKind.CONTROL]
    assert [f.data for f in control] == [b'SYN', b'SYN-ACK', b'ACK']


def test_stream_delivers_in_send_order_under_loss():
    sim = Simulator(_pair(loss_prob=0.5, retry_limit=1), seed=2)
    payloads = [i.to_bytes(2, 'big') for i in range(100)]
    for data in payloads:
        sim.stream_send('A', 'B', data)
    sim.run()

    assert [d.data for d in sim.deliveries] == payloads
    assert all(d.kind is FrameKind.STREAM for d in sim.deliveries)
    stream = [f for f in sim.transcript if f.kind is FrameKind.STREAM]
    # Half the frames are lost, so plenty of segments went on air more than once.
    assert len(stream) > len(payloads)
    assert any(not f.delivered for f in stream)


def test_sts_runs_over_a_stream():
    sim = _handshake(ProtocolKind.ON_DEMAND_STS, _pair())
    # Setup (3 legs) then four in-order messages.
    assert sim.established['A'].time == 7000
    assert sim.established['B'].time == 6000
    assert len(sim.transcript.messages()) == 4


def test_loss_rate_is_binomial():
    p, n = 0.3, 10_000
    sim = Simulator(_pair(loss_prob=p), seed=11)
    for _ in range(n):
        sim.send_datagram('A', 'B', b'x')
    sim.run()
    delivered = len(sim.deliveries)
    mean, sigma = n * (1 - p), math.sqrt(n * p * (1 - p))
    assert abs(delivered - mean) <= 3 * sigma
    assert len(sim.transcript) == n


def test_transmissions_per_datagram_are_geometric():
    p, retry_limit, n = 0.5, 7, 10_000
    sim = Simulator(_pair(loss_prob=p, retry_limit=retry_limit), seed=5)
    for _ in range(n):
        sim.send_datagram('A', 'B', b'x')
    sim.run()
    per_datagram = len(sim.transcript) / n

    assert abs(per_datagram - 1 / (1 - p)) <= 0.25 * 1 / (1 - p)
    # Monte Carlo: attempts until the first success, capped by the link's retries.
    attempts = np.minimum(np.random.default_rng(5).geometric(1 - p, n), retry_limit + 1)
    assert abs(per_datagram - attempts.mean()) < 0.1


def test_tkdf_sym_through_a_relay():
    topology = Topology.build(
        PEERS + [('R', NodeRole.RELAY), ('S', NodeRole.KEY_SERVER)],
        [
            LinkModel(a='A', b='B', latency_base=1000, latency_jitter=0),
            LinkModel(a='A', b='R', latency_base=1000, latency_jitter=0),
            LinkModel(a='B', b='R', latency_base=1000, latency_jitter=0),
            LinkModel(a='R', b='S', latency_base=1000, latency_jitter=0),
        ],
    )
    assert topology.retry_policy(IDS, ProtocolKind.TKDF_SYM).one_way_us == 2000

    sim = _handshake(ProtocolKind.TKDF_SYM, topology)
    assert 'A' in sim.established and 'B' in sim.established
    assert sim.failures == {}
    assert sim.messages_sent == 7
    assert sim.retransmissions == 0
    # The two key server messages take two hops each; the other five go direct.
    assert len(sim.transcript) == 9
    hops = [f.hop for f in sim.transcript]
    assert hops.count(('A', 'R')) == 1
    assert hops.count(('R', 'S')) == 1
    assert hops.count(('S', 'R')) == 1
    assert hops.count(('R', 'A')) == 1
    assert sim.established['A'].material.key == sim.established['B'].material.key


def test_link_retries_put_each_attempt_on_air():
    sim = Simulator(_pair(loss_prob=1.0, retry_limit=3))
    sim.send_datagram('A', 'B', b'x')
    sim.run()
    assert len(sim.transcript) == 4
    assert not any(f.delivered for f in sim.transcript)
    assert sim.deliveries == []


def test_handshake_survives_loss_with_retransmissions():
    sim = _handshake(ProtocolKind.PSK_MASTER, _pair(loss_prob=0.5, retry_limit=7), seed=4)
    assert sim.established['A'].time >= 4000
    assert sim.established['B'].time >= 3000
    assert len(sim.transcript) >= 4


def test_same_seed_same_transcript():
    def lossy():
        return _pair(latency_jitter=300, loss_prob=0.2, retry_limit=2)

    one = _handshake(ProtocolKind.PSK_MASTER, lossy(), seed=3)
    two = _handshake(ProtocolKind.PSK_MASTER, lossy(), seed=3)
    assert one.transcript.digest() == two.transcript.digest()


def test_crypto_cost_charges_virtual_time():
    costly = CryptoCostModel(mac=100, kdf=100, offload_kinds=[])
    sim = _handshake(ProtocolKind.PSK_MASTER, _pair(), costs=costly)
    assert sim.established['A'].time > 4000

    # PSK kinds are offloaded to the card by default.
    offloaded = CryptoCostModel(mac=100, kdf=100)
    sim = _handshake(ProtocolKind.PSK_MASTER, _pair(), costs=offloaded)
    assert sim.established['A'].time == 4000


def test_cost_model_sums_counts():
    costs = CryptoCostModel(sign=4200, verify=350)
    assert costs.cost_us({CryptoOp.SIGN: 1, CryptoOp.VERIFY: 2}) == 4900
    assert CryptoCostModel(aead=-1).problems() == ["crypto_costs.aead: (-1) must be >= 0."]


def test_horizon():
    sim = Simulator(_pair(), horizon_us=500)
    sim.send_datagram('A', 'B', b'x')
    with pytest.raises(HorizonExceeded):
        sim.run()


def test_binding_checks():
    stores = provision(ProtocolKind.TKDF_SYM, ['A', 'B'], 'S')
    engines = build_engines(ProtocolKind.TKDF_SYM, stores, 0, NodeIds('A', 'B', 'S'))
    sim = Simulator(_pair())
    with pytest.raises(BindingError):
        sim.attach_engine('S', engines['S'])
    with pytest.raises(BindingError):
        sim.attach_engine('B', engines['A'])
    sim.attach_engine('A', engines['A'])
    with pytest.raises(BindingError):
        sim.attach_engine('A', engines['A'])
