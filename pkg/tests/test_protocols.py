from dataclasses import replace

import pytest

from awnbench.kinds import MAPPED_KINDS, ProtocolKind, Role
from awnbench.protocols import (
    Established, Fail, NodeIds, NotEstablished, PrerequisiteError, ProtocolError, RetryPolicy,
    RoleError, Send, StartTimer, build_engines, clone_stores, handshake, new_engine,
    nonce_minus_one, provision
)
from awnbench.settings import BenchSettings
from awnbench.wire import decode

IDS = NodeIds('A', 'B', 'S')

CONTRIBUTORS = {
    ProtocolKind.PSK_DIRECT: frozenset(),
    ProtocolKind.PSK_NET_LAYER: frozenset(),
    ProtocolKind.PSK_MASTER: frozenset('AB'),
    ProtocolKind.TKDF_SYM: frozenset('S'),
    ProtocolKind.TKDF_ASYM: frozenset('AB'),
    ProtocolKind.ON_DEMAND_STS: frozenset('AB'),
}


@pytest.mark.parametrize('kind', list(ProtocolKind))
def test_handshake_agrees_on_a_key(kind):
    engines, result = handshake(kind, seed=3)
    a, b = engines['A'].session_key(), engines['B'].session_key()
    assert a.key == b.key
    assert (a.peer, b.peer) == ('B', 'A')
    assert a.inputs_digest == b.inputs_digest
    assert len(result.frames) == kind.info.flow_length
    assert result.established('A') and result.established('B')
    assert not result.failures('A') and not result.failures('B')


@pytest.mark.parametrize('kind', MAPPED_KINDS)
def test_key_contributors(kind):
    engines, _ = handshake(kind, seed=1)
    assert engines['A'].session_key().contributors == CONTRIBUTORS[kind]


def test_handshake_is_deterministic_per_seed():
    _, one = handshake(ProtocolKind.ON_DEMAND_STS, seed=9)
    _, two = handshake(ProtocolKind.ON_DEMAND_STS, seed=9)
    _, three = handshake(ProtocolKind.ON_DEMAND_STS, seed=10)
    assert one.frames == two.frames
    assert one.frames != three.frames


def test_fresh_keys_per_session_except_static_psk():
    for kind in (ProtocolKind.PSK_MASTER, ProtocolKind.TKDF_ASYM):
        first, _ = handshake(kind, seed=1)
        second, _ = handshake(kind, seed=2)
        assert first['A'].session_key().key != second['A'].session_key().key

    first, _ = handshake(ProtocolKind.PSK_DIRECT, seed=1)
    second, _ = handshake(ProtocolKind.PSK_DIRECT, seed=2)
    assert first['A'].session_key().key == second['A'].session_key().key


def test_tkdf_sym_ratchets_server_keys():
    stores = provision(ProtocolKind.TKDF_SYM, ['A', 'B'], 'S', 0)
    before = clone_stores(stores)
    handshake(ProtocolKind.TKDF_SYM, seed=0, stores=stores)
    assert stores['A'].shared['S'] != before['A'].shared['S']
    assert stores['A'].shared['S'] == stores['S'].shared['A']
    assert stores['B'].shared['S'] == stores['S'].shared['B']


def test_signing_crypto_counts_on_sts():
    _, result = handshake(ProtocolKind.ON_DEMAND_STS, seed=0)
    assert sum(result.crypto['A'].values()) > 0
    assert sum(result.crypto['B'].values()) > 0


def test_missing_material_is_a_prerequisite_error():
    stores = provision(ProtocolKind.PSK_MASTER, ['A', 'B'])
    stores['A'].group_key = None
    with pytest.raises(PrerequisiteError):
        new_engine(ProtocolKind.PSK_MASTER, Role.INITIATOR, IDS, stores['A'], 0)

    stores = provision(ProtocolKind.PSK_DIRECT, ['A', 'B'])
    stores['A'].group_key = bytes(5)
    with pytest.raises(PrerequisiteError):
        new_engine(ProtocolKind.PSK_DIRECT, Role.INITIATOR, IDS, stores['A'], 0)

    with pytest.raises(PrerequisiteError):
        provision(ProtocolKind.TKDF_SYM, ['A', 'B'])


def test_roles():
    stores = provision(ProtocolKind.PSK_DIRECT, ['A', 'B'])
    with pytest.raises(RoleError):
        new_engine('WEP', Role.KEY_SERVER, IDS, stores['A'], 0)

    engines = build_engines(ProtocolKind.PSK_DIRECT, stores, 0)
    with pytest.raises(RoleError):
        engines['B'].start(0)
    with pytest.raises(NotEstablished):
        engines['A'].session_key()
    engines['A'].start(0)
    with pytest.raises(ProtocolError):
        engines['A'].start(0)


def test_retransmit_then_timeout():
    stores = provision(ProtocolKind.PSK_MASTER, ['A', 'B'])
    retry = RetryPolicy(one_way_us=1000, max_retries=2, max_backoff=64)
    engine = new_engine(ProtocolKind.PSK_MASTER, Role.INITIATOR, IDS, stores['A'], 0, retry)

    send, timer = engine.start(0)
    assert isinstance(send, Send) and not send.retransmit
    # base 4000, two legs until the reply.
    assert timer == StartTimer(1, 4000)

    again, timer = engine.on_timeout(1, 4000)
    assert again == replace(send, retransmit=True)
    assert timer == StartTimer(2, 8000)
    assert engine.on_timeout(1, 5000) == []

    _, timer = engine.on_timeout(2, 12000)
    assert timer.delay == 16000
    assert engine.on_timeout(timer.timer_id, 28000) == [Fail('timeout')]
    assert engine.failure == 'timeout'


def test_retry_policy_defaults_from_settings():
    with BenchSettings(max_retries=3):
        assert RetryPolicy().max_retries == 3
    assert RetryPolicy().max_retries == BenchSettings.grab().max_retries


def test_duplicate_request_gets_identical_reply():
    stores = provision(ProtocolKind.PSK_MASTER, ['A', 'B'])
    engines = build_engines(ProtocolKind.PSK_MASTER, stores, 0)
    hello = engines['A'].start(0)[0]

    reply = [a for a in engines['B'].on_message('A', hello.data, 10) if isinstance(a, Send)]
    duplicate = engines['B'].on_message('A', hello.data, 20)
    assert [s.data for s in duplicate] == [s.data for s in reply]
    assert all(s.retransmit for s in duplicate)


def test_wrong_sender_fails_and_junk_is_ignored():
    stores = provision(ProtocolKind.PSK_MASTER, ['A', 'B', 'C'])
    engines = build_engines(ProtocolKind.PSK_MASTER, stores, 0)
    hello = engines['A'].start(0)[0]

    assert engines['B'].on_message('A', b'not a message', 5) == []
    assert engines['B'].on_message('C', hello.data, 5) == [Fail('identity-mismatch')]
    assert engines['B'].failed
    assert engines['B'].on_message('A', hello.data, 6) == []


def test_established_action_carries_time():
    stores = provision(ProtocolKind.PSK_DIRECT, ['A', 'B'])
    engines = build_engines(ProtocolKind.PSK_DIRECT, stores, 0)
    a, b = engines['A'], engines['B']
    msg = a.start(0)[0]
    msg = b.on_message('A', msg.data, 100)[0]
    msg = a.on_message('B', msg.data, 200)[0]
    actions = b.on_message('A', msg.data, 300)
    assert decode(actions[0].data).index == 4
    established = [x for x in actions if isinstance(x, Established)]
    assert established[0].material.established_at == 300


def test_nonce_minus_one_wraps():
    assert nonce_minus_one(bytes([5]) + bytes(15)) == bytes([4]) + bytes(15)
    assert nonce_minus_one(bytes(16)) == b'\xff' * 16


def test_handshake_passes_the_retry_policy_through():
    retry = RetryPolicy(one_way_us=500)
    engines, result = handshake(ProtocolKind.PSK_MASTER, retry=retry)
    assert {e.retry for e in engines.values()} == {retry}
    timers = [a for a in result.actions['A'] if isinstance(a, StartTimer)]
    # base 2000, two legs until the reply.
    assert timers[0].delay == 2000

    engines, _ = handshake(ProtocolKind.PSK_MASTER)
    assert engines['A'].retry.one_way_us == RetryPolicy().one_way_us
