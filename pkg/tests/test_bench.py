import json
import math

import pytest

from awnbench.kinds import ProtocolKind
from awnbench.bench import (
    BenchError, COLUMNS, IncompleteSummary, InsecureProtocolError, ParseError, ValidationError,
    calibrate, check_ordering, emit_report, load_config, measured_means, parse_config,
    preset_names, preset_text, reference_means, run_benchmark, run_trial, summarize
)
from awnbench.bench.cli import main
from awnbench.bench.runner import MeasurementRecord


def _scenario(**overrides) -> dict:
    doc = {
        'schema_version': 1,
        'name': 'pair',
        'protocols': ['PskMaster'],
        'trials': 2,
        'topology': {
            'nodes': [{'id': 'A', 'role': 'peer'}, {'id': 'B', 'role': 'peer'}],
            'links': [{'a': 'A', 'b': 'B', 'latency_base': 1000, 'latency_jitter': 0}],
        },
    }
    doc.update(overrides)
    return doc


def _config(**overrides):
    return parse_config(json.dumps(_scenario(**overrides)))


def test_presets():
    names = preset_names()
    assert 'table2-default' in names
    assert 'loss-50' in names
    assert json.loads(preset_text('loss-50'))['name'] == 'loss-50'
    assert load_config('adhoc-wpa-loss70').topology.links[0].loss_prob == 0.7
    assert load_config('ap-wpa-loss20').topology.links[0].mode.value == 'ap'

    with pytest.raises(BenchError, match='No bundled preset'):
        load_config('no-such-preset')


def test_every_preset_validates_and_completes():
    for name in preset_names():
        config = load_config(name)
        assert config.kinds, name
        records = run_benchmark(config, trials=3)
        assert all(r.completed for r in records), name


def test_load_config_from_file(tmp_path):
    path = tmp_path / 'scenario.json'
    path.write_text(json.dumps(_scenario(trials=7)))
    config = load_config(path)
    assert config.trials == 7
    assert config.kinds == [ProtocolKind.PSK_MASTER]


def test_parse_error_points_at_the_problem():
    with pytest.raises(ParseError) as info:
        parse_config('{\n  "trials": ,\n}')
    assert info.value.line == 2

    with pytest.raises(ParseError):
        parse_config('[1, 2]')


def test_validation_lists_every_problem():
    doc = _scenario(trials=0, protocols=['PskMaster', 'Nope'], bogus=1)
    doc['topology']['links'][0]['loss_prob'] = 1.3
    with pytest.raises(ValidationError) as info:
        parse_config(json.dumps(doc), 'broken.json')

    problems = info.value.problems
    assert info.value.source == 'broken.json'
    assert "bogus: unknown field." in problems
    assert "trials: (0) must be >= 1." in problems
    assert "protocols[1]: unknown protocol (Nope)." in problems
    assert "topology.links[0].loss_prob: (1.3) is not a probability in [0, 1]." in problems


def test_server_kinds_need_a_key_server():
    with pytest.raises(ValidationError) as info:
        _config(protocols=['TkdfSym'])
    assert any(p.startswith('key_server:') for p in info.value.problems)


def test_run_trial_times_the_handshake():
    config = _config()
    record, sim = run_trial(config, ProtocolKind.PSK_MASTER, 0, seed=0)
    assert record.completed
    assert record.establishment_virtual_us == 4000
    assert record.messages_sent == 4
    assert record.retransmissions == 0
    assert record.bytes_on_air == sim.bytes_on_air > 0


def test_unreachable_peer_is_an_incomplete_record():
    topology = {
        'nodes': [
            {'id': 'A', 'role': 'peer'}, {'id': 'B', 'role': 'peer'}, {'id': 'C', 'role': 'peer'},
        ],
        'links': [{'a': 'A', 'b': 'C'}],
    }
    record, _ = run_trial(_config(topology=topology), ProtocolKind.PSK_DIRECT, 0, seed=0)
    assert not record.completed
    assert record.establishment_virtual_us is None


def test_records_are_ordered_and_reproducible():
    config = _config(protocols=['PskDirect', 'PskMaster'], trials=3)
    records = run_benchmark(config, seed=5)
    assert [(r.protocol, r.trial) for r in records] == [
        ('PskDirect', 0), ('PskDirect', 1), ('PskDirect', 2),
        ('PskMaster', 0), ('PskMaster', 1), ('PskMaster', 2),
    ]

    lossy = load_config('loss-20')
    one = emit_report(run_benchmark(lossy, seed=3, trials=2), 'csv')
    two = emit_report(run_benchmark(lossy, seed=3, trials=2), 'csv')
    assert one == two


def test_negative_controls_need_permission():
    config = _config(protocols=['TkdfAsymUnfixed'])
    with pytest.raises(InsecureProtocolError):
        run_benchmark(config)


def test_csv_report():
    records = [
        MeasurementRecord(protocol='PskMaster', trial=1, establishment_virtual_us=4000,
                          messages_sent=4, bytes_on_air=300, completed=True),
        MeasurementRecord(protocol='PskMaster', trial=0, messages_sent=1),
    ]
    lines = emit_report(records, 'csv').decode('utf-8').splitlines()
    assert lines[0] == ','.join(COLUMNS)
    assert lines[1] == 'PskMaster,0,,,1,0,0,false'
    assert lines[2] == 'PskMaster,1,4000,,4,0,300,true'

    rows = [json.loads(line) for line in emit_report(records, 'json').splitlines()]
    assert [r['trial'] for r in rows] == [0, 1]

    with pytest.raises(BenchError):
        emit_report(records, 'xml')
    with pytest.raises(BenchError):
        emit_report([], 'csv')


def test_summary_uses_completed_trials():
    records = [
        MeasurementRecord(protocol='PskDirect', trial=0, establishment_virtual_us=3000,
                          completed=True),
        MeasurementRecord(protocol='PskDirect', trial=1, establishment_virtual_us=5000,
                          completed=True),
        MeasurementRecord(protocol='PskDirect', trial=2),
        MeasurementRecord(protocol='TkdfSym', trial=0),
    ]
    summary = summarize(records)
    assert summary['PskDirect'].trials == 3
    assert summary['PskDirect'].completed == 2
    assert summary['PskDirect'].mean_us == 4000
    assert summary['PskDirect'].std_us == 1000
    assert math.isnan(summary['TkdfSym'].mean_us)
    assert list(measured_means(summary)) == [ProtocolKind.PSK_DIRECT]

    md = emit_report(records, 'md').decode('utf-8')
    assert '| PskDirect | WEP | AES-128 | 3 | 2 | 4000.0 | 1000.0 | 4.000 | 2.42 |' in md


def test_published_times_pass_the_ordering_check():
    assert check_ordering(reference_means())

    means = reference_means()
    means[ProtocolKind.TKDF_SYM] = [1.0]
    result = check_ordering(means)
    assert not result
    assert len(result.broken) == 1
    assert result.broken[0].startswith('OnDemandSts (1310.93) is not below TkdfSym')

    del means[ProtocolKind.TKDF_ASYM]
    with pytest.raises(IncompleteSummary):
        check_ordering(means)


def test_ordering_holds_on_the_default_scenario():
    records = run_benchmark(load_config('table2-default'), trials=100)
    summary = summarize(records)
    assert {s.completed for s in summary.values()} == {100}
    assert check_ordering(measured_means(summary))


def test_ordering_holds_with_costs_measured_on_this_machine():
    config = load_config('table2-default')
    config.crypto_costs = calibrate(iterations=3)
    records = run_benchmark(config, trials=5)
    assert all(r.completed for r in records)
    assert check_ordering(measured_means(summarize(records)))


def test_every_protocol_survives_the_loss_presets():
    means = {}
    for name in ('loss-00', 'loss-20', 'loss-50', 'loss-70'):
        config = load_config(name)
        summary = summarize(run_benchmark(config, trials=100))
        for protocol, stats in summary.items():
            assert (stats.trials, stats.completed) == (100, 100), (name, protocol)
            means.setdefault(protocol, []).append(stats.mean_us)

    assert len(means) == 6
    for protocol, by_loss in means.items():
        assert by_loss == sorted(by_loss), protocol
        assert by_loss[2] > by_loss[0], protocol


def test_calibrate():
    costs = calibrate(iterations=1)
    for name in ('aead', 'mac', 'kdf', 'pk_encrypt', 'pk_decrypt', 'sign', 'verify', 'dh'):
        assert getattr(costs, name) >= 1
    with pytest.raises(BenchError):
        calibrate(iterations=0)


def test_cli_exit_codes(tmp_path, capsys):
    assert main(['presets']) == 0
    assert 'loss-20' in capsys.readouterr().out

    assert main(['goals', '--all']) == 0
    assert capsys.readouterr().out.startswith('| Goal | WEP |')

    bad = tmp_path / 'bad.json'
    bad.write_text(json.dumps(_scenario(trials=0)))
    assert main(['run', '--config', str(bad)]) == 2
    assert 'trials: (0) must be >= 1.' in capsys.readouterr().err

    insecure = tmp_path / 'insecure.json'
    insecure.write_text(json.dumps(_scenario(protocols=['TkdfAsymUnfixed'])))
    assert main(['run', '--config', str(insecure)]) == 2
    assert main(['attack', '--protocol', 'TkdfAsymUnfixed', '--script', 'lowe-mitm']) == 2
    assert main(['goals', '--protocol', 'WPA3']) == 2
    assert main(['run', '--config', 'no-such-preset']) == 4


def test_cli_run_writes_report_and_transcript(tmp_path, capsys):
    scenario = tmp_path / 'pair.json'
    scenario.write_text(json.dumps(_scenario()))
    out, dump = tmp_path / 'out.csv', tmp_path / 'frames.jsonl'

    code = main([
        'run', '--config', str(scenario), '--trials', '1', '--out', str(out),
        '--dump-transcript', str(dump),
    ])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[1].startswith('PskMaster,0,4000,')
    frames = [json.loads(line) for line in dump.read_text().splitlines()]
    assert len(frames) == 4
    assert {f['protocol'] for f in frames} == {'PskMaster'}


def test_cli_attack(capsys):
    code = main([
        'attack', '--protocol', 'TkdfAsymUnfixed', '--script', 'lowe-mitm', '--allow-insecure',
    ])
    assert code == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary['success'] is True
    assert summary['script'] == 'lowe-mitm'
