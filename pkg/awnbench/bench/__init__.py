"""
Benchmark harness: scenario files, seeded campaigns, reports and the `awnbench` CLI.

>>> from awnbench.bench import load_config, run_benchmark, emit_report
>>> config = load_config('table2-default')
>>> records = run_benchmark(config, trials=3)
>>> emit_report(records, 'csv').splitlines()[0]
b'protocol,trial,establishment_virtual_us,crypto_wallclock_us,messages_sent,retransmissions,...'
"""
from .errors import (
    BenchError, ParseError, ValidationError, InsecureProtocolError, IncompleteSummary
)
from .config import ScenarioConfig, load_config, parse_config, preset_names, preset_text
from .runner import MeasurementRecord, run_benchmark, run_trial, check_protocols, COLUMNS
from .report import (
    emit_report, summarize, check_ordering, reference_means, measured_means, OrderingResult,
    ProtocolSummary, ReferenceRow, REFERENCE_FIXTURE
)
from .calibrate import calibrate

__all__ = [
    'BenchError',
    'ParseError',
    'ValidationError',
    'InsecureProtocolError',
    'IncompleteSummary',
    'ScenarioConfig',
    'load_config',
    'parse_config',
    'preset_names',
    'preset_text',
    'MeasurementRecord',
    'run_benchmark',
    'run_trial',
    'check_protocols',
    'COLUMNS',
    'emit_report',
    'summarize',
    'check_ordering',
    'reference_means',
    'measured_means',
    'OrderingResult',
    'ProtocolSummary',
    'ReferenceRow',
    'REFERENCE_FIXTURE',
    'calibrate',
]
