"""
`awnbench` command line.

    awnbench run --config table2-default --trials 100 --format md --check-ordering
    awnbench goals --all
    awnbench goals --protocol SymTKDF --format json --check --seeds 5
    awnbench attack --protocol TkdfAsymUnfixed --script lowe-mitm --allow-insecure
    awnbench calibrate --iterations 50 --out costs.json
    awnbench presets --show loss-50

Exit codes: 0 success, 2 invalid input (scenario, protocol, script), 3 a failed
acceptance check (ordering, goal reconciliation), 4 any other error.
"""
import argparse
import json
import logging
import sys
from logging import getLogger
from pathlib import Path
from typing import List, Optional

from awnbench.errors import AwnError
from awnbench.kinds import ProtocolKind
from awnbench.adversary import SCRIPTS, ScriptError, parse_script, run_attack
from awnbench.goals import COLUMNS, compare_all, goal_report, render_matrix, render_reports
from awnbench.bench.calibrate import calibrate
from awnbench.bench.config import load_config, preset_names, preset_text
from awnbench.bench.errors import InsecureProtocolError, ParseError, ValidationError
from awnbench.bench.report import (
    FORMATS, check_ordering, emit_report, measured_means, summarize
)
from awnbench.bench.runner import MeasurementRecord, run_benchmark

log = getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_CHECK_FAILED = 3
EXIT_ERROR = 4


def _write(text: str, out: Optional[str]):
    if out:
        Path(out).write_text(text, encoding='utf-8')
    else:
        sys.stdout.write(text)


def _cmd_run(args) -> int:
    config = load_config(args.config)
    dump = open(args.dump_transcript, 'w', encoding='utf-8') if args.dump_transcript else None

    def on_trial(record: MeasurementRecord, sim):
        for frame in sim.transcript:
            line = {'protocol': record.protocol, 'trial': record.trial, **frame.as_json()}
            dump.write(json.dumps(line, sort_keys=True, separators=(',', ':')) + '\n')

    kwargs = {}
    if args.seed is not None:
        kwargs['seed'] = args.seed
    if args.trials is not None:
        kwargs['trials'] = args.trials
    try:
        records = run_benchmark(
            config,
            allow_insecure=args.allow_insecure,
            on_trial=on_trial if dump else None,
            **kwargs,
        )
    finally:
        if dump:
            dump.close()

    _write(emit_report(records, args.format).decode('utf-8'), args.out)

    if args.check_ordering:
        result = check_ordering(measured_means(summarize(records)))
        if not result:
            for broken in result.broken:
                print(f"ordering: {broken}", file=sys.stderr)
            return EXIT_CHECK_FAILED
        print("ordering: pass", file=sys.stderr)
    return EXIT_OK


def _cmd_goals(args) -> int:
    if args.all and not args.check:
        _write(render_matrix(fmt=args.format), args.out)
        return EXIT_OK

    seeds = list(range(args.seeds))
    if args.all:
        reports = compare_all(seeds)
    else:
        reports = [goal_report(args.protocol, seeds)]
    _write(render_reports(reports, args.format), args.out)

    if args.check and any(r.discrepancies for r in reports):
        return EXIT_CHECK_FAILED
    return EXIT_OK


def _cmd_attack(args) -> int:
    kind = ProtocolKind.parse(args.protocol)
    if kind.insecure and not args.allow_insecure:
        raise InsecureProtocolError(
            f"Protocol ({kind.value}) is a negative control; pass --allow-insecure."
        )
    options = {}
    if args.compromised is not None:
        options['compromised_node'] = args.compromised
    script = parse_script(args.script, **options)
    outcome = run_attack(kind, script, seed=args.seed)

    doc = outcome.api.json()
    if args.dump_evidence:
        Path(args.dump_evidence).write_text(json.dumps(doc, indent=2), encoding='utf-8')
    summary = {k: v for k, v in doc.items() if k != 'evidence'}
    summary['findings'] = outcome.evidence.findings or []
    _write(json.dumps(summary, indent=2) + '\n', None)
    return EXIT_OK


def _cmd_calibrate(args) -> int:
    costs = calibrate(args.iterations)
    _write(json.dumps(costs.api.json(), indent=2, sort_keys=True) + '\n', args.out)
    return EXIT_OK


def _cmd_presets(args) -> int:
    if args.show:
        _write(preset_text(args.show), None)
    else:
        _write(''.join(f"{name}\n" for name in preset_names()), None)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='awnbench',
        description='Secure-channel establishment benchmarks and goal checks for '
                    'avionics wireless network deployment families.',
    )
    parser.add_argument(
        '-v', '--verbose', action='count', default=0, help='-v for info, -vv for debug logs.'
    )
    sub = parser.add_subparsers(dest='command', required=True)

    run = sub.add_parser('run', help='Run a benchmark campaign.')
    run.add_argument('--config', required=True, help='Scenario file or bundled preset name.')
    run.add_argument('--seed', type=int, help='Overrides the scenario seed.')
    run.add_argument('--trials', type=int, help='Overrides the scenario trial count.')
    run.add_argument('--format', choices=FORMATS, default='csv')
    run.add_argument('--out', help='Report file (default: stdout).')
    run.add_argument('--dump-transcript', help='Write every on-air frame as JSON lines.')
    run.add_argument('--allow-insecure', action='store_true')
    run.add_argument('--check-ordering', action='store_true')
    run.set_defaults(handler=_cmd_run)

    goals = sub.add_parser('goals', help='Goal verdicts, published and observed.')
    which = goals.add_mutually_exclusive_group(required=True)
    which.add_argument('--protocol', help=f"Column ({', '.join(COLUMNS)}) or protocol kind.")
    which.add_argument('--all', action='store_true')
    goals.add_argument('--format', choices=('md', 'json'), default='md')
    goals.add_argument('--check', action='store_true', help='Fail on hard discrepancies.')
    goals.add_argument('--seeds', type=int, default=1, help='Evaluate over seeds 0..N-1.')
    goals.add_argument('--out')
    goals.set_defaults(handler=_cmd_goals)

    attack = sub.add_parser('attack', help='Run one attack script.')
    attack.add_argument('--protocol', required=True)
    attack.add_argument('--script', required=True, choices=sorted(SCRIPTS))
    attack.add_argument('--compromised', help='Compromised node, for scripts that take one.')
    attack.add_argument('--seed', type=int, default=0)
    attack.add_argument('--dump-evidence', help='Write the full outcome as JSON.')
    attack.add_argument('--allow-insecure', action='store_true')
    attack.set_defaults(handler=_cmd_attack)

    cal = sub.add_parser('calibrate', help='Measure local crypto costs.')
    cal.add_argument('--iterations', type=int, default=20)
    cal.add_argument('--out')
    cal.set_defaults(handler=_cmd_calibrate)

    presets = sub.add_parser('presets', help='List bundled scenarios.')
    presets.add_argument('--show', help='Print one preset.')
    presets.set_defaults(handler=_cmd_presets)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, format='%(levelname)s %(name)s: %(message)s')

    if args.command == 'goals' and args.seeds < 1:
        print("error: --seeds must be >= 1", file=sys.stderr)
        return EXIT_INVALID

    try:
        return args.handler(args)
    except (ParseError, ValidationError, InsecureProtocolError, ScriptError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except ValueError as e:
        # Unknown protocol kind or column names.
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except AwnError as e:
        log.debug("Command failed.", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == '__main__':
    sys.exit(main())
