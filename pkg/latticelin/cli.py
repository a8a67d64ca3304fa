"""Command line surface.

Exit codes: 0 success, 1 no solution, 2 invalid input, 3 failed check.
JSON and DOT go to stdout (or ``--out``); summaries and logs go to stderr.
"""
import argparse
import logging
import sys
from pathlib import Path

from . import __version__
from .algorithms import ALGORITHMS
from .client import Engine
from .errors import BoundViolation, InputError, LatticeError
from .models import NO_SOLUTION

log = logging.getLogger(__name__)

COMMANDS = ('run', 'analyze', 'verify', 'export-dot')
LOG_FORMAT = '%(levelname)s %(name)s: %(message)s'


def build_parser():
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument('--algorithm', required=True, choices=ALGORITHMS, help='Rule set to use')
    shared.add_argument('--graph', help='Edge list file (mds, ramp)')
    shared.add_argument('--prefs', help='Preference list file (smp)')
    shared.add_argument('--caps', help='Comma separated counter caps (ramp)')
    shared.add_argument('--seed', type=int, default=0, help='64-bit seed')
    shared.add_argument('--out', help='Write the document here instead of stdout')
    shared.add_argument('-v', '--verbose', action='count', default=0, help='-v for INFO, -vv for DEBUG')

    parser = argparse.ArgumentParser(prog='latticelin', description='Lattice linear algorithm engine')
    parser.add_argument('--version', action='version', version='%(prog)s ' + __version__)
    commands = parser.add_subparsers(dest='command', required=True)

    run = commands.add_parser('run', parents=[shared], help='Execute one run and print its trace')
    run.add_argument('--init', default='random', help='Comma separated initial state, or "random"')
    run.add_argument('--daemon', default='central-random', help='central-random, central-max-id, synchronous, stale-async')
    run.add_argument('--staleness', type=int, default=0, help='Staleness bound B (stale-async)')
    run.add_argument('--max-steps', type=int, default=None, help='Move budget, defaults to 4x the move bound')

    commands.add_parser('analyze', parents=[shared], help='Enumerate the state space and check its lattices')
    commands.add_parser('verify', parents=[shared], help='Run every machine check')
    commands.add_parser('export-dot', parents=[shared], help='Render the lattices as DOT')
    return parser


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    try:
        Path(out).write_text(text, encoding='utf8')
    except OSError as e:
        raise InputError('cannot write {}: {}'.format(out, e.strerror))


def _summarize(report):
    failures = report.failures()
    stats = report.raw_data['stats']
    print('{} checks, {} failed; {} states, {} components'.format(
        len(report.raw_data['checks']), len(failures), stats.get('states'), stats.get('components')), file=sys.stderr)
    for check in failures:
        print('  failed: {}'.format(check['name']), file=sys.stderr)
    for entry in report.raw_data['discrepancies']:
        print('  discrepancy at {example}: documented {documented}, observed {observed}'.format(**entry), file=sys.stderr)


def _run(engine, args):
    try:
        trace = engine.run(args.init, args.daemon, seed=args.seed, staleness=args.staleness, max_steps=args.max_steps)
    except BoundViolation as e:
        if e.trace is not None:
            _emit(e.trace.to_json(), args.out)
        raise
    _emit(trace.to_json(), args.out)
    print('{}: {} after {} moves at {}'.format(trace.daemon.kind, trace.outcome, trace.move_count, trace.final),
          file=sys.stderr)
    return 1 if trace.outcome_kind == NO_SOLUTION else 0


def _check(engine, args):
    report = engine.verify() if args.command == 'verify' else engine.analyze()
    _emit(report.to_json(), args.out)
    _summarize(report)
    return 0 if report.passed else 3


def _export_dot(engine, args):
    _emit(engine.export_dot(), args.out)
    return 0


HANDLERS = {'run': _run, 'analyze': _check, 'verify': _check, 'export-dot': _export_dot}


def main(argv=None):
    """Parse ``argv``, execute the command and return its exit code."""
    args = build_parser().parse_args(argv)
    level = max(logging.WARNING - 10 * args.verbose, logging.DEBUG)
    logging.basicConfig(stream=sys.stderr, level=level, format=LOG_FORMAT)
    try:
        engine = Engine.from_files(args.algorithm, args.graph, args.prefs, args.caps, seed=args.seed)
        return HANDLERS[args.command](engine, args)
    except LatticeError as e:
        print(e.fmt, file=sys.stderr)
        return e.code
