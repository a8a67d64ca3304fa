import logging
import random

from .algorithms import MdsAlgorithm, RampAlgorithm, SmpAlgorithm
from .algorithms.mds import rank_ds, unsatisfied
from .algorithms.smp import (DISPUTED_RUNS, DOCUMENTED_RUNS, example_instance, gale_shapley,
                             is_stable_matching, read_preferences)
from .analyzer import (component_suprema, covering_pair_count, enumerate_system, export_dot,
                       verify_bounds, verify_lattice, verify_semantic_forbidden, verify_strict_order)
from .errors import BoundViolation, CapacityError, ConflictError, InputError, LatticeCheckFailed
from .framework import ENUMERATION_CAP, random_state, verify_locality
from .graph import read_graph
from .models import CONVERGED, Report
from .scheduler import MAX_STEPS_FACTOR, Daemon, exhaustive_schedules, run
from .utils import SqliteDict, caps_tuple, daemon_kind, non_negative, seed_value, typecasted

log = logging.getLogger(__name__)

__all__ = ['Engine']

CENTRAL_KINDS = ('central-random', 'central-max-id', 'synchronous')
SAMPLE_LIMIT = 5


class Engine:
    """Runs, analyzes and verifies one algorithm on one graph.

    Parameters
    ----------
    algorithm: AlgorithmSpec
        The rule set to drive
    graph: Graph
        The communication graph
    enumeration_cap: Optional[int] = 2**20
        Largest state space ``analyze`` and ``verify`` will enumerate
    max_steps_factor: Optional[int] = 4
        Default move budget as a multiple of the algorithm's move bound
    depth_cap: Optional[int] = None
        Depth cap for exhaustive interleavings, defaults to the move budget
    staleness_bounds: Optional[Tuple[int]] = (0, 1, 2, 4)
        Staleness bounds exercised by ``verify`` for the stale-async daemon
    samples_per_state_space: Optional[int] = 200
        Initial states per daemon in ``verify``; smaller spaces are run
        exhaustively
    smp_random_runs: Optional[int] = 1000
        Seeded random runs for the monotone-execution check
    locality_samples: Optional[int] = 256
        States perturbed by the locality check
    seed: Optional[int] = 0
        Default 64-bit seed for runs and sampling
    cache_fp: Optional[str] = None
        File path of a sqlite3 database caching enumerated transition
        systems, if provided, ``analyze`` and ``verify`` reuse them
    table_name: Optional[str] = 'transition_systems'
        Table name to use in the cache database
    graph_file: Optional[str] = None
        Input path recorded in traces
    """

    CACHE_LOG = '{algorithm} on graph {graph}: transition system {status}'

    def __init__(self, algorithm, graph, **options):
        self.alg = algorithm
        self.g = graph
        self.enumeration_cap = options.get('enumeration_cap', ENUMERATION_CAP)
        self.max_steps_factor = options.get('max_steps_factor', MAX_STEPS_FACTOR)
        self.depth_cap = options.get('depth_cap')
        self.staleness_bounds = tuple(options.get('staleness_bounds', (0, 1, 2, 4)))
        self.samples = options.get('samples_per_state_space', 200)
        self.smp_random_runs = options.get('smp_random_runs', 1000)
        self.locality_samples = options.get('locality_samples', 256)
        self.seed = seed_value(options.get('seed', 0))
        self.graph_file = options.get('graph_file')
        self.cache_fp = options.get('cache_fp')
        self.using_cache = bool(self.cache_fp)
        if self.using_cache:
            self.cache = SqliteDict(self.cache_fp, options.get('table_name', 'transition_systems'))
        self._ts = None

    @classmethod
    def Mds(cls, graph, **options):
        """Minimal dominating set on ``graph``."""
        return cls(MdsAlgorithm(), graph, **options)

    @classmethod
    def Smp(cls, instance, **options):
        """Stable marriage over ``instance``; the graph is complete over the men."""
        return cls(SmpAlgorithm(instance), instance.graph(), **options)

    @classmethod
    def Ramp(cls, caps, graph, **options):
        """Ramp counters with ``caps`` on every node of ``graph``."""
        return cls(RampAlgorithm(caps_tuple(caps), node_count=graph.n), graph, **options)

    @classmethod
    def from_files(cls, algorithm, graph_path=None, prefs_path=None, caps=None, **options):
        """Build an engine from the input files the command line takes."""
        if algorithm == 'smp':
            if not prefs_path:
                raise InputError('smp needs a preference file (--prefs)')
            options.setdefault('graph_file', str(prefs_path))
            return cls.Smp(read_preferences(prefs_path), **options)
        if algorithm not in ('mds', 'ramp'):
            raise InputError('unknown algorithm {!r}, expected mds, smp or ramp'.format(algorithm))
        if not graph_path:
            raise InputError('{} needs a graph file (--graph)'.format(algorithm))
        g = read_graph(graph_path)
        options.setdefault('graph_file', str(graph_path))
        if algorithm == 'mds':
            return cls.Mds(g, **options)
        if caps is None:
            raise InputError('ramp needs counter caps (--caps)')
        return cls.Ramp(caps, g, **options)

    def __repr__(self):
        return '<Engine {} n={} cache={}>'.format(self.alg.name, self.g.n, self.using_cache)

    @property
    def move_budget(self):
        return self.max_steps_factor * self.alg.move_bound(self.g)

    def initial_state(self, init, seed=None):
        """Resolve ``init`` into ``(state, init_source)``.

        ``init`` is a state tuple, a comma separated state text or
        ``'random'``, which draws uniformly with ``seed``.
        """
        if isinstance(init, tuple):
            return self.alg.check_state(self.g, init), None
        if init is None or str(init).strip().lower() == 'random':
            rng = random.Random(self.seed if seed is None else seed)
            return random_state(self.alg, self.g, rng), 'random'
        return self.alg.parse_state(str(init), self.g), None

    @typecasted
    def run(self, init, daemon: daemon_kind = 'central-random', seed: seed_value = None,
            staleness: non_negative = 0, max_steps: non_negative = None):
        """Execute one run.

        Parameters
        ----------
        init: str or tuple
            Initial state, or ``'random'``
        daemon: Optional[str] = 'central-random'
            Daemon kind; short aliases such as ``max-id`` are accepted
        seed: Optional[int]
            Defaults to the engine seed
        staleness: Optional[int] = 0
            Staleness bound for the stale-async daemon
        max_steps: Optional[int]
            Move budget, defaults to ``max_steps_factor`` times the move bound

        Returns
        -------
        ExecutionTrace
        """
        seed = self.seed if seed is None else seed
        state, source = self.initial_state(init, seed)
        d = Daemon(daemon, seed, staleness)
        if max_steps is None:
            max_steps = self.move_budget
        return run(self.alg, self.g, state, d, max_steps, graph_file=self.graph_file, init_source=source)

    def schedules(self, init):
        """Summary of every central-daemon interleaving from ``init``."""
        state, _ = self.initial_state(init)
        depth_cap = self.depth_cap if self.depth_cap is not None else self.move_budget
        return exhaustive_schedules(self.alg, self.g, state, depth_cap, self.enumeration_cap)

    def transition_system(self):
        """The enumerated state space, from the cache when possible."""
        if self._ts is not None:
            return self._ts
        key = '{}|{}'.format(self.alg.fingerprint(), self.g.fingerprint())
        if self.using_cache:
            try:
                self._ts = self.cache[key]
            except KeyError:
                log.debug(self.CACHE_LOG.format(algorithm=self.alg.name, graph=self.g.fingerprint(), status='missed'))
            else:
                log.debug(self.CACHE_LOG.format(algorithm=self.alg.name, graph=self.g.fingerprint(), status='hit'))
                return self._ts
        self._ts = enumerate_system(self.alg, self.g, self.enumeration_cap)
        if self.using_cache:
            self.cache[key] = self._ts
        return self._ts

    def export_dot(self):
        return export_dot(self.transition_system())

    def analyze(self):
        """Components, suprema, lattice checks and the longest execution."""
        ts = self.transition_system()
        report = Report(ts.stats())
        for k, component in enumerate(ts.components):
            report.extend(verify_lattice(ts, component), prefix='component-{}'.format(k))
        bounds = verify_bounds(ts)
        report.extend(bounds)
        report.update_stats(**bounds.raw_data['stats'])
        report.update_stats(suprema=[
            ts.fmt(ts.supremum(c)) if ts.supremum(c) is not None else None for c in ts.components
        ])
        self._log_report(report, 'analyze')
        return report

    def verify(self):
        """Every machine check that applies to the algorithm.

        Stale-async runs with a positive staleness bound are reported as
        statistics only.
        """
        report = self.analyze()
        ts = self.transition_system()
        for k, component in enumerate(ts.components):
            report.extend(verify_strict_order(ts, component), prefix='component-{}'.format(k))
        rng = random.Random(self.seed)
        starts = self.sample_states(self.samples, rng)
        self._verify_common(report, ts, starts, rng)
        checks = {'mds': self._verify_mds, 'smp': self._verify_smp, 'ramp': self._verify_ramp}
        checks[self.alg.name](report, ts, rng)
        self._log_report(report, 'verify')
        return report

    def sample_states(self, count, rng):
        """All states when there are at most ``count``, else ``count`` distinct draws."""
        if self.alg.state_space_size(self.g) <= count:
            return list(self.alg.states(self.g, self.enumeration_cap))
        drawn = {}
        while len(drawn) < count:
            drawn.setdefault(random_state(self.alg, self.g, rng))
        return list(drawn)

    # checks #

    def _fmt(self, s):
        return self.alg.format_state(s)

    def _log_report(self, report, what):
        for check in report.raw_data['checks']:
            if check['pass']:
                log.info('%s %s: %s passed', self.alg.name, what, check['name'])
            else:
                log.warning('%s %s: %s failed', self.alg.name, what, check['name'])

    def _runs(self, starts, kind, staleness=0):
        """Run every start under one daemon. Yields ``(start, trace or error)``."""
        for k, s in enumerate(starts):
            try:
                yield s, self.run(s, kind, seed=self.seed + k, staleness=staleness)
            except (BoundViolation, ConflictError) as e:
                yield s, e

    def _verify_common(self, report, ts, starts, rng):
        alg, g = self.alg, self.g
        if alg.lattice != 'product':
            bad = [ts.fmt(ts.supremum(c)) for c in ts.components
                   if ts.supremum(c) is not None and not alg.optimal(g, ts.supremum(c))]
            report.add_check('suprema-are-optimal', not bad, bad[:SAMPLE_LIMIT])
        report.extend(verify_semantic_forbidden(ts, lambda s: alg.optimal(g, s), label='optimal'))

        failures = verify_locality(alg, g, self.sample_states(self.locality_samples, rng))
        report.add_check('guards-read-within-radius', not failures, [
            'node {} in {} vs {}'.format(i, self._fmt(s), self._fmt(t)) for s, i, t in failures[:SAMPLE_LIMIT]
        ])

        first = starts[0]

        def replay(kind):
            try:
                return self.run(first, kind, seed=self.seed, staleness=1).to_json()
            except (BoundViolation, ConflictError) as e:
                return e.fmt

        twice = [replay(kind) for kind in ('central-random', 'stale-async') for _ in range(2)]
        report.add_check('runs-are-deterministic', twice[0] == twice[1] and twice[2] == twice[3], self._fmt(first))

        revisits, over, strays = [], [], []
        for s in starts:
            try:
                summary = self.schedules(s)
            except (CapacityError, LatticeCheckFailed) as e:
                over.append('{}: {}'.format(self._fmt(s), e.error))
                continue
            revisits += ['node {} leaving {}'.format(i, self._fmt(v)) for v, i in summary.revisits]
            if summary.longest > alg.move_bound(g):
                over.append('{}: {} moves'.format(self._fmt(s), summary.longest))
            if alg.lattice != 'product':
                supremum = ts.supremum(ts.components[ts.component_of(s)])
                if set(summary.terminals) != {supremum}:
                    strays.append('{}: {}'.format(self._fmt(s), sorted(self._fmt(t) for t in summary.terminals)))
        report.add_check('interleavings-never-revisit-a-value', not revisits, revisits[:SAMPLE_LIMIT])
        report.add_check('interleavings-within-move-bound', not over, over[:SAMPLE_LIMIT])
        if alg.lattice != 'product':
            report.add_check('interleavings-end-at-component-supremum', not strays, strays[:SAMPLE_LIMIT])
        report.update_stats(initial_states=len(starts))

        for kind in CENTRAL_KINDS:
            self._verify_daemon(report, starts, kind)
        for bound in self.staleness_bounds:
            self._stale_stats(report, starts, bound)
        if 0 in self.staleness_bounds:
            mismatched = []
            for k, s in enumerate(starts):
                try:
                    stale = self.run(s, 'stale-async', seed=self.seed + k, staleness=0)
                    central = self.run(s, 'central-random', seed=self.seed + k)
                except BoundViolation as e:
                    mismatched.append('{}: {}'.format(self._fmt(s), e.error))
                    continue
                if stale.steps != central.steps or stale.outcome_kind != central.outcome_kind:
                    mismatched.append(self._fmt(s))
            report.add_check('fresh-reads-match-central-random', not mismatched, mismatched[:SAMPLE_LIMIT])

    def _verify_daemon(self, report, starts, kind):
        alg, g = self.alg, self.g
        errors, wrong, over, twice = [], [], [], []
        for s, result in self._runs(starts, kind):
            if not isinstance(result, Exception):
                trace = result
            else:
                errors.append('{}: {}'.format(self._fmt(s), result.error))
                continue
            if trace.converged and not alg.optimal(g, trace.final_state):
                wrong.append(self._fmt(s))
            if len(trace.steps) > alg.move_bound(g):
                over.append('{}: {} moves'.format(self._fmt(s), len(trace.steps)))
            if trace.revisits():
                twice.append('{}: nodes {}'.format(self._fmt(s), trace.revisits()))
        report.add_check('{}-runs-complete'.format(kind), not errors, errors[:SAMPLE_LIMIT])
        report.add_check('{}-converged-runs-optimal'.format(kind), not wrong, wrong[:SAMPLE_LIMIT])
        report.add_check('{}-within-move-bound'.format(kind), not over, over[:SAMPLE_LIMIT])
        if alg.name == 'mds':
            report.add_check('{}-no-node-moves-twice'.format(kind), not twice, twice[:SAMPLE_LIMIT])

    def _stale_stats(self, report, starts, bound):
        alg, g = self.alg, self.g
        stats = {'runs': 0, 'converged': 0, 'optimal': 0, 'no_solution': 0, 'bound_exceeded': 0,
                 'runs_with_repeat_movers': 0, 'max_moves': 0}
        for s, result in self._runs(starts, 'stale-async', staleness=bound):
            stats['runs'] += 1
            if isinstance(result, Exception):
                stats['bound_exceeded'] += 1
                continue
            stats['max_moves'] = max(stats['max_moves'], len(result.steps))
            if result.converged:
                stats['converged'] += 1
                stats['optimal'] += alg.optimal(g, result.final_state)
            else:
                stats['no_solution'] += 1
            stats['runs_with_repeat_movers'] += bool(result.revisits())
        if stats['bound_exceeded']:
            log.warning('%s stale-async B=%d: %d runs exceeded the move budget', alg.name, bound, stats['bound_exceeded'])
            report.add_note('stale-async B={}: {} of {} runs exceeded the move budget'.format(
                bound, stats['bound_exceeded'], stats['runs']))
        report.update_stats(**{'stale_async_b{}'.format(bound): stats})

    def _verify_mds(self, report, ts, rng):
        try:
            component_suprema(ts)
        except LatticeCheckFailed as e:
            report.add_check('one-supremum-per-component', False, e.counterexample)
        else:
            report.add_check('one-supremum-per-component', True)
        sinks = {s for c in ts.components for s in ts.sinks(c)}
        wrong = [ts.fmt(s) for s in ts.states if (rank_ds(self.g, s) == 0) != (s in sinks)]
        report.add_check('rank-zero-exactly-at-suprema', not wrong, wrong[:SAMPLE_LIMIT])

        crowded = []
        for s in ts.states:
            for i in ts.forbidden[s]:
                if not unsatisfied(self.g, s, i) or self.g.k_hop(i, 2) & ts.forbidden[s]:
                    crowded.append('node {} in {}'.format(i, ts.fmt(s)))
        report.add_check('forbidden-nodes-unsatisfied-and-2-hop-apart', not crowded, crowded[:SAMPLE_LIMIT])

    def _verify_smp(self, report, ts, rng):
        alg, g, inst = self.alg, self.g, self.alg.instance
        expected = covering_pair_count(inst.n, inst.n)
        report.add_check('covering-pair-count', ts.skeleton.number_of_edges() == expected,
                         '{} covering pairs, expected {}'.format(ts.skeleton.number_of_edges(), expected))
        report.extend(verify_semantic_forbidden(ts, alg.stable, label='stable', require_progress=False))

        bottom = tuple([1] * inst.n)
        trace = self.run(bottom, 'central-max-id')
        man_optimal = gale_shapley(inst)
        agrees = trace.converged and trace.final_state == man_optimal and is_stable_matching(inst, trace.final_state)
        report.add_check('bottom-run-is-man-optimal', agrees, '{} vs {}'.format(
            self._fmt(trace.final_state), self._fmt(man_optimal) if man_optimal else None))

        if inst == example_instance():
            for init, outcome, final in DOCUMENTED_RUNS:
                trace = self.run(init, 'central-max-id')
                ok = trace.outcome_kind == outcome and (final is None or trace.final == final)
                report.add_check('documented-run-from-{}'.format(init), ok,
                                 '{} at {}'.format(trace.outcome_kind, trace.final))
            for init, outcome, final in DISPUTED_RUNS:
                trace = self.run(init, 'central-max-id')
                if trace.outcome_kind != outcome or trace.final != final:
                    report.add_discrepancy(
                        init, '{} at {}'.format(outcome, final), '{} at {}'.format(trace.outcome_kind, trace.final))

        rising, over = [], []
        for k in range(self.smp_random_runs):
            s = random_state(alg, g, rng)
            trace = self.run(s, 'central-random', seed=self.seed + k)
            if not trace.is_monotone():
                rising.append(self._fmt(s))
            if len(trace.steps) > inst.n * (inst.n - 1):
                over.append(self._fmt(s))
        report.add_check('random-runs-monotone', not rising, rising[:SAMPLE_LIMIT])
        report.add_check('random-runs-within-move-bound', not over, over[:SAMPLE_LIMIT])
        report.update_stats(random_runs=self.smp_random_runs)

    def _verify_ramp(self, report, ts, rng):
        bottom = tuple(tuple(1 for _ in self.alg.caps) for _ in self.g.nodes)
        bound = self.alg.move_bound(self.g)
        loose = []
        daemons = [(kind, 0) for kind in CENTRAL_KINDS] + [('stale-async', b) for b in self.staleness_bounds]
        for kind, staleness in daemons:
            trace = self.run(bottom, kind, staleness=staleness)
            if len(trace.steps) != bound:
                loose.append('{} B={}: {} moves'.format(kind, staleness, len(trace.steps)))
        report.add_check('bottom-runs-take-exactly-move-bound', not loose, loose[:SAMPLE_LIMIT])
        report.update_stats(tight_bound=bound)
