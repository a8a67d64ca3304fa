"""Execution engine: drives an AlgorithmSpec under a daemon.

Daemons
-------
central-random
    one forbidden node per step, drawn uniformly with the seed
central-max-id
    one forbidden node per step, the largest ID
synchronous
    every forbidden node at once; the round must serialize
stale-async
    one node per step whose guard holds on its own cached view of
    its read ball; cached values lag their owner by at most ``B`` moves
"""
import logging
import random

from .errors import BoundViolation, CapacityError, ConflictError, InputError, LatticeCheckFailed, NoSolution
from .framework import ENUMERATION_CAP, Move, forbidden_nodes, replace
from .models import BOUND_EXCEEDED, CONVERGED, NO_SOLUTION, ExecutionTrace

log = logging.getLogger(__name__)

__all__ = ['Daemon', 'DAEMON_KINDS', 'run', 'run_all_schedules', 'exhaustive_schedules', 'ScheduleSummary']

DAEMON_KINDS = ('central-random', 'central-max-id', 'synchronous', 'stale-async')
MAX_STEPS_FACTOR = 4
REFRESH_SALT = 0x5DEECE66D
SEED_MASK = 2 ** 64 - 1

MOVE_LOG = '{daemon} step {step}: node {node} {old} -> {new}'


class Daemon:
    """Scheduling adversary.

    Parameters
    ----------
    kind: str
        One of ``DAEMON_KINDS``
    seed: Optional[int] = 0
        64-bit seed, fixed per run
    staleness: Optional[int] = 0
        Staleness bound ``B`` (stale-async only)
    """

    def __init__(self, kind, seed=0, staleness=0):
        if kind not in DAEMON_KINDS:
            raise InputError('unknown daemon {!r}, expected one of {}'.format(kind, ', '.join(DAEMON_KINDS)))
        if not isinstance(staleness, int) or staleness < 0:
            raise InputError('staleness bound must be a non-negative integer, got {!r}'.format(staleness))
        self.kind = kind
        self.seed = seed & SEED_MASK
        self.staleness = staleness

    def to_dict(self):
        return {'kind': self.kind, 'seed': self.seed, 'staleness': self.staleness}

    def __eq__(self, other):
        return isinstance(other, Daemon) and self.to_dict() == other.to_dict()

    def __repr__(self):
        return '<Daemon {0.kind} seed={0.seed} B={0.staleness}>'.format(self)


class _Run:
    """Mutable bookkeeping of one run."""

    def __init__(self, alg, g, init, daemon, max_steps, graph_file, init_source):
        self.alg = alg
        self.g = g
        self.initial = init
        self.state = init
        self.daemon = daemon
        self.max_steps = max_steps
        self.graph_file = graph_file
        self.init_source = init_source
        self.steps = []

    def trace(self, outcome):
        return ExecutionTrace(
            self.alg, self.daemon, self.initial, self.steps, self.state, outcome,
            graph_file=self.graph_file, init_source=self.init_source
        )

    def budget(self, count=1):
        if len(self.steps) + count > self.max_steps:
            raise BoundViolation(
                '{} under {} needs more than {} moves from {}'.format(
                    self.alg.name, self.daemon.kind, self.max_steps, self.alg.format_state(self.initial)),
                trace=self.trace(BOUND_EXCEEDED)
            )

    def commit(self, step, node, value):
        move = Move(step, node, self.state[node - 1], value)
        log.debug(MOVE_LOG.format(
            daemon=self.daemon.kind, step=step, node=node,
            old=self.alg.format_local(move.old), new=self.alg.format_local(value)))
        self.steps.append(move)
        self.state = replace(self.state, node, value)


def _run_central(r):
    rng = random.Random(r.daemon.seed)
    while True:
        enabled = sorted(forbidden_nodes(r.alg, r.g, r.state))
        if not enabled:
            return r.trace(CONVERGED)
        node = enabled[-1] if r.daemon.kind == 'central-max-id' else rng.choice(enabled)
        try:
            value = r.alg.move(r.g, r.state, node)
        except NoSolution:
            return r.trace(NO_SOLUTION)
        r.budget()
        r.commit(len(r.steps) + 1, node, value)


def _serializes(alg, g, s, values):
    """Some order of the round's single moves is a path of forbidden moves."""
    pending = tuple(sorted(values))
    dead = set()

    def search(t, rest):
        if not rest:
            return True
        if rest in dead:
            return False
        for i in rest:
            if alg.forbidden(g, t, i) and alg.move(g, t, i) == values[i]:
                if search(replace(t, i, values[i]), tuple(j for j in rest if j != i)):
                    return True
        dead.add(rest)
        return False

    return search(s, pending)


def _run_synchronous(r):
    rounds = 0
    while True:
        enabled = sorted(forbidden_nodes(r.alg, r.g, r.state))
        if not enabled:
            return r.trace(CONVERGED)
        try:
            values = {i: r.alg.move(r.g, r.state, i) for i in enabled}
        except NoSolution:
            return r.trace(NO_SOLUTION)
        if len(enabled) > 1 and not _serializes(r.alg, r.g, r.state, values):
            raise ConflictError(
                'synchronous round {} over {} does not serialize'.format(rounds + 1, enabled),
                counterexample=r.alg.format_state(r.state))
        r.budget(len(enabled))
        rounds += 1
        for i in enabled:
            r.commit(rounds, i, values[i])


def _run_stale(r):
    alg, g, bound = r.alg, r.g, r.daemon.staleness
    choice_rng = random.Random(r.daemon.seed)
    refresh_rng = random.Random(r.daemon.seed ^ REFRESH_SALT)
    balls = {i: sorted(g.k_hop(i, alg.read_radius)) for i in g.nodes}
    versions = {i: 0 for i in g.nodes}
    cache = {i: {j: (r.state[j - 1], 0) for j in balls[i]} for i in g.nodes}

    def view(i):
        s = list(r.state)
        for j, (value, _) in cache[i].items():
            s[j - 1] = value
        return tuple(s)

    def refresh(i, j):
        cache[i][j] = (r.state[j - 1], versions[j])

    while True:
        if not forbidden_nodes(alg, g, r.state):
            return r.trace(CONVERGED)
        views = {i: view(i) for i in g.nodes}
        enabled = [i for i in g.nodes if alg.forbidden(g, views[i], i)]
        if not enabled:
            # nobody sees a reason to move: every reader catches up
            for i in g.nodes:
                for j in balls[i]:
                    refresh(i, j)
            continue
        node = choice_rng.choice(enabled)
        try:
            value = alg.move(g, views[node], node)
        except NoSolution:
            return r.trace(NO_SOLUTION)
        r.budget()
        r.commit(len(r.steps) + 1, node, value)
        versions[node] += 1
        for i in g.nodes:
            for j in balls[i]:
                lag = versions[j] - cache[i][j][1]
                if lag and (lag > bound or refresh_rng.random() < 0.5):
                    refresh(i, j)


_RUNNERS = {
    'central-random': _run_central,
    'central-max-id': _run_central,
    'synchronous': _run_synchronous,
    'stale-async': _run_stale
}


def run(alg, g, init, daemon, max_steps=None, graph_file=None, init_source=None):
    """Execute ``alg`` on ``g`` from ``init`` until no guard is enabled.

    Parameters
    ----------
    alg: AlgorithmSpec
    g: Graph
    init: tuple
        Well-formed initial global state
    daemon: Daemon
    max_steps: Optional[int]
        Move budget, defaults to 4 times ``alg.move_bound(g)``

    Returns
    -------
    ExecutionTrace
        ``outcome`` is ``Converged`` or ``NoSolution``

    Raises
    ------
    BoundViolation
        If the budget is exhausted before termination
    ConflictError
        If a synchronous round cannot be serialized
    """
    init = alg.check_state(g, init)
    if max_steps is None:
        max_steps = MAX_STEPS_FACTOR * alg.move_bound(g)
    r = _Run(alg, g, init, daemon, max_steps, graph_file, init_source)
    trace = _RUNNERS[daemon.kind](r)
    log.debug('%s/%s from %s: %s after %d moves', alg.name, daemon.kind,
              alg.format_state(init), trace.outcome_kind, len(trace.steps))
    return trace


class ScheduleSummary:
    """Every central-daemon interleaving from one initial state.

    Attributes
    ----------
    terminals: Dict[tuple, int]
        Reachable terminal state -> most moves to reach it
    no_solution: Set[tuple]
        States where the chosen node exhausted its domain
    longest: int
        Most moves over all interleavings
    revisits: List[Tuple[tuple, int]]
        ``(s, i)`` such that ``i`` leaves its value in ``s`` and some
        continuation brings it back
    """

    def __init__(self, terminals, no_solution, longest, revisits, explored):
        self.terminals = terminals
        self.no_solution = no_solution
        self.longest = longest
        self.revisits = revisits
        self.explored = explored

    def __repr__(self):
        return '<ScheduleSummary terminals={} longest={} revisits={}>'.format(
            len(self.terminals), self.longest, len(self.revisits))


def exhaustive_schedules(alg, g, init, depth_cap=None, cap=ENUMERATION_CAP):
    """Depth-first search over every central-daemon choice sequence.

    Shared suffixes are memoized per state, so the cost is linear in
    the number of reachable states and transitions.
    """
    init = alg.check_state(g, init)
    if depth_cap is None:
        depth_cap = MAX_STEPS_FACTOR * alg.move_bound(g)
    memo = {}
    on_path = set()
    revisits = []
    no_solution = set()

    def visit(s, depth):
        if s in memo:
            return memo[s]
        if depth > depth_cap:
            raise CapacityError('interleavings from {} exceed depth {}'.format(alg.format_state(init), depth_cap),
                                depth, depth_cap)
        if len(memo) >= cap:
            raise CapacityError('more than {} states reachable'.format(cap), len(memo), cap)
        on_path.add(s)
        terminals, longest = {}, 0
        values = [{v} for v in s]
        enabled = sorted(forbidden_nodes(alg, g, s))
        if not enabled:
            terminals[s] = 0
        for i in enabled:
            try:
                value = alg.move(g, s, i)
            except NoSolution:
                no_solution.add(s)
                terminals.setdefault(s, 0)
                continue
            t = replace(s, i, value)
            if t in on_path:
                raise LatticeCheckFailed('transition cycle through {}'.format(alg.format_state(t)),
                                         counterexample=alg.format_state(t))
            sub_terminals, sub_longest, sub_values = visit(t, depth + 1)
            if s[i - 1] in sub_values[i - 1]:
                revisits.append((s, i))
            for final, count in sub_terminals.items():
                terminals[final] = max(terminals.get(final, 0), count + 1)
            longest = max(longest, sub_longest + 1)
            for k, vs in enumerate(sub_values):
                values[k] |= vs
        on_path.discard(s)
        memo[s] = (terminals, longest, values)
        return memo[s]

    terminals, longest, _ = visit(init, 0)
    if longest > depth_cap:
        raise CapacityError('interleavings from {} exceed depth {}'.format(alg.format_state(init), depth_cap),
                            longest, depth_cap)
    return ScheduleSummary(terminals, no_solution, longest, revisits, len(memo))


def run_all_schedules(alg, g, init, depth_cap=None):
    """All reachable terminal states with the most moves to each."""
    summary = exhaustive_schedules(alg, g, init, depth_cap)
    return frozenset(summary.terminals.items())
