"""Exhaustive analysis of an algorithm's state space.

The transition relation ``δ`` holds one edge per (state, forbidden
node). The order skeleton is ``δ`` itself for algorithms whose lattice
is induced by their moves, and the covering pairs of the product order
for algorithms whose lattice is the product of the local domains.
Components are the weakly connected pieces of the skeleton.
"""
import itertools
import logging

import graphviz
import networkx as nx

from .algorithms.ramp import ramp_fixture
from .errors import LatticeCheckFailed, NoSolution
from .framework import ENUMERATION_CAP, forbidden_nodes, replace, semantic_forbidden, state_less_than
from .models import Report

log = logging.getLogger(__name__)

__all__ = [
    'TransitionSystem', 'enumerate_system', 'component_suprema', 'verify_lattice',
    'verify_bounds', 'verify_semantic_forbidden', 'verify_strict_order',
    'covering_pair_count', 'export_dot', 'ramp_fixture'
]

JOIN_CHECK_LIMIT = 1024
ORDER_CHECK_LIMIT = 64
DIVERGENCE_SAMPLES = 5


class TransitionSystem:
    """Enumerated states, transitions and lattice components.

    Attributes
    ----------
    states: List[tuple]
        Every global state in enumeration order
    edges: List[Tuple[tuple, int, tuple]]
        Transitions ``(s, i, s')`` for each forbidden ``i``
    exhausted: List[Tuple[tuple, int]]
        Forbidden nodes with no value left to move to
    skeleton: networkx.DiGraph
        Order skeleton; edge attribute ``transition`` marks ``δ`` edges
    components: List[List[tuple]]
        Weakly connected components, each in enumeration order
    """

    def __init__(self, alg, g, states, edges, exhausted, forbidden):
        self.alg = alg
        self.g = g
        self.states = states
        self.index = {s: k for k, s in enumerate(states)}
        self.edges = edges
        self.exhausted = exhausted
        self.forbidden = forbidden
        self.transitions = nx.DiGraph()
        self.transitions.add_nodes_from(states)
        self.transitions.add_edges_from((s, t, {'node': i}) for s, i, t in edges)
        self.skeleton = self._build_skeleton()
        pieces = [sorted(c, key=self.index.__getitem__) for c in nx.weakly_connected_components(self.skeleton)]
        self.components = sorted(pieces, key=lambda c: self.index[c[0]])
        self._component_of = {s: k for k, c in enumerate(self.components) for s in c}

    def _build_skeleton(self):
        if self.alg.lattice != 'product':
            return self.transitions.copy()
        skeleton = nx.DiGraph()
        skeleton.add_nodes_from(self.states)
        for s in self.states:
            for i in self.g.nodes:
                domain = self.alg.local_domain(self.g, i)
                pos = domain.index(s[i - 1])
                if pos + 1 < len(domain):
                    t = replace(s, i, domain[pos + 1])
                    skeleton.add_edge(s, t, node=i, transition=self.transitions.has_edge(s, t))
        return skeleton

    def component_of(self, s):
        return self._component_of[s]

    def sinks(self, component):
        return [s for s in component if self.skeleton.out_degree(s) == 0]

    def sources(self, component):
        return [s for s in component if self.skeleton.in_degree(s) == 0]

    def supremum(self, component):
        sinks = self.sinks(component)
        return sinks[0] if len(sinks) == 1 else None

    def infimum(self, component):
        sources = self.sources(component)
        return sources[0] if len(sources) == 1 else None

    def states_above(self, s):
        """States strictly above ``s`` in its lattice, in enumeration order."""
        if self.alg.lattice == 'product':
            ranges = []
            for i in self.g.nodes:
                domain = self.alg.local_domain(self.g, i)
                ranges.append(domain[domain.index(s[i - 1]):])
            return [t for t in itertools.product(*ranges) if t != s]
        return sorted(nx.descendants(self.skeleton, s), key=self.index.__getitem__)

    def node_order(self, component):
        """Per-node strict order realized by the moves inside ``component``.

        For product lattices this is the natural order of the domains.
        """
        if self.alg.lattice == 'product':
            return None
        members = set(component)
        steps = {}
        for s, t, data in self.skeleton.edges(data=True):
            if s in members:
                i = data['node']
                steps.setdefault(i, nx.DiGraph()).add_edge(s[i - 1], t[i - 1])
        closure = {i: nx.transitive_closure(d, reflexive=False) for i, d in steps.items()}
        return lambda i, x, y: i in closure and closure[i].has_edge(x, y)

    def fmt(self, s):
        return self.alg.format_state(s)

    def fmt_edge(self, s, i, t):
        return '{} -[{}]-> {}'.format(self.fmt(s), i, self.fmt(t))

    def stats(self):
        return {
            'states': len(self.states),
            'edges': len(self.edges),
            'skeleton_edges': self.skeleton.number_of_edges(),
            'components': len(self.components)
        }

    def __repr__(self):
        return '<TransitionSystem {} states={} edges={} components={}>'.format(
            self.alg.name, len(self.states), len(self.edges), len(self.components))


def enumerate_system(alg, g, cap=ENUMERATION_CAP):
    """Enumerate every state and its single-node transitions.

    Raises
    ------
    CapacityError
        If the state space is larger than ``cap``
    """
    states = list(alg.states(g, cap))
    edges, exhausted, forbidden = [], [], {}
    for s in states:
        enabled = sorted(forbidden_nodes(alg, g, s))
        forbidden[s] = frozenset(enabled)
        for i in enabled:
            try:
                edges.append((s, i, replace(s, i, alg.move(g, s, i))))
            except NoSolution:
                exhausted.append((s, i))
    ts = TransitionSystem(alg, g, states, edges, exhausted, forbidden)
    log.info('%s on n=%d: %d states, %d transitions, %d components',
             alg.name, g.n, len(states), len(edges), len(ts.components))
    return ts


def component_suprema(ts):
    """The unique sink of every component.

    Raises
    ------
    LatticeCheckFailed
        If a component has more than one sink
    """
    suprema = set()
    for component in ts.components:
        sinks = ts.sinks(component)
        if len(sinks) != 1:
            raise LatticeCheckFailed(
                'component of {} has {} sinks'.format(ts.fmt(component[0]), len(sinks)),
                counterexample=[ts.fmt(s) for s in sinks])
        suprema.add(sinks[0])
    return suprema


def _joins(ts, sub, members):
    up = {s: {s} | nx.descendants(sub, s) for s in members}
    for a, b in itertools.combinations(members, 2):
        upper = up[a] & up[b]
        least = [u for u in upper if upper <= up[u]]
        if len(least) != 1:
            return '{} and {} have {} least upper bounds'.format(ts.fmt(a), ts.fmt(b), len(least))
    return None


def verify_lattice(ts, component):
    """Structural lattice checks on one component.

    Checks: acyclic order, unit single-node steps, a unique sink, a
    forbidden node at every state that is not optimal, joins for every
    pair, and a strictly decreasing potential along every transition.
    """
    report = Report({'states': len(component)})
    members = list(component)
    member_set = set(members)
    sub = ts.skeleton.subgraph(members)

    acyclic = nx.is_directed_acyclic_graph(sub)
    cycle = None
    if not acyclic:
        cycle = ' -> '.join(ts.fmt(u) for u, _ in nx.find_cycle(sub))
    report.add_check('acyclic-partial-order', acyclic, cycle)

    bad_steps = []
    for s, t, data in sub.edges(data=True):
        changed = [k + 1 for k, (x, y) in enumerate(zip(s, t)) if x != y]
        if len(changed) != 1 or not ts.alg.is_unit_step(changed[0], s[changed[0] - 1], t[changed[0] - 1]):
            bad_steps.append(ts.fmt_edge(s, data['node'], t))
    for s, i, t in ts.edges:
        if s in member_set and not ts.alg.is_unit_step(i, s[i - 1], t[i - 1]):
            bad_steps.append(ts.fmt_edge(s, i, t))
    report.add_check('single-node-unit-steps', not bad_steps, bad_steps[:DIVERGENCE_SAMPLES])

    sinks = ts.sinks(members)
    report.add_check('unique-supremum', len(sinks) == 1, [ts.fmt(s) for s in sinks])
    stuck = [ts.fmt(s) for s in members if not ts.forbidden[s] and not ts.alg.optimal(ts.g, s)]
    report.add_check('progress-at-non-optimal-states', not stuck, stuck[:DIVERGENCE_SAMPLES])

    if not acyclic:
        report.add_check('joins', False, 'skeleton has a cycle')
    elif len(members) > JOIN_CHECK_LIMIT:
        report.add_note('joins not checked on a component of {} states'.format(len(members)))
    else:
        problem = _joins(ts, sub, members)
        report.add_check('joins', problem is None, problem)

    rising = []
    for s, i, t in ts.edges:
        if s in member_set and not ts.alg.potential(ts.g, t) < ts.alg.potential(ts.g, s):
            rising.append('{} (rank {} -> {})'.format(
                ts.fmt_edge(s, i, t), ts.alg.potential(ts.g, s), ts.alg.potential(ts.g, t)))
    report.add_check('potential-decreases', not rising, rising[:DIVERGENCE_SAMPLES])

    order = ts.node_order(members)
    disagree = []
    if acyclic:
        for s in members:
            for t in nx.descendants(sub, s):
                if not state_less_than(s, t, order):
                    disagree.append('{} !< {}'.format(ts.fmt(s), ts.fmt(t)))
    report.add_check('order-agrees-with-reachability', acyclic and not disagree, disagree[:DIVERGENCE_SAMPLES])

    report.update_stats(
        edges=sub.number_of_edges(),
        supremum=ts.fmt(sinks[0]) if len(sinks) == 1 else None,
        infimum=ts.fmt(ts.infimum(members)) if ts.infimum(members) is not None else None
    )
    return report


def verify_strict_order(ts, component, limit=ORDER_CHECK_LIMIT):
    """Irreflexivity, antisymmetry and transitivity of ``state_less_than``.

    Components above ``limit`` states are checked on an evenly spaced
    subset of ``limit`` states.
    """
    report = Report()
    members = list(component)
    if len(members) > limit:
        report.add_note('strict order checked on {} of {} states'.format(limit, len(members)))
        stride = len(members) / limit
        members = [members[int(k * stride)] for k in range(limit)]
    order = ts.node_order(component)
    less = {(a, b): state_less_than(a, b, order) for a in members for b in members}
    reflexive = [ts.fmt(a) for a in members if less[a, a]]
    report.add_check('irreflexive', not reflexive, reflexive[:DIVERGENCE_SAMPLES])
    symmetric = ['{} <> {}'.format(ts.fmt(a), ts.fmt(b))
                 for a, b in itertools.combinations(members, 2) if less[a, b] and less[b, a]]
    report.add_check('antisymmetric', not symmetric, symmetric[:DIVERGENCE_SAMPLES])
    broken = []
    for a, b, c in itertools.product(members, repeat=3):
        if less[a, b] and less[b, c] and not less[a, c]:
            broken.append('{} < {} < {}'.format(ts.fmt(a), ts.fmt(b), ts.fmt(c)))
            break
    report.add_check('transitive', not broken, broken)
    return report


def covering_pair_count(n, k):
    """Covering pairs of the product order on ``{1..k}^n``."""
    return n * (k - 1) * k ** (n - 1)


def _bound_checks(report, alg, g, longest, witness):
    formula = g.n * sum(m - 1 for m in alg.domain_sizes(g))
    bound = alg.move_bound(g)
    report.update_stats(longest_path=longest, move_bound=bound, domain_bound=formula)
    report.add_check('longest-run-within-domain-bound', longest <= formula, witness if longest > formula else None)
    if bound != formula:
        report.add_check('longest-run-within-move-bound', longest <= bound, witness if longest > bound else None)
    return report


def verify_bounds(source, alg=None, g=None):
    """Longest execution against ``n * sum(m'_j - 1)`` and the algorithm's own bound.

    Parameters
    ----------
    source: TransitionSystem or Iterable[ExecutionTrace]
        Either an enumerated system (longest path over its transitions)
        or finished traces (longest trace)
    alg, g: Optional
        Required when ``source`` is a collection of traces
    """
    report = Report()
    if isinstance(source, TransitionSystem):
        alg, g = source.alg, source.g
        if not nx.is_directed_acyclic_graph(source.transitions):
            cycle = ' -> '.join(source.fmt(u) for u, _ in nx.find_cycle(source.transitions))
            report.add_check('transitions-acyclic', False, cycle)
            return report
        report.add_check('transitions-acyclic', True)
        path = nx.dag_longest_path(source.transitions)
        longest = max(len(path) - 1, 0)
        witness = [source.fmt(s) for s in path]
    else:
        traces = list(source)
        longest, witness = 0, None
        for trace in traces:
            if len(trace.steps) >= longest:
                longest = len(trace.steps)
                witness = trace.to_dict()
    return _bound_checks(report, alg, g, longest, witness)


def verify_semantic_forbidden(ts, predicate, label='P', require_progress=True):
    """Compare guard-forbidden nodes with brute-force forbidden nodes.

    Every state violating ``predicate`` must have a forbidden node by
    the guards, and every non-supremum of an induced lattice must have
    one too. With ``require_progress`` off only the relation between
    the two node sets is reported, as data.
    """
    report = Report()
    truth = {s: bool(predicate(s)) for s in ts.states}
    lookup = truth.__getitem__

    violations = [ts.fmt(s) for s in ts.states if not truth[s] and not ts.forbidden[s]]
    if require_progress:
        report.add_check('{}-violations-have-forbidden-nodes'.format(label), not violations,
                         violations[:DIVERGENCE_SAMPLES])
    if require_progress and ts.alg.lattice != 'product':
        suprema = {ts.supremum(c) for c in ts.components}
        idle = [ts.fmt(s) for s in ts.states if s not in suprema and not ts.forbidden[s]]
        report.add_check('non-suprema-have-forbidden-nodes', not idle, idle[:DIVERGENCE_SAMPLES])

    tally = {'equal': 0, 'guards_within_semantic': 0, 'semantic_within_guards': 0, 'diverge': 0}
    samples = []
    for s in ts.states:
        above = ts.states_above(s)
        semantic = frozenset(i for i in ts.g.nodes if semantic_forbidden(i, s, lookup, above))
        syntactic = ts.forbidden[s]
        if semantic == syntactic:
            tally['equal'] += 1
        elif syntactic < semantic:
            tally['guards_within_semantic'] += 1
        elif semantic < syntactic:
            tally['semantic_within_guards'] += 1
        else:
            tally['diverge'] += 1
        if semantic != syntactic and len(samples) < DIVERGENCE_SAMPLES:
            samples.append('{}: guards {} semantic {}'.format(ts.fmt(s), sorted(syntactic), sorted(semantic)))
    report.update_stats(**{'{}_{}'.format(label, k): v for k, v in tally.items()})
    for sample in samples:
        report.add_note('{}: {}'.format(label, sample))
    return report


def export_dot(ts, components=None):
    """Render components as DOT, one cluster per component.

    Suprema are drawn with a double border. On product lattices the
    transitions are drawn in blue over the covering pairs.
    """
    components = ts.components if components is None else components
    if not components:
        return ''
    dot = graphviz.Digraph(name=ts.alg.name)
    # node ids are enumeration indices; state text may contain port separators
    key = lambda s: 's{}'.format(ts.index[s])
    dot.attr(rankdir='BT')
    for k, component in enumerate(components):
        with dot.subgraph(name='cluster_{}'.format(k)) as c:
            c.attr(label='component {}'.format(k))
            supremum = ts.supremum(component)
            for s in component:
                if s == supremum:
                    c.node(key(s), label=ts.fmt(s), peripheries='2')
                else:
                    c.node(key(s), label=ts.fmt(s))
            members = set(component)
            edges = sorted(
                ((s, t, data) for s, t, data in ts.skeleton.edges(data=True) if s in members),
                key=lambda e: (ts.index[e[0]], ts.index[e[1]]))
            for s, t, data in edges:
                if ts.alg.lattice == 'product' and data.get('transition'):
                    c.edge(key(s), key(t), color='blue')
                else:
                    c.edge(key(s), key(t))
    return dot.source
