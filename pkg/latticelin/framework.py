"""Algorithm-agnostic core: global states, the algorithm interface,
the semantic forbidden predicate and state-space helpers.

A global state is a plain tuple with one local state per node, so
states are immutable, hashable and safe to share.
"""
import itertools
import logging
from collections import namedtuple
from math import prod

from .errors import CapacityError, InputError, ParseError

log = logging.getLogger(__name__)

ENUMERATION_CAP = 2 ** 20

__all__ = [
    'ENUMERATION_CAP', 'Move', 'AlgorithmSpec', 'state_less_than',
    'forbidden_nodes', 'semantic_forbidden', 'replace', 'random_state',
    'verify_locality'
]


class Move(namedtuple('Move', 'step node old new')):
    """One node updating its local state. ``old != new``."""
    __slots__ = ()

    def to_dict(self, alg):
        return {
            'step': self.step,
            'node': self.node,
            'from': alg.format_local(self.old),
            'to': alg.format_local(self.new)
        }


def replace(s, i, value):
    """Return ``s`` with node ``i`` (1-based) set to ``value``."""
    return s[:i - 1] + (value,) + s[i:]


class AlgorithmSpec:
    """Base class for a pluggable rule set.

    Subclasses provide the local domain, the syntactic guard
    (``forbidden``), the minimum-magnitude ``move`` and the
    ``optimal`` predicate. Guards of node ``i`` may only read
    ``k_hop(g, i, read_radius) | {i}``.

    Attributes
    ----------
    name: str
        Algorithm name used in traces and reports
    read_radius: int
        Hop radius of every guard
    lattice: str
        ``'induced'`` when the lattice is the transition skeleton,
        ``'product'`` when it is the product order of the local domains
    """
    name = None
    read_radius = 1
    lattice = 'induced'

    def local_domain(self, g, i):
        """Ascending tuple of the values node ``i`` can hold."""
        raise NotImplementedError

    def forbidden(self, g, s, i):
        raise NotImplementedError

    def move(self, g, s, i):
        """New local value of ``i``; only called when ``i`` is forbidden."""
        raise NotImplementedError

    def optimal(self, g, s):
        raise NotImplementedError

    def potential(self, g, s):
        """Variant function that strictly decreases along every move."""
        raise NotImplementedError

    def domain_sizes(self, g):
        """Sizes ``m'_1..m'_r`` of the variables each node holds."""
        return [len(self.local_domain(g, 1))]

    def move_bound(self, g):
        """Theoretical move bound ``n * sum(m'_j - 1)``."""
        return g.n * sum(m - 1 for m in self.domain_sizes(g))

    def is_unit_step(self, i, old, new):
        return new == old + 1

    def format_local(self, value):
        return str(value)

    def parse_local(self, token):
        try:
            return int(token)
        except ValueError:
            raise InputError('invalid {} token {!r}'.format(self.name, token))

    def fingerprint(self):
        return self.name

    # derived helpers #

    def forbidden_set(self, g, s):
        return frozenset(i for i in g.nodes if self.forbidden(g, s, i))

    def format_state(self, s):
        return ','.join(self.format_local(v) for v in s)

    def parse_state(self, text, g):
        tokens = [t.strip() for t in text.strip().split(',')]
        if len(tokens) != g.n:
            raise ParseError('state {!r} has {} entries, expected {}'.format(text, len(tokens), g.n))
        s = tuple(self.parse_local(t) for t in tokens)
        return self.check_state(g, s)

    def check_state(self, g, s):
        if len(s) != g.n:
            raise InputError('state has {} entries, expected {}'.format(len(s), g.n))
        for i, value in enumerate(s, 1):
            if value not in self.local_domain(g, i):
                raise InputError('value {!r} of node {} outside its domain'.format(value, i))
        return tuple(s)

    def state_space_size(self, g):
        return prod(len(self.local_domain(g, i)) for i in g.nodes)

    def states(self, g, cap=ENUMERATION_CAP):
        """Every global state in lexicographic domain order."""
        size = self.state_space_size(g)
        if size > cap:
            raise CapacityError('{} states exceed the enumeration cap of {}'.format(size, cap), size, cap)
        return itertools.product(*(self.local_domain(g, i) for i in g.nodes))

    def __repr__(self):
        return '<{} {}>'.format(type(self).__name__, self.fingerprint())


def state_less_than(a, b, order=None):
    """``a < b`` in the componentwise order.

    Parameters
    ----------
    a, b: tuple
        Global states of equal length
    order: Optional[Callable[[int, Any, Any], bool]]
        Strict per-node order ``order(i, x, y)``, defaults to ``x < y``
    """
    if len(a) != len(b):
        raise InputError('states of length {} and {} are not comparable'.format(len(a), len(b)))
    if order is None:
        order = lambda i, x, y: x < y  # noqa
    strict = False
    for i, (x, y) in enumerate(zip(a, b), 1):
        if x == y:
            continue
        if not order(i, x, y):
            return False
        strict = True
    return strict


def forbidden_nodes(alg, g, s):
    """Nodes whose guard is enabled in ``s``."""
    return alg.forbidden_set(g, s)


def semantic_forbidden(i, s, predicate, above, cap=ENUMERATION_CAP):
    """Brute-force Forbidden(i, s, P).

    True iff ``P(s)`` fails and every state strictly above ``s``
    that keeps node ``i`` unchanged fails ``P`` as well.

    Parameters
    ----------
    i: int
        Node index
    s: tuple
        Global state
    predicate: Callable[[tuple], bool]
        The predicate P
    above: TransitionSystem or Iterable[tuple]
        Source of the states strictly above ``s``
    """
    if predicate(s):
        return False
    if hasattr(above, 'states_above'):
        above = above.states_above(s)
    checked = 0
    for t in above:
        checked += 1
        if checked > cap:
            raise CapacityError('more than {} states above {}'.format(cap, s), checked, cap)
        if t[i - 1] == s[i - 1] and predicate(t):
            return False
    return True


def random_state(alg, g, rng):
    return tuple(rng.choice(alg.local_domain(g, i)) for i in g.nodes)


def verify_locality(alg, g, states):
    """Perturb nodes outside each guard's read ball.

    Returns a list of counterexamples ``(state, node, perturbed)``,
    empty when every guard is local.
    """
    failures = []
    for s in states:
        for i in g.nodes:
            ball = g.k_hop(i, alg.read_radius) | {i}
            expected = alg.forbidden(g, s, i)
            for j in g.nodes:
                if j in ball:
                    continue
                for value in alg.local_domain(g, j):
                    if value == s[j - 1]:
                        continue
                    t = replace(s, j, value)
                    if alg.forbidden(g, t, i) != expected:
                        failures.append((s, i, t))
    if failures:
        log.warning('%s: %d locality violations', alg.name, len(failures))
    return failures
