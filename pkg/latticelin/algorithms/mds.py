"""Self-stabilizing minimal dominating set, fully lattice linear.

Each node holds ``st.i`` in ``{OUT, IN}``. A node is unsatisfied when
it can leave the set without breaking domination (removable) or when
it is out and undominated (addable). The unsatisfied node with the
largest ID in its 2-hop ball flips.
"""
import networkx as nx

from ..errors import InputError
from ..framework import AlgorithmSpec, replace

OUT = 0
IN = 1
TOKENS = {OUT: 'OUT', IN: 'IN'}
VALUES = {'OUT': OUT, 'IN': IN}

__all__ = [
    'OUT', 'IN', 'removable', 'addable', 'unsatisfied', 'forbidden_ds',
    'flip', 'state_value_ds', 'rank_ds', 'is_minimal_dominating',
    'MdsAlgorithm'
]


def removable(g, s, i):
    """``i`` is IN and every ``j`` in ``Adj_i | {i}`` stays dominated without it."""
    if s[i - 1] != IN:
        return False
    for j in g.adjacency(i) | {i}:
        if j != i and s[j - 1] == IN:
            continue
        if any(s[k - 1] == IN for k in g.adjacency(j) if k != i):
            continue
        return False
    return True


def addable(g, s, i):
    """``i`` is OUT and has no IN neighbor."""
    return s[i - 1] == OUT and all(s[j - 1] == OUT for j in g.adjacency(i))


def unsatisfied(g, s, i):
    return removable(g, s, i) or addable(g, s, i)


def forbidden_ds(g, s, i):
    """Unsatisfied, and the largest ID among unsatisfied nodes within 2 hops."""
    if not unsatisfied(g, s, i):
        return False
    return all(i > j or not unsatisfied(g, s, j) for j in g.k_hop(i, 2))


def flip(s, i):
    return replace(s, i, OUT if s[i - 1] == IN else IN)


def state_value_ds(g, s, i):
    return 1 if unsatisfied(g, s, i) else 0


def rank_ds(g, s):
    return sum(state_value_ds(g, s, i) for i in g.nodes)


def is_minimal_dominating(g, s):
    """Independent oracle built on networkx, not on the guards above."""
    graph = g.to_networkx()
    chosen = {i for i in g.nodes if s[i - 1] == IN}
    if not nx.is_dominating_set(graph, chosen):
        return False
    return not any(nx.is_dominating_set(graph, chosen - {v}) for v in chosen)


class MdsAlgorithm(AlgorithmSpec):
    """Minimal dominating set rules plugged into the generic engine."""
    name = 'mds'
    # Forbidden-DS reads Unsatisfied-DS of 2-hop nodes, which reads 2 more hops
    read_radius = 4
    lattice = 'induced'

    def local_domain(self, g, i):
        return (OUT, IN)

    def forbidden(self, g, s, i):
        return forbidden_ds(g, s, i)

    def forbidden_set(self, g, s):
        unsat = {i for i in g.nodes if unsatisfied(g, s, i)}
        return frozenset(i for i in unsat if all(i > j for j in g.k_hop(i, 2) & unsat))

    def move(self, g, s, i):
        return flip(s, i)[i - 1]

    def optimal(self, g, s):
        return is_minimal_dominating(g, s)

    def potential(self, g, s):
        return rank_ds(g, s)

    def move_bound(self, g):
        return g.n

    def is_unit_step(self, i, old, new):
        return old != new

    def format_local(self, value):
        return TOKENS[value]

    def parse_local(self, token):
        try:
            return VALUES[token]
        except KeyError:
            raise InputError('invalid mds token {!r}, expected IN or OUT'.format(token))
