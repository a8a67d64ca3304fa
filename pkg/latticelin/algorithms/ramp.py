"""Counters that only climb: a tight witness for the multi-variable bound.

Every node holds ``r`` counters, counter ``j`` ranging over
``1..caps[j]``. A node with a counter below its cap moves when it has
the largest ID among such nodes in its closed neighborhood; the move
raises its lowest-index deficient counter by one. Every execution
therefore takes exactly the total deficit in moves.
"""
import itertools

from ..errors import InputError
from ..framework import AlgorithmSpec
from ..graph import Graph

__all__ = ['RampAlgorithm', 'ramp_fixture']


class RampAlgorithm(AlgorithmSpec):
    name = 'ramp'
    read_radius = 1
    lattice = 'induced'

    def __init__(self, caps, node_count=None):
        caps = tuple(caps)
        if not caps or any(not isinstance(c, int) or c < 1 for c in caps):
            raise InputError('ramp caps must be positive integers, got {}'.format(caps))
        self.caps = caps
        self.node_count = node_count
        self._domain = tuple(itertools.product(*(range(1, c + 1) for c in caps)))

    def graph(self):
        """The path on ``node_count`` nodes."""
        if self.node_count is None:
            raise InputError('ramp fixture has no node count')
        return Graph.path(self.node_count)

    def deficient(self, value):
        return any(v < c for v, c in zip(value, self.caps))

    def local_domain(self, g, i):
        return self._domain

    def forbidden(self, g, s, i):
        if not self.deficient(s[i - 1]):
            return False
        return all(i > j or not self.deficient(s[j - 1]) for j in g.adjacency(i))

    def move(self, g, s, i):
        value = list(s[i - 1])
        for k, cap in enumerate(self.caps):
            if value[k] < cap:
                value[k] += 1
                break
        return tuple(value)

    def optimal(self, g, s):
        return not any(self.deficient(v) for v in s)

    def potential(self, g, s):
        return sum(c - v for value in s for v, c in zip(value, self.caps))

    def domain_sizes(self, g):
        return list(self.caps)

    def is_unit_step(self, i, old, new):
        diffs = [b - a for a, b in zip(old, new) if a != b]
        return diffs == [1]

    def format_local(self, value):
        return ':'.join(map(str, value))

    def parse_local(self, token):
        try:
            value = tuple(int(p) for p in token.split(':'))
        except ValueError:
            raise InputError('invalid ramp token {!r}'.format(token))
        if len(value) != len(self.caps):
            raise InputError('ramp token {!r} needs {} counters'.format(token, len(self.caps)))
        return value

    def fingerprint(self):
        return 'ramp:' + ','.join(map(str, self.caps))


def ramp_fixture(n, caps):
    """Ramp rules for ``n`` nodes with counter caps ``caps``."""
    if not isinstance(n, int) or n < 1:
        raise InputError('ramp fixture needs n >= 1, got {!r}'.format(n))
    return RampAlgorithm(caps, node_count=n)
