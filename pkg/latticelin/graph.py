import hashlib
import logging
import random
from pathlib import Path

import networkx as nx

from .errors import InputError, ParseError

log = logging.getLogger(__name__)

__all__ = ['Graph', 'adjacency', 'k_hop', 'read_graph', 'parse_graph', 'random_connected_graph']


class Graph:
    """An undirected simple graph on the nodes ``1..n``.

    The node index is also the node ID, so ``id.i > id.j`` is plain
    integer comparison.

    Parameters
    ----------
    node_count: int
        Number of nodes, at least 1
    edges: Iterable[Tuple[int, int]]
        Unordered endpoint pairs, 1-based. Self-loops and
        duplicates are rejected.
    """

    def __init__(self, node_count, edges=()):
        if not isinstance(node_count, int) or node_count < 1:
            raise InputError('node count must be a positive integer, got {!r}'.format(node_count))
        self.n = node_count
        self._graph = nx.Graph()
        self._graph.add_nodes_from(range(1, node_count + 1))
        for u, v in edges:
            self._add_edge(u, v)
        self._adj = {i: frozenset(self._graph.adj[i]) for i in self.nodes}
        self._balls = {}

    def _add_edge(self, u, v):
        for x in (u, v):
            if not 1 <= x <= self.n:
                raise InputError('edge endpoint {} outside [1, {}]'.format(x, self.n))
        if u == v:
            raise InputError('self-loop on node {}'.format(u))
        if self._graph.has_edge(u, v):
            raise InputError('duplicate edge {{{}, {}}}'.format(min(u, v), max(u, v)))
        self._graph.add_edge(u, v)

    @property
    def nodes(self):
        return range(1, self.n + 1)

    @property
    def edges(self):
        """Sorted list of ``(u, v)`` pairs with ``u < v``."""
        return sorted((min(u, v), max(u, v)) for u, v in self._graph.edges)

    def check_node(self, i):
        if not isinstance(i, int) or not 1 <= i <= self.n:
            raise InputError('node index {!r} outside [1, {}]'.format(i, self.n))
        return i

    def adjacency(self, i):
        """Neighbors of ``i``; never contains ``i``."""
        self.check_node(i)
        return self._adj[i]

    def k_hop(self, i, x):
        """Nodes within ``x`` hops of ``i``, excluding ``i``.

        Unreachable nodes are excluded, so disconnected graphs are fine.
        """
        self.check_node(i)
        if not isinstance(x, int) or x < 1:
            raise InputError('hop count must be a positive integer, got {!r}'.format(x))
        key = (i, x)
        if key not in self._balls:
            lengths = nx.single_source_shortest_path_length(self._graph, i, cutoff=x)
            self._balls[key] = frozenset(j for j in lengths if j != i)
        return self._balls[key]

    def to_networkx(self):
        return self._graph.copy()

    def is_connected(self):
        return nx.is_connected(self._graph)

    def fingerprint(self):
        text = '{} {}'.format(self.n, ' '.join('{}-{}'.format(u, v) for u, v in self.edges))
        return hashlib.sha256(text.encode('utf8')).hexdigest()[:16]

    def to_text(self):
        lines = ['{} {}'.format(self.n, len(self.edges))]
        lines += ['{} {}'.format(u, v) for u, v in self.edges]
        return '\n'.join(lines) + '\n'

    @classmethod
    def complete(cls, n):
        return cls(n, ((u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)))

    @classmethod
    def path(cls, n):
        return cls(n, ((i, i + 1) for i in range(1, n)))

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, tuple(self.edges)))

    def __repr__(self):
        return '<Graph n={} edges={}>'.format(self.n, self.edges)


def adjacency(g, i):
    return g.adjacency(i)


def k_hop(g, i, x):
    return g.k_hop(i, x)


def parse_graph(text, filename=None):
    """Parse the ``n m`` / ``u v`` edge list format.

    Lines starting with ``#`` and blank lines are skipped. Errors
    carry the 1-based line number of the offending line.
    """
    header = None
    edges = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith('#'):
            continue
        parts = line.split()
        try:
            numbers = [int(p) for p in parts]
        except ValueError:
            raise ParseError('expected integers, got {!r}'.format(line), filename, lineno)
        if len(numbers) != 2:
            raise ParseError('expected 2 fields, got {}'.format(len(numbers)), filename, lineno)
        if header is None:
            header = numbers, lineno
            continue
        edges.append((numbers, lineno))

    if header is None:
        raise ParseError('missing "n m" header', filename)
    (n, m), header_line = header
    if n < 1 or m < 0:
        raise ParseError('invalid header "{} {}"'.format(n, m), filename, header_line)
    if len(edges) != m:
        last = edges[-1][1] if edges else header_line
        raise ParseError('header declares {} edges, found {}'.format(m, len(edges)), filename, last)

    g = Graph(n)
    for (u, v), lineno in edges:
        try:
            g._add_edge(u, v)
        except InputError as e:
            raise ParseError(e.error, filename, lineno)
    g._adj = {i: frozenset(g._graph.adj[i]) for i in g.nodes}
    return g


def read_graph(path):
    path = Path(path)
    try:
        text = path.read_text(encoding='utf8')
    except OSError as e:
        raise InputError('cannot read graph file {}: {}'.format(path, e.strerror))
    except UnicodeDecodeError as e:
        raise ParseError('not UTF-8 text (byte {} at offset {})'.format(hex(e.object[e.start]), e.start), str(path))
    g = parse_graph(text, filename=str(path))
    log.debug('read graph %s: n=%d, %d edges', path, g.n, len(g.edges))
    return g


def random_connected_graph(n, seed, p=0.4):
    """A connected G(n, p) sample relabelled to ``1..n``.

    Resamples with derived seeds until the sample is connected.
    """
    rng = random.Random(seed)
    while True:
        sample = nx.gnp_random_graph(n, p, seed=rng.randrange(2 ** 32))
        if n == 1 or nx.is_connected(sample):
            return Graph(n, ((u + 1, v + 1) for u, v in sample.edges))
