"""Stable (man-optimal) marriage as a lattice linear predicate.

``s[m]`` is an index into man ``m``'s preference list, so ``(1, ..., 1)``
means every man proposes to his first choice. Comparisons between men
are made on the women they propose to.
"""
import logging
from pathlib import Path

from ..errors import InputError, NoSolution, ParseError
from ..framework import AlgorithmSpec, replace
from ..graph import Graph

log = logging.getLogger(__name__)

__all__ = [
    'SmpInstance', 'EXHAUSTED', 'proposal_target', 'forbidden_smp',
    'advance', 'satisfies_psmp', 'is_stable_matching', 'gale_shapley',
    'parse_preferences', 'read_preferences', 'SmpAlgorithm',
    'EXAMPLE_PREFERENCES', 'DOCUMENTED_RUNS', 'DISPUTED_RUNS', 'example_instance'
]


class _Exhausted:
    def __repr__(self):
        return 'EXHAUSTED'

    def __bool__(self):
        return False


EXHAUSTED = _Exhausted()


def _check_permutation(perm, n, what):
    if sorted(perm) != list(range(1, n + 1)):
        raise InputError('{} is not a permutation of 1..{}: {}'.format(what, n, perm))


class SmpInstance:
    """Complete preference lists for ``n`` men and ``n`` women.

    Parameters
    ----------
    men_prefs: List[List[int]]
        For each man, women indices best first
    women_prefs: List[List[int]]
        For each woman, men indices best first
    """

    def __init__(self, men_prefs, women_prefs):
        self.n = len(men_prefs)
        if self.n < 1 or len(women_prefs) != self.n:
            raise InputError('need n >= 1 men and as many women, got {} and {}'.format(self.n, len(women_prefs)))
        for m, perm in enumerate(men_prefs, 1):
            _check_permutation(perm, self.n, 'preference list of man {}'.format(m))
        for w, perm in enumerate(women_prefs, 1):
            _check_permutation(perm, self.n, 'preference list of woman {}'.format(w))
        self.men_prefs = [tuple(p) for p in men_prefs]
        self.women_prefs = [tuple(p) for p in women_prefs]
        # women_ranks[w - 1][m - 1] is woman w's rank of man m, 1 best
        self.women_ranks = [
            tuple(p.index(m) + 1 for m in range(1, self.n + 1)) for p in self.women_prefs
        ]

    def rank(self, w, m):
        return self.women_ranks[w - 1][m - 1]

    def graph(self):
        """Every man reads every other man: the complete graph."""
        return Graph.complete(self.n)

    def to_text(self):
        lines = [str(self.n)]
        lines += [' '.join(map(str, p)) for p in self.men_prefs]
        lines += [' '.join(map(str, p)) for p in self.women_prefs]
        return '\n'.join(lines) + '\n'

    def __eq__(self, other):
        return isinstance(other, SmpInstance) and self.men_prefs == other.men_prefs \
            and self.women_prefs == other.women_prefs

    def __hash__(self):
        return hash((tuple(self.men_prefs), tuple(self.women_prefs)))

    def __repr__(self):
        return '<SmpInstance n={}>'.format(self.n)


def proposal_target(inst, s, m):
    return inst.men_prefs[m - 1][s[m - 1] - 1]


def forbidden_smp(inst, s, m):
    """Another man proposes to the same woman and she ranks him better."""
    w = proposal_target(inst, s, m)
    mine = inst.rank(w, m)
    return any(
        other != m and proposal_target(inst, s, other) == w and inst.rank(w, other) < mine
        for other in range(1, inst.n + 1)
    )


def advance(inst, s, m):
    """Move man ``m`` to his next choice, or ``EXHAUSTED`` past his last."""
    if s[m - 1] >= inst.n:
        return EXHAUSTED
    return replace(s, m, s[m - 1] + 1)


def satisfies_psmp(inst, s):
    targets = [proposal_target(inst, s, m) for m in range(1, inst.n + 1)]
    return len(set(targets)) == len(targets)


def is_stable_matching(inst, s):
    """Perfect matching with no blocking pair."""
    if not satisfies_psmp(inst, s):
        return False
    husband = {proposal_target(inst, s, m): m for m in range(1, inst.n + 1)}
    for m in range(1, inst.n + 1):
        # women m prefers to his current partner
        for w in inst.men_prefs[m - 1][:s[m - 1] - 1]:
            if inst.rank(w, m) < inst.rank(w, husband[w]):
                return False
    return True


def gale_shapley(inst):
    """Man-proposing deferred acceptance.

    Returns the man-optimal matching as a proposal-index state, or
    None if some man runs out of choices (never for complete lists).
    """
    next_choice = [0] * inst.n
    suitor = {}
    free = list(range(1, inst.n + 1))
    while free:
        m = free.pop(0)
        if next_choice[m - 1] == inst.n:
            return None
        w = inst.men_prefs[m - 1][next_choice[m - 1]]
        next_choice[m - 1] += 1
        current = suitor.get(w)
        if current is None:
            suitor[w] = m
        elif inst.rank(w, m) < inst.rank(w, current):
            suitor[w] = m
            free.append(current)
        else:
            free.append(m)
    state = [0] * inst.n
    for w, m in suitor.items():
        state[m - 1] = inst.men_prefs[m - 1].index(w) + 1
    return tuple(state)


def parse_preferences(text, filename=None):
    """Parse ``n`` followed by ``n`` men lines and ``n`` women lines."""
    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith('#'):
            continue
        try:
            rows.append(([int(p) for p in line.split()], lineno))
        except ValueError:
            raise ParseError('expected integers, got {!r}'.format(line), filename, lineno)
    if not rows:
        raise ParseError('missing "n" header', filename)
    header, header_line = rows[0]
    if len(header) != 1 or header[0] < 1:
        raise ParseError('expected a single positive integer n', filename, header_line)
    n = header[0]
    body = rows[1:]
    if len(body) != 2 * n:
        last = body[-1][1] if body else header_line
        raise ParseError('expected {} preference lines, found {}'.format(2 * n, len(body)), filename, last)
    for (perm, lineno) in body:
        if sorted(perm) != list(range(1, n + 1)):
            raise ParseError('not a permutation of 1..{}: {}'.format(n, ' '.join(map(str, perm))), filename, lineno)
    return SmpInstance([p for p, _ in body[:n]], [p for p, _ in body[n:]])


def read_preferences(path):
    path = Path(path)
    try:
        text = path.read_text(encoding='utf8')
    except OSError as e:
        raise InputError('cannot read preference file {}: {}'.format(path, e.strerror))
    except UnicodeDecodeError as e:
        raise ParseError('not UTF-8 text (byte {} at offset {})'.format(hex(e.object[e.start]), e.start), str(path))
    inst = parse_preferences(text, filename=str(path))
    log.debug('read preferences %s: n=%d', path, inst.n)
    return inst


class SmpAlgorithm(AlgorithmSpec):
    """Forbidden men advance along their lists; the lattice is the product order.

    Parameters
    ----------
    instance: SmpInstance
        The preference lists. The matching graph is ``instance.graph()``.
    """
    name = 'smp'
    read_radius = 1
    lattice = 'product'

    def __init__(self, instance):
        self.instance = instance

    def local_domain(self, g, i):
        return tuple(range(1, self.instance.n + 1))

    def forbidden(self, g, s, i):
        return forbidden_smp(self.instance, s, i)

    def move(self, g, s, i):
        nxt = advance(self.instance, s, i)
        if nxt is EXHAUSTED:
            raise NoSolution(s, i)
        return nxt[i - 1]

    def optimal(self, g, s):
        return satisfies_psmp(self.instance, s)

    def stable(self, s):
        return is_stable_matching(self.instance, s)

    def potential(self, g, s):
        return -sum(s)

    def fingerprint(self):
        return 'smp:' + self.instance.to_text().replace('\n', ';')


EXAMPLE_PREFERENCES = """\
3
2 1 3
2 1 3
1 3 2
2 3 1
1 2 3
3 2 1
"""

# initial state, documented outcome, documented final state
DOCUMENTED_RUNS = (
    ('1,1,1', 'Converged', '1,2,2'),
    ('3,1,2', 'NoSolution', None),
)

# documented as terminal, but T is beaten at Z by A and has no choice left
DISPUTED_RUNS = (
    ('1,2,3', 'Converged', '1,2,3'),
)


def example_instance():
    """Three men (A, J, T) and three women (K, Z, M) as numbered lists."""
    return parse_preferences(EXAMPLE_PREFERENCES)
