import os
import random
import unittest
from pathlib import Path

from dotenv import find_dotenv, load_dotenv
from hypothesis import given, settings, strategies as st

from latticelin.algorithms import MdsAlgorithm
from latticelin.algorithms.mds import (IN, OUT, addable, flip, forbidden_ds, is_minimal_dominating,
                                       rank_ds, removable, unsatisfied)
from latticelin.graph import Graph, random_connected_graph, read_graph
from latticelin.errors import BoundViolation, ConflictError
from latticelin.scheduler import Daemon, exhaustive_schedules, run

load_dotenv(find_dotenv('.env'))

DATA = Path(__file__).parent / 'data'
CORPUS_GRAPHS = int(os.getenv('LATTICELIN_CORPUS_GRAPHS', 50))
SAMPLES = int(os.getenv('LATTICELIN_SAMPLES', 200))

I, O = IN, OUT


class TestRules(unittest.TestCase):
    """Tests the guards and the rank on hand-checked states"""
    def setUp(self):
        self.mds = MdsAlgorithm()
        self.g4 = read_graph(DATA / 'g4.txt')
        self.path4 = read_graph(DATA / 'path4.txt')

    def test_all_in(self):
        s = (I, I, I, I)
        self.assertTrue(all(removable(self.g4, s, i) for i in self.g4.nodes))
        self.assertEqual(self.mds.forbidden_set(self.g4, s), {2, 4})
        self.assertEqual(rank_ds(self.g4, s), 4)

    def test_all_out(self):
        s = (O, O, O, O)
        self.assertTrue(all(addable(self.g4, s, i) for i in self.g4.nodes))
        self.assertEqual(self.mds.forbidden_set(self.g4, s), {2, 4})

    def test_rank(self):
        self.assertEqual(rank_ds(self.g4, (I, O, I, I)), 2)
        self.assertEqual(rank_ds(self.g4, (I, O, I, O)), 0)

    def test_minimal_dominating(self):
        for s in [(I, O, I, O), (O, I, O, I), (O, I, I, O), (I, O, O, I)]:
            self.assertTrue(is_minimal_dominating(self.g4, s))
        self.assertFalse(is_minimal_dominating(self.g4, (I, I, I, I)))
        self.assertFalse(is_minimal_dominating(self.g4, (O, O, O, O)))

    def test_rank_zero_iff_minimal(self):
        for s in self.mds.states(self.path4):
            self.assertEqual(rank_ds(self.path4, s) == 0, is_minimal_dominating(self.path4, s))

    def test_rank_can_stay_flat(self):
        # node 4 joins and node 2 turns removable: the count stays at 2
        s = (I, I, O, O)
        self.assertEqual(self.mds.forbidden_set(self.path4, s), {1, 4})
        self.assertEqual(rank_ds(self.path4, s), 2)
        self.assertEqual(rank_ds(self.path4, flip(s, 4)), 2)

    def test_forbidden_set_matches_guard(self):
        for s in self.mds.states(self.path4):
            expected = {i for i in self.path4.nodes if forbidden_ds(self.path4, s, i)}
            self.assertEqual(self.mds.forbidden_set(self.path4, s), expected)

    def test_mover_is_satisfied_after_flip(self):
        for s in self.mds.states(self.path4):
            for i in self.mds.forbidden_set(self.path4, s):
                self.assertFalse(unsatisfied(self.path4, flip(s, i), i))

    def test_single_node(self):
        g = Graph(1)
        self.assertEqual(self.mds.forbidden_set(g, (O,)), {1})
        self.assertEqual(self.mds.forbidden_set(g, (I,)), set())

    def test_tokens(self):
        self.assertEqual(self.mds.format_local(I), 'IN')
        self.assertEqual(self.mds.parse_local('OUT'), O)
        self.assertEqual(self.mds.move_bound(self.g4), 4)

    @given(st.lists(st.sampled_from([I, O]), min_size=1, max_size=8).map(tuple), st.integers(1, 8))
    def test_flip_involution(self, s, i):
        i = min(i, len(s))
        self.assertEqual(flip(flip(s, i), i), s)
        self.assertNotEqual(flip(s, i)[i - 1], s[i - 1])


class TestCorpus(unittest.TestCase):
    """Runs every daemon and every interleaving on random connected graphs with n <= 8"""
    def setUp(self):
        self.mds = MdsAlgorithm()
        self.rng = random.Random(2024)

    def corpus(self):
        for k in range(CORPUS_GRAPHS):
            yield random_connected_graph(self.rng.randint(2, 8), seed=k)

    def starts(self, g):
        if 2 ** g.n <= SAMPLES:
            return list(self.mds.states(g))
        return [tuple(self.rng.choice((I, O)) for _ in g.nodes) for _ in range(SAMPLES)]

    def test_every_interleaving(self):
        for g in self.corpus():
            for s in self.mds.states(g):
                summary = exhaustive_schedules(self.mds, g, s)
                self.assertLessEqual(summary.longest, g.n)
                self.assertEqual(summary.revisits, [])
                for final in summary.terminals:
                    self.assertTrue(is_minimal_dominating(g, final))

    def test_forbidden_nodes_are_unsatisfied_and_apart(self):
        for g in [read_graph(DATA / 'path4.txt'), read_graph(DATA / 'g4.txt')] + list(self.corpus())[:10]:
            for s in self.mds.states(g):
                forbidden = self.mds.forbidden_set(g, s)
                for i in forbidden:
                    self.assertTrue(unsatisfied(g, s, i))
                    self.assertEqual(g.k_hop(i, 2) & forbidden, set())

    def test_every_daemon(self):
        overruns = dict.fromkeys((0, 1, 2, 4), 0)
        for g in self.corpus():
            for j, s in enumerate(self.starts(g)):
                for kind in ('central-random', 'central-max-id', 'synchronous'):
                    try:
                        trace = run(self.mds, g, s, Daemon(kind, seed=j))
                    except ConflictError:
                        self.assertEqual(kind, 'synchronous')
                        continue
                    self.assertTrue(is_minimal_dominating(g, trace.final_state))
                    self.assertLessEqual(len(trace.steps), g.n)
                    self.assertEqual(trace.revisits(), [])
                for bound in (0, 1, 2, 4):
                    try:
                        trace = run(self.mds, g, s, Daemon('stale-async', seed=j, staleness=bound))
                    except BoundViolation:
                        overruns[bound] += 1
                        continue
                    self.assertTrue(is_minimal_dominating(g, trace.final_state))
        # fresh reads behave like central-random; larger bounds are only counted
        self.assertEqual(overruns[0], 0)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 7), st.integers(0, 2 ** 16), st.integers(0, 2 ** 16))
    def test_every_move_is_final(self, n, graph_seed, state_seed):
        g = random_connected_graph(n, graph_seed)
        rng = random.Random(state_seed)
        s = tuple(rng.choice((I, O)) for _ in g.nodes)
        trace = run(self.mds, g, s, Daemon('central-random', seed=state_seed))
        self.assertEqual(len(trace.movers()), len(set(trace.movers())))


if __name__ == '__main__':
    unittest.main()
