import random
import unittest
from pathlib import Path

from hypothesis import given, strategies as st

import latticelin
from latticelin.algorithms import MdsAlgorithm, SmpAlgorithm
from latticelin.algorithms.mds import IN, OUT
from latticelin.algorithms.smp import example_instance
from latticelin.analyzer import enumerate_system
from latticelin.framework import (AlgorithmSpec, Move, forbidden_nodes, random_state, replace,
                                  semantic_forbidden, state_less_than, verify_locality)
from latticelin.graph import Graph, read_graph

DATA = Path(__file__).parent / 'data'

states = st.lists(st.integers(0, 2), min_size=3, max_size=3).map(tuple)


class FarSighted(AlgorithmSpec):
    """Claims radius 1 but reads the last node."""
    name = 'far'

    def local_domain(self, g, i):
        return (0, 1)

    def forbidden(self, g, s, i):
        return s[i - 1] == 0 and s[g.n - 1] == 1


class TestStates(unittest.TestCase):
    def setUp(self):
        self.mds = MdsAlgorithm()
        self.g4 = read_graph(DATA / 'g4.txt')

    def test_replace(self):
        self.assertEqual(replace((1, 2, 3), 2, 9), (1, 9, 3))

    def test_state_less_than(self):
        self.assertTrue(state_less_than((1, 1), (1, 2)))
        self.assertFalse(state_less_than((1, 2), (1, 2)))
        self.assertFalse(state_less_than((2, 1), (1, 2)))
        self.assertFalse(state_less_than((1, 2), (2, 1)))
        self.assertRaises(latticelin.InputError, state_less_than, (1,), (1, 2))

    @given(states, states, states)
    def test_strict_partial_order(self, a, b, c):
        self.assertFalse(state_less_than(a, a))
        self.assertFalse(state_less_than(a, b) and state_less_than(b, a))
        if state_less_than(a, b) and state_less_than(b, c):
            self.assertTrue(state_less_than(a, c))

    def test_custom_order(self):
        down = lambda i, x, y: x > y
        self.assertTrue(state_less_than((IN, IN), (IN, OUT), down))
        self.assertFalse(state_less_than((IN, OUT), (IN, IN), down))

    def test_parse_state(self):
        self.assertEqual(self.mds.parse_state('IN,OUT, IN,OUT', self.g4), (IN, OUT, IN, OUT))
        self.assertEqual(self.mds.format_state((IN, OUT, IN, OUT)), 'IN,OUT,IN,OUT')

    def test_parse_state_errors(self):
        self.assertRaises(latticelin.ParseError, self.mds.parse_state, 'IN,OUT', self.g4)
        self.assertRaises(latticelin.InputError, self.mds.parse_state, 'in,OUT,IN,OUT', self.g4)
        self.assertRaises(latticelin.InputError, self.mds.check_state, self.g4, (IN, OUT, IN, 7))

    def test_enumeration_cap(self):
        self.assertEqual(len(list(self.mds.states(self.g4))), 16)
        with self.assertRaises(latticelin.CapacityError) as cm:
            self.mds.states(self.g4, cap=8)
        self.assertEqual((cm.exception.size, cm.exception.cap), (16, 8))

    def test_move_to_dict(self):
        move = Move(1, 4, IN, OUT)
        self.assertEqual(move.to_dict(self.mds), {'step': 1, 'node': 4, 'from': 'IN', 'to': 'OUT'})

    def test_random_state(self):
        first = random_state(self.mds, self.g4, random.Random(5))
        self.assertEqual(first, random_state(self.mds, self.g4, random.Random(5)))
        self.assertEqual(self.mds.check_state(self.g4, first), first)


class TestForbidden(unittest.TestCase):
    def setUp(self):
        self.mds = MdsAlgorithm()
        self.g4 = read_graph(DATA / 'g4.txt')
        self.ts = enumerate_system(self.mds, self.g4)
        self.optimal = lambda s: self.mds.optimal(self.g4, s)

    def test_forbidden_nodes(self):
        self.assertEqual(forbidden_nodes(self.mds, self.g4, (IN, IN, IN, IN)), {2, 4})
        self.assertEqual(forbidden_nodes(self.mds, self.g4, (OUT, OUT, OUT, OUT)), {2, 4})
        self.assertEqual(forbidden_nodes(self.mds, self.g4, (IN, OUT, IN, OUT)), set())

    def test_semantic_forbidden_all_in(self):
        s = (IN, IN, IN, IN)
        semantic = {i for i in self.g4.nodes if semantic_forbidden(i, s, self.optimal, self.ts)}
        self.assertEqual(semantic, {2, 4})

    def test_semantic_forbidden_at_optimum(self):
        self.assertFalse(semantic_forbidden(1, (IN, OUT, IN, OUT), self.optimal, self.ts))

    def test_semantic_forbidden_smp(self):
        smp = SmpAlgorithm(example_instance())
        g = smp.instance.graph()
        ts = enumerate_system(smp, g)
        bottom = (1, 1, 1)
        self.assertTrue(semantic_forbidden(2, bottom, smp.stable, ts))
        self.assertFalse(semantic_forbidden(1, bottom, smp.stable, ts))
        # (2, 1, 2) sends the men to distinct women with J unchanged
        self.assertFalse(semantic_forbidden(2, bottom, lambda s: smp.optimal(g, s), ts))

    def test_semantic_forbidden_plain_iterable(self):
        above = [(IN, OUT, IN, IN), (IN, IN, IN, OUT), (IN, OUT, IN, OUT)]
        self.assertTrue(semantic_forbidden(4, (IN, IN, IN, IN), self.optimal, above))
        self.assertFalse(semantic_forbidden(3, (IN, IN, IN, IN), self.optimal, above))


class TestLocality(unittest.TestCase):
    def test_mds_guards_are_local(self):
        g = Graph.path(6)
        mds = MdsAlgorithm()
        self.assertEqual(verify_locality(mds, g, mds.states(g)), [])

    def test_far_sighted_guard(self):
        g = Graph.path(4)
        alg = FarSighted()
        with self.assertLogs('latticelin.framework', level='WARNING'):
            failures = verify_locality(alg, g, [(0, 0, 0, 1)])
        self.assertIn(((0, 0, 0, 1), 1, (0, 0, 0, 0)), failures)


if __name__ == '__main__':
    unittest.main()
