import unittest

import latticelin
from latticelin.algorithms import RampAlgorithm, ramp_fixture
from latticelin.analyzer import enumerate_system, verify_bounds
from latticelin.scheduler import Daemon, run


class TestRamp(unittest.TestCase):
    """Tests the counter fixture whose runs meet the move bound exactly"""
    def setUp(self):
        self.ramp = ramp_fixture(2, (2, 3))
        self.g = self.ramp.graph()
        self.bottom = self.ramp.parse_state('1:1,1:1', self.g)

    def test_tokens(self):
        self.assertEqual(self.bottom, ((1, 1), (1, 1)))
        self.assertEqual(self.ramp.format_state(((2, 3), (1, 2))), '2:3,1:2')
        self.assertRaises(latticelin.InputError, self.ramp.parse_local, '1')
        self.assertRaises(latticelin.InputError, self.ramp.parse_local, 'a:b')
        self.assertRaises(latticelin.InputError, self.ramp.parse_state, '3:1,1:1', self.g)

    def test_bounds(self):
        self.assertEqual(self.ramp.domain_sizes(self.g), [2, 3])
        self.assertEqual(self.ramp.move_bound(self.g), 6)

    def test_unit_step(self):
        self.assertTrue(self.ramp.is_unit_step(1, (1, 1), (2, 1)))
        self.assertFalse(self.ramp.is_unit_step(1, (1, 1), (2, 2)))
        self.assertFalse(self.ramp.is_unit_step(1, (1, 2), (1, 1)))

    def test_tight_under_every_daemon(self):
        for kind in ('central-random', 'central-max-id', 'synchronous', 'stale-async'):
            trace = run(self.ramp, self.g, self.bottom, Daemon(kind, seed=11, staleness=2))
            self.assertTrue(trace.converged)
            self.assertEqual(trace.move_count, 6)
            self.assertEqual(trace.final_state, ((2, 3), (2, 3)))

    def test_single_node(self):
        ramp = ramp_fixture(1, (3,))
        trace = run(ramp, ramp.graph(), ((1,),), Daemon('central-max-id'))
        self.assertEqual(trace.move_count, 2)

    def test_at_cap(self):
        trace = run(self.ramp, self.g, ((2, 3), (2, 3)), Daemon('central-random'))
        self.assertEqual(trace.move_count, 0)

    def test_longest_path(self):
        report = verify_bounds(enumerate_system(self.ramp, self.g))
        self.assertTrue(report.passed)
        self.assertEqual(report.stats.longest_path, 6)

    def test_bad_fixture(self):
        self.assertRaises(latticelin.InputError, ramp_fixture, 0, (2,))
        self.assertRaises(latticelin.InputError, RampAlgorithm, ())
        self.assertRaises(latticelin.InputError, RampAlgorithm, (0, 2))
        self.assertRaises(latticelin.InputError, RampAlgorithm((2,)).graph)


if __name__ == '__main__':
    unittest.main()
