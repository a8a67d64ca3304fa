import os
import shutil
import tempfile
import unittest
from pathlib import Path

import latticelin
from latticelin import Engine
from latticelin.algorithms.smp import example_instance
from latticelin.graph import read_graph
from latticelin.utils import CACHE_FORMAT

DATA = Path(__file__).parent / 'data'


class TestEngine(unittest.TestCase):
    """Tests runs and reports through the engine"""
    def setUp(self):
        self.g4 = read_graph(DATA / 'g4.txt')
        self.engine = Engine.Mds(self.g4, graph_file='g4.txt', seed=7)

    def test_run(self):
        trace = self.engine.run('IN,IN,IN,IN', 'central-max-id')
        self.assertEqual(trace.final, 'IN,OUT,IN,OUT')
        self.assertEqual(trace.graph_file, 'g4.txt')
        self.assertEqual(trace.daemon.seed, 7)

    def test_daemon_alias(self):
        trace = self.engine.run('IN,IN,IN,IN', 'max-id')
        self.assertEqual(trace.daemon.kind, 'central-max-id')
        self.assertRaises(latticelin.InputError, self.engine.run, 'IN,IN,IN,IN', 'round-robin')
        self.assertRaises(latticelin.InputError, self.engine.run, 'IN,IN,IN,IN', 'stale', staleness=-2)

    def test_random_init(self):
        first = self.engine.run('random', seed=3)
        self.assertEqual(first.init_source, 'random')
        self.assertEqual(first.to_json(), self.engine.run('random', seed=3).to_json())

    def test_analyze(self):
        report = self.engine.analyze()
        self.assertTrue(report.passed, report.failures())
        self.assertEqual(report.stats.components, 4)
        self.assertEqual(report.stats.longest_path, 2)
        self.assertEqual(sorted(report.stats.suprema), ['IN,OUT,IN,OUT', 'IN,OUT,OUT,IN', 'OUT,IN,IN,OUT', 'OUT,IN,OUT,IN'])

    def test_verify_g4(self):
        report = self.engine.verify()
        self.assertTrue(report.passed, report.failures())
        self.assertIn('stale_async_b4', report.raw_data['stats'])
        self.assertTrue(report.check('central-max-id-no-node-moves-twice')['pass'])
        self.assertTrue(report.check('fresh-reads-match-central-random')['pass'])

    def test_verify_path4(self):
        engine = Engine.Mds(read_graph(DATA / 'path4.txt'))
        report = engine.verify()
        self.assertFalse(report.passed)
        failed = [c['name'] for c in report.failures()]
        self.assertTrue(any(name.endswith('potential-decreases') for name in failed))

    def test_verify_several_sinks(self):
        engine = Engine.Mds(latticelin.Graph(4, [(1, 2), (1, 4), (3, 4)]))
        report = engine.verify()
        self.assertFalse(report.check('one-supremum-per-component')['pass'])
        self.assertTrue(report.check('rank-zero-exactly-at-suprema')['pass'])
        self.assertTrue(report.check('forbidden-nodes-unsatisfied-and-2-hop-apart')['pass'])

    def test_forbidden_nodes_check(self):
        report = self.engine.verify()
        self.assertTrue(report.check('forbidden-nodes-unsatisfied-and-2-hop-apart')['pass'])
        self.assertTrue(report.check('component-0:progress-at-non-optimal-states')['pass'])

    def test_export_dot(self):
        self.assertEqual(self.engine.export_dot().count('->'), 8)

    def test_repr(self):
        self.assertEqual(repr(self.engine), '<Engine mds n=4 cache=False>')


class TestEngineSmp(unittest.TestCase):
    def setUp(self):
        self.engine = Engine.from_files('smp', prefs_path=DATA / 'smp3.txt', smp_random_runs=100)

    def test_instance(self):
        self.assertEqual(self.engine.alg.instance, example_instance())

    def test_documented_runs(self):
        self.assertEqual(self.engine.run('1,1,1', 'central-max-id').final, '1,2,2')
        self.assertEqual(self.engine.run('3,1,2', 'central-max-id').outcome, 'NoSolution')

    def test_verify(self):
        report = self.engine.verify()
        self.assertTrue(report.passed, report.failures())
        self.assertTrue(report.check('covering-pair-count')['pass'])
        self.assertTrue(report.check('documented-run-from-1,1,1')['pass'])
        self.assertEqual(report.raw_data['discrepancies'], [{
            'example': '1,2,3',
            'documented': 'Converged at 1,2,3',
            'observed': 'NoSolution at 1,2,3'
        }])


class TestEngineRamp(unittest.TestCase):
    def test_verify(self):
        engine = Engine.Ramp('2,3', latticelin.Graph.path(2))
        report = engine.verify()
        self.assertTrue(report.passed, report.failures())
        self.assertEqual(report.stats.tight_bound, 6)
        self.assertEqual(report.stats.longest_path, 6)


class TestInputs(unittest.TestCase):
    def test_missing_inputs(self):
        self.assertRaises(latticelin.InputError, Engine.from_files, 'smp')
        self.assertRaises(latticelin.InputError, Engine.from_files, 'mds')
        self.assertRaises(latticelin.InputError, Engine.from_files, 'ramp', graph_path=DATA / 'g4.txt')
        self.assertRaises(latticelin.InputError, Engine.from_files, 'coloring', graph_path=DATA / 'g4.txt')
        self.assertRaises(latticelin.InputError, Engine.Ramp, '2,0', latticelin.Graph(2))

    def test_enumeration_cap(self):
        engine = Engine.Mds(read_graph(DATA / 'g4.txt'), enumeration_cap=8)
        self.assertRaises(latticelin.CapacityError, engine.analyze)


class TestCache(unittest.TestCase):
    """Tests the sqlite cache of transition systems"""
    def setUp(self):
        self.tmp = tempfile.mkdtemp()
        self.cache_fp = os.path.join(self.tmp, 'cache.db')
        self.g4 = read_graph(DATA / 'g4.txt')

    def tearDown(self):
        shutil.rmtree(self.tmp)

    def test_hit(self):
        first = Engine.Mds(self.g4, cache_fp=self.cache_fp).transition_system()
        engine = Engine.Mds(self.g4, cache_fp=self.cache_fp)
        with self.assertLogs('latticelin.client', level='DEBUG') as cm:
            second = engine.transition_system()
        self.assertIn('hit', '\n'.join(cm.output))
        self.assertEqual(second.states, first.states)
        self.assertEqual(second.components, first.components)
        self.assertEqual(len(engine.cache), 1)

    def test_unreadable_rows_miss(self):
        engine = Engine.Mds(self.g4, cache_fp=self.cache_fp)
        with engine.cache.connection() as con:
            con.execute('insert into transition_systems (key, format, value) values (?, ?, ?)', ('old', 0, b''))
            con.execute('insert into transition_systems (key, format, value) values (?, ?, ?)', ('bad', CACHE_FORMAT, b'\xff'))
        self.assertRaises(KeyError, engine.cache.__getitem__, 'old')
        self.assertRaises(KeyError, engine.cache.__getitem__, 'bad')
        self.assertEqual(sorted(engine.cache), ['bad', 'old'])
        del engine.cache['old']
        self.assertEqual(len(engine.cache), 1)

    def test_table_name(self):
        engine = Engine.Mds(self.g4, cache_fp=self.cache_fp, table_name='systems')
        engine.analyze()
        self.assertEqual(engine.cache.table_name, 'systems')
        self.assertEqual(len(engine.cache), 1)


if __name__ == '__main__':
    unittest.main()
