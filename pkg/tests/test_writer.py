import json
import os
import unittest

from freegig.experiments import ExperimentReport
from freegig.writer import ArtifactWriter
from helpers import read_bytes, temporary_directory


def sample_report():
    report = ExperimentReport('wishart', {'rate': 2.0}, seed=3)
    report.add('ks', 0.01, 0.05, kind='below')
    report.add('edge', 0.2, 0.1)
    report.add_table('esd', ('eigenvalue',), [(0.5,), (1.0,), (2.5,)])
    report.add_table('density', ('x', 'density'),
                     [(0.5, 0.1), (1.0, 0.3), (2.5, 0.05)])
    return report.finish()


class TestArtifactWriter(unittest.TestCase):
    def test_creates_directory(self):
        with temporary_directory() as d:
            outdir = os.path.join(d, 'a', 'b')
            ArtifactWriter(outdir)
            self.assertTrue(os.path.isdir(outdir))

    def test_csv_cells(self):
        with temporary_directory() as d:
            w = ArtifactWriter(d)
            w.write_csv('t.csv', ('name', 'value', 'pass'),
                        [('r', 0.1, True), ('s', 3, False)])
            self.assertEqual(read_bytes(d, 't.csv'),
                             b'name,value,pass\n'
                             b'r,0.10000000000000001,true\n'
                             b's,3,false\n')

    def test_report_artifacts(self):
        with temporary_directory() as d:
            w = ArtifactWriter(d)
            w.write_report(sample_report())
            for name in ('report.json', 'residuals.csv', 'esd.csv',
                         'density.csv', 'esd.svg'):
                self.assertTrue(os.path.exists(os.path.join(d, name)), name)
            self.assertEqual(read_bytes(d, 'residuals.csv'),
                             b'check,value,tolerance,pass\n'
                             b'ks,0.01,0.050000000000000003,true\n'
                             b'edge,0.20000000000000001,'
                             b'0.10000000000000001,false\n')
            with open(os.path.join(d, 'report.json'), encoding='utf-8') as fp:
                data = json.load(fp)
            self.assertFalse(data['passed'])
            self.assertEqual(data['seed'], 3)

    def test_density_only_report_gets_a_curve(self):
        report = ExperimentReport('density', {})
        report.add_table('density', ('x', 'density'),
                         [(0.0, 0.0), (1.0, 1.0)])
        with temporary_directory() as d:
            ArtifactWriter(d).write_report(report.finish())
            self.assertTrue(os.path.exists(os.path.join(d, 'density.svg')))

    def test_error_manifest(self):
        with temporary_directory() as d:
            w = ArtifactWriter(d)
            w.write_csv('partial.csv', ('x',), [(1.0,)])
            w.write_error(ValueError('boom'), 'support')
            with open(os.path.join(d, 'error.json'), encoding='utf-8') as fp:
                data = json.load(fp)
            self.assertEqual(data['error'], 'ValueError')
            self.assertEqual(data['message'], 'boom')
            self.assertEqual(data['artifacts'], ['partial.csv'])


if __name__ == '__main__':
    unittest.main()
