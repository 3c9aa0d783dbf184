# -*- coding: utf-8 -*-

import unittest
import sys
import os
import io
import json
import math
import tempfile
from contextlib import redirect_stdout, redirect_stderr

import numpy as np
import pandas as pd

# Ensure the repository root is in the sys.path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..', '..')))

from concurrenceLib.code.Cli import main, ExitCode, RunManifest, parseGrid, parseCounts, CliError, FIGURE1_COLUMNS
from concurrenceLib.code.States import DensityMatrix

FULL_SUITE = os.environ.get("CONCURRENCE_FULL_SUITE") == "1"
FAST = ['--restarts', '2', '--max-iters', '300', '--iters-per-param', '0']


def run(argv):
    err = io.StringIO()
    with redirect_stderr(err):
        code = main(argv)
    return code, err.getvalue()


def readCsv(path):
    return pd.read_csv(path, comment='#')


class TestParsing(unittest.TestCase):

    def test_grid(self):
        np.testing.assert_allclose(parseGrid("0:1:5"), [0.0, 0.25, 0.5, 0.75, 1.0])
        self.assertEqual(parseGrid("0.1,0.2"), [0.1, 0.2])
        with self.assertRaises(CliError):
            parseGrid("a:b")

    def test_counts(self):
        self.assertEqual(parseCounts("4,6,10"), [4, 6, 10])
        with self.assertRaises(CliError):
            parseCounts("0,4")
        with self.assertRaises(CliError):
            parseCounts("x")

    def test_unknown_command(self):
        with redirect_stderr(io.StringIO()):
            with self.assertRaises(SystemExit):
                main(['unknown'])


class TestBoundsCommand(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def path(self, name):
        return os.path.join(self.tmp.name, name)

    def test_maximally_mixed(self):
        DensityMatrix.maximallyMixed((2, 3)).save(self.path("mixed.json"))
        code, _ = run(['bounds', self.path("mixed.json"), '--out', self.path("report.json")] + FAST)
        self.assertEqual(code, ExitCode.OK)
        with open(self.path("report.json")) as f:
            report = json.load(f)
        self.assertEqual(report["lb_optimized"], 0.0)
        self.assertAlmostEqual(report["ub"], 0.0, delta=1e-6)
        self.assertEqual(report["ppt_verdict"], "separable-PPT")
        self.assertTrue(os.path.exists(RunManifest.pathFor(self.path("report.json"))))

    def test_family_stdout(self):
        out = io.StringIO()
        with redirect_stdout(out):
            code, _ = run(['bounds', '--family', '0.5', '0.5'])
        self.assertEqual(code, ExitCode.OK)
        report = json.loads(out.getvalue())
        self.assertAlmostEqual(report["lb_optimized"], math.sqrt(2) / 2, delta=1e-5)
        self.assertAlmostEqual(report["ub"], math.sqrt(3) / 2, delta=1e-4)
        self.assertEqual(report["family"], [0.5, 0.5])

    def test_truncated_json(self):
        with open(self.path("bad.json"), "w") as f:
            f.write('{"dims": [2, 3], "re": [[0.5, 0')
        code, message = run(['bounds', self.path("bad.json"), '--out', self.path("report.json")])
        self.assertEqual(code, ExitCode.VALIDATION)
        self.assertIn("MalformedInputError", message)
        self.assertFalse(os.path.exists(self.path("report.json")))

    def test_invalid_state(self):
        with open(self.path("trace.json"), "w") as f:
            json.dump({"dims": [2, 2], "re": (np.eye(4) / 2).tolist(), "im": np.zeros((4, 4)).tolist()}, f)
        code, message = run(['bounds', self.path("trace.json")])
        self.assertEqual(code, ExitCode.VALIDATION)
        self.assertIn("TraceNotOneError", message)

    def test_missing_file(self):
        code, _ = run(['bounds', self.path("absent.json")])
        self.assertEqual(code, ExitCode.IO)

    def test_no_input(self):
        code, _ = run(['bounds'])
        self.assertEqual(code, ExitCode.VALIDATION)
        code, _ = run(['bounds', '--family', '0.2', '0.5'])
        self.assertEqual(code, ExitCode.VALIDATION)

    def test_file_and_family(self):
        DensityMatrix.maximallyMixed((2, 3)).save(self.path("mixed.json"))
        code, message = run(['bounds', self.path("mixed.json"), '--family', '0.5', '0.5'])
        self.assertEqual(code, ExitCode.VALIDATION)
        self.assertIn("not both", message)


class TestSweeps(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def path(self, name):
        return os.path.join(self.tmp.name, name)

    def test_figure1_pure(self):
        code, _ = run(['figure1', '--m-list', '1', '--per-m', '1', '--out', self.path("f.csv")] + FAST)
        self.assertEqual(code, ExitCode.OK)
        with open(self.path("f.csv")) as f:
            self.assertTrue(f.readline().startswith('#'))
        frame = readCsv(self.path("f.csv"))
        self.assertEqual(list(frame.columns), FIGURE1_COLUMNS)
        self.assertEqual(len(frame), 1)
        self.assertEqual(frame["rank"][0], 1)
        self.assertAlmostEqual(frame["lb_optimized"][0], frame["ub"][0], delta=1e-6)
        with open(RunManifest.pathFor(self.path("f.csv"))) as f:
            manifest = json.load(f)
        self.assertEqual(manifest["command"], "figure1")
        self.assertEqual(manifest["parameters"]["per_m"], 1)

    def test_figure1_deterministic(self):
        argv = ['figure1', '--m-list', '4,6', '--per-m', '2'] + FAST
        self.assertEqual(run(argv + ['--out', self.path("a.csv")])[0], ExitCode.OK)
        self.assertEqual(run(argv + ['--out', self.path("b.csv")])[0], ExitCode.OK)
        with open(self.path("a.csv"), "rb") as a, open(self.path("b.csv"), "rb") as b:
            self.assertEqual(a.read(), b.read())
        frame = readCsv(self.path("a.csv"))
        self.assertEqual(len(frame), 4)
        self.assertTrue((frame["gap"] >= -1e-6).all())

    def test_family_scan(self):
        code, _ = run(['family-scan', '--x-grid', '0.2,0.3', '--y-grid', '0', '--out', self.path("s.csv")] + FAST)
        self.assertEqual(code, ExitCode.OK)
        frame = readCsv(self.path("s.csv"))
        self.assertEqual(list(frame["classification"]), ["separable", "exact"])
        self.assertAlmostEqual(frame["lb_standard"][1], 0.2 / 3, delta=1e-9)

    def test_family_scan_rejects(self):
        code, message = run(['family-scan', '--x-grid', '0.2', '--y-grid', '0.5', '--out', self.path("s.csv")])
        self.assertEqual(code, ExitCode.VALIDATION)
        self.assertFalse(os.path.exists(self.path("s.csv")))

    def test_family_scan_clip(self):
        code, _ = run(['family-scan', '--x-grid', '0.2,0.3', '--y-grid', '0,0.25', '--clip',
                       '--out', self.path("s.csv")] + FAST)
        self.assertEqual(code, ExitCode.OK)
        self.assertEqual(len(readCsv(self.path("s.csv"))), 3)

    def test_gap_scan(self):
        code, _ = run(['gap-scan', '--random', '1', '--m-list', '1', '--x-grid', '0.5', '--y-grid', '0.5',
                       '--out', self.path("g.csv")])
        self.assertEqual(code, ExitCode.OK)
        frame = readCsv(self.path("g.csv"))
        self.assertEqual(list(frame["source"]), ["family", "random"])
        self.assertAlmostEqual(frame["gap"][0], 0.1589, delta=1e-3)
        self.assertAlmostEqual(frame["gap"][1], 0.0, delta=1e-6)

    def test_unwritable_output(self):
        code, _ = run(['figure1', '--m-list', '1', '--per-m', '1', '--out',
                       os.path.join(self.tmp.name, "missing", "f.csv")] + FAST)
        self.assertEqual(code, ExitCode.IO)

    @unittest.skipUnless(FULL_SUITE, "set CONCURRENCE_FULL_SUITE=1 for the full random-ensemble run")
    def test_figure1_full(self):
        code, _ = run(['figure1', '--m-list', '4,6,10', '--per-m', '100', '--threads', '4',
                       '--out', self.path("full.csv")])
        self.assertEqual(code, ExitCode.OK)
        frame = readCsv(self.path("full.csv"))
        self.assertEqual(len(frame), 300)
        self.assertTrue((frame["gap"] >= -1e-6).all())
        self.assertTrue((frame[frame["M"] == 4]["rank"] <= 4).all())

        separable = frame["ppt_min_eig"] >= -1e-10
        self.assertEqual(int((separable & (frame["lb_optimized"] > 1e-4)).sum()), 0)
        npt = frame[~separable]
        self.assertGreaterEqual((npt["lb_optimized"] > 1e-6).mean(), 0.95)
        certifiedFraction = frame.groupby("M")["certified"].mean()
        self.assertGreater(certifiedFraction[10], certifiedFraction[4])


if __name__ == '__main__':
    unittest.main()
