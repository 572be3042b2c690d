#!/usr/bin/env python3
"""End-to-end checks of the sgpipe command-line tool.

usage: test_cli.py CLI GOLDEN_DIR SCHEMA [--update]
"""

import csv
import io
import json
import math
import subprocess
import sys
import tempfile
import unittest
import xml.etree.ElementTree as ET
from pathlib import Path

import jsonschema

CLI = GOLDEN = SCHEMA = None
UPDATE = False

CASES = {
    "linstab": ["linstab", "--epsilon", "0.01,1"],
    "transition": ["transition", "--epsilon", "0.01", "--truncation", "3", "--nodes", "64"],
    "energy": ["energy", "--epsilon", "0,0.02", "--reynolds", "10"],
    "sweep": ["sweep", "--epsilon", "0.005,0.01,0.03", "--m-max", "3"],
    "field": ["field", "--epsilon", "0.01", "--reynolds", "13.2", "--nr", "3", "--ntheta", "8", "--time", "0,0.25",
              "--h-form", "stated", "--truncation", "3", "--nodes", "64"],
}

RTOL, ATOL = 1e-8, 1e-12


def run(args, check_code=0):
    proc = subprocess.run([CLI, *args], capture_output=True, text=True, timeout=600)
    if check_code is not None and proc.returncode != check_code:
        raise AssertionError(f"{args}: exit {proc.returncode}, expected {check_code}\n{proc.stderr}")
    return proc


def close(a, b):
    return math.isclose(a, b, rel_tol=RTOL, abs_tol=ATOL)


def as_number(s):
    try:
        return float(s)
    except ValueError:
        return None


def compare_json(test, got, want, path="$"):
    if isinstance(want, dict):
        test.assertIsInstance(got, dict, path)
        test.assertEqual(list(got), list(want), path)
        for k in want:
            compare_json(test, got[k], want[k], f"{path}.{k}")
    elif isinstance(want, list):
        test.assertIsInstance(got, list, path)
        test.assertEqual(len(got), len(want), path)
        for i, (g, w) in enumerate(zip(got, want)):
            compare_json(test, g, w, f"{path}[{i}]")
    elif isinstance(want, float) or (isinstance(want, int) and isinstance(got, float)):
        test.assertTrue(close(got, want), f"{path}: {got} != {want}")
    else:
        test.assertEqual(got, want, path)


def compare_csv(test, got, want, name):
    g_rows = list(csv.reader(io.StringIO(got)))
    w_rows = list(csv.reader(io.StringIO(want)))
    test.assertEqual(g_rows[0], w_rows[0], f"{name}: header")
    test.assertEqual(len(g_rows), len(w_rows), f"{name}: row count")
    for i, (g, w) in enumerate(zip(g_rows, w_rows)):
        test.assertEqual(len(g), len(w), f"{name}: row {i}")
        for gv, wv in zip(g, w):
            gn, wn = as_number(gv), as_number(wv)
            if gn is not None and wn is not None and math.isfinite(wn):
                test.assertTrue(close(gn, wn), f"{name}: row {i}: {gv} != {wv}")
            else:
                test.assertEqual(gv, wv, f"{name}: row {i}")


class Golden(unittest.TestCase):
    def test_outputs_match_goldens(self):
        for name, args in CASES.items():
            for fmt in ("csv", "json"):
                with self.subTest(case=name, format=fmt):
                    text = run([*args, "--format", fmt]).stdout
                    path = GOLDEN / f"{name}.{fmt}"
                    if UPDATE:
                        path.write_text(text)
                        continue
                    want = path.read_text()
                    if fmt == "json":
                        compare_json(self, json.loads(text), json.loads(want))
                    else:
                        compare_csv(self, text, want, name)


class Schema(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.schema = json.loads(SCHEMA.read_text())
        jsonschema.Draft202012Validator.check_schema(cls.schema)

    def test_json_outputs_validate(self):
        for name, args in CASES.items():
            with self.subTest(case=name):
                jsonschema.validate(json.loads(run([*args, "--format", "json"]).stdout), self.schema)

    def test_csv_headers_documented(self):
        for name, args in CASES.items():
            with self.subTest(case=name):
                header = run([*args, "--format", "csv"]).stdout.splitlines()[0].split(",")
                self.assertEqual(header, list(self.schema["$defs"][name]["x-csv-columns"]))

    def test_schema_rejects_malformed_documents(self):
        doc = json.loads(run([*CASES["energy"], "--format", "json"]).stdout)
        doc["results"][0]["R_E"] = "12.87"
        with self.assertRaises(jsonschema.ValidationError):
            jsonschema.validate(doc, self.schema)


class ExitCodes(unittest.TestCase):
    def test_config_errors(self):
        for args in (
            ["linstab", "--epsilon", "-1"],
            ["linstab", "--epsilon", "0"],
            ["energy", "--m-max", "3"],
            ["transition", "--truncation", "0"],
            ["transition", "--nodes", "5"],
            ["transition", "--h-form", "other"],
            ["field", "--epsilon", "0.01"],
            ["field", "--reynolds", "13"],
            ["sweep", "--format", "xml"],
            ["sweep", "--plot"],
            ["nosuchcommand"],
            [],
        ):
            with self.subTest(args=args):
                proc = run(args, check_code=2)
                self.assertTrue(proc.stderr.strip())

    def test_diagnostic_names_flag(self):
        self.assertIn("--m-max", run(["energy", "--m-max", "3"], check_code=2).stderr)
        self.assertIn("--epsilon", run(["linstab", "--epsilon", "0"], check_code=2).stderr)

    def test_solver_error(self):
        self.assertIn("solver error", run(["energy", "--epsilon", "1e6"], check_code=3).stderr)

    def test_degenerate_classification(self):
        proc = run(["transition", "--epsilon", "0.01", "--truncation", "2", "--nodes", "64", "--format", "json",
                    "--degenerate-tol", "1.5"], check_code=4)
        self.assertEqual(json.loads(proc.stdout)["results"][0]["classification"], "degenerate")
        self.assertIn("degenerate", proc.stderr)

    def test_window_edge_warning(self):
        proc = run(["energy", "--epsilon", "0.05", "--m-max", "5", "--format", "json"])
        self.assertIn("warning", proc.stderr)
        self.assertIsNotNone(json.loads(proc.stdout)["results"][0]["warning"])


class Behaviour(unittest.TestCase):
    def test_deterministic(self):
        for name in ("transition", "field"):
            with self.subTest(case=name):
                a = run([*CASES[name], "--format", "json"]).stdout
                b = run([*CASES[name], "--format", "json"]).stdout
                self.assertEqual(a, b)

    def test_field_is_periodic(self):
        args = ["field", "--epsilon", "0.001", "--reynolds", "23.5", "--nr", "4", "--ntheta", "12", "--h-form",
                "stated", "--truncation", "3", "--nodes", "64", "--time", "0.3,1.3", "--format", "json"]
        doc = json.loads(run(args).stdout)
        self.assertIsNotNone(doc["period"])
        s0, s1 = doc["snapshots"]
        for key in ("w_per", "psi_per"):
            scale = max(abs(v) for row in s0[key] for v in row)
            for r0, r1 in zip(s0[key], s1[key]):
                for a, b in zip(r0, r1):
                    self.assertLessEqual(abs(a - b), 1e-9 * scale)

    def test_out_file_matches_stdout(self):
        with tempfile.TemporaryDirectory() as d:
            out = Path(d) / "sweep.csv"
            run([*CASES["sweep"], "--out", str(out)])
            self.assertEqual(out.read_text(), run(CASES["sweep"]).stdout)

    def test_plot_writes_svg(self):
        with tempfile.TemporaryDirectory() as d:
            cases = {
                "sweep": (CASES["sweep"], ["sweep.svg"]),
                "transition": (CASES["transition"], ["transition_profile.svg", "transition_ratio.svg"]),
                "field": (CASES["field"], ["field_t0.svg", "field_t1.svg"]),
                "energy": (CASES["energy"], ["energy.svg"]),
                "linstab": (CASES["linstab"], ["linstab.svg"]),
            }
            for name, (args, files) in cases.items():
                run([*args, "--plot", "--out", str(Path(d) / f"{name}.csv")])
                for f in files:
                    with self.subTest(file=f):
                        root = ET.parse(Path(d) / f).getroot()
                        self.assertEqual(root.tag, "{http://www.w3.org/2000/svg}svg")


def main():
    global CLI, GOLDEN, SCHEMA, UPDATE
    args = sys.argv[1:]
    if "--update" in args:
        UPDATE = True
        args.remove("--update")
    if len(args) != 3:
        sys.exit(__doc__)
    CLI, GOLDEN, SCHEMA = args[0], Path(args[1]), Path(args[2])
    unittest.main(argv=[sys.argv[0], "-v"])


if __name__ == "__main__":
    main()
