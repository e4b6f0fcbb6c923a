"""
Tests for the command line interface
اختبارات واجهة سطر الأوامر
"""

import io
import json
import os
import tempfile
import unittest
import sys
from contextlib import redirect_stderr, redirect_stdout
from fractions import Fraction
from pathlib import Path
from unittest import mock

sys.path.insert(0, str(Path(__file__).parent.parent))

from covred.cli import InstanceFile, main
from covred.config import load_settings
from covred.covers.branch_tree import BranchClassification
from covred.database.db_manager import DatabaseManager
from covred.errors import SchemaError
from covred.reduction.classifier import Mode

PROFILES_YAML = """
p: 5
profiles:
  "0": [3, 1, 1]
  "1": [2, 1, 1, 1]
  lambda: [2, 1, 1, 1]
tails:
  - pair: ["0", "lambda"]
    epsilon: "7"
"""

COVER = {"p": 5, "e": 1, "critical": [{"x": "0", "m": 3}, {"x": "1", "m": 2}, {"x": "2", "m": 2}]}


class CLITestCase(unittest.TestCase):
    """أساس مشترك: ملفات مؤقتة وتشغيل main مع التقاط المخرجات"""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)
        self.profiles = self.dir / "tail.yaml"
        self.profiles.write_text(PROFILES_YAML, encoding="utf-8")
        self.cover = self.dir / "cover.json"
        self.cover.write_text(json.dumps(COVER), encoding="utf-8")

    def tearDown(self):
        self.tmp.cleanup()
        load_settings()

    def run_cli(self, *argv):
        out, err = io.StringIO(), io.StringIO()
        with redirect_stdout(out), redirect_stderr(err):
            code = main(list(argv))
        return code, out.getvalue(), err.getvalue()


class TestClassifyCommand(CLITestCase):
    """اختبارات أمر classify"""

    def test_formula_mode(self):
        code, out, _ = self.run_cli("classify", "--profiles", str(self.profiles))
        self.assertEqual(code, 0)
        report = json.loads(out)
        self.assertEqual(report["mode"], "formula")
        self.assertEqual(report["tails"][0]["regime"], "NEAR")
        self.assertEqual(len(report["models"]), 2)

    def test_epsilon_override(self):
        code, out, _ = self.run_cli(
            "classify", "--profiles", str(self.profiles), "--pair", "lambda,0", "--epsilon", "1"
        )
        self.assertEqual(code, 0)
        report = json.loads(out)
        self.assertEqual(report["tails"][0]["regime"], "FAR")
        self.assertEqual(report["tails"][0]["epsilon"], "1")

    def test_exact_mode(self):
        code, out, _ = self.run_cli(
            "classify", "--cover", str(self.cover), "--emit-branch-tree", "--emit-newton"
        )
        self.assertEqual(code, 0)
        report = json.loads(out)
        self.assertEqual(report["mode"], "exact")
        self.assertEqual(report["branch_classification"]["tails"], [])
        self.assertIn("branch_tree", report)
        self.assertEqual(set(report["newton"]), {"0", "7/12", "-4/3"})
        self.assertEqual(len(report["models"]), 1)

    def test_report_json_round_trips(self):
        """التقرير يُقرأ ويُعاد تسلسله إلى النص نفسه"""
        for argv in (
            ("classify", "--profiles", str(self.profiles)),
            ("classify", "--cover", str(self.cover), "--emit-branch-tree", "--emit-newton"),
            ("verify", "--cover", str(self.cover), "--auto-extend"),
        ):
            code, out, _ = self.run_cli(*argv)
            self.assertEqual(code, 0)
            report = json.loads(out)
            self.assertEqual(json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n", out)
            self.assertEqual(json.loads(json.dumps(report)), report)

    def test_dot_output(self):
        code, out, _ = self.run_cli("classify", "--profiles", str(self.profiles), "--emit", "dot")
        self.assertEqual(code, 0)
        self.assertEqual(out.count("subgraph cluster_X"), 2)

    def test_schema_errors(self):
        self.assertEqual(self.run_cli("classify")[0], 3)
        self.assertEqual(
            self.run_cli("classify", "--cover", str(self.cover), "--pair", "0,1", "--epsilon", "2")[0], 3
        )
        self.assertEqual(self.run_cli("classify", "--profiles", str(self.profiles), "--epsilon", "2")[0], 3)
        broken = self.dir / "broken.yaml"
        broken.write_text("p: [5\n", encoding="utf-8")
        self.assertEqual(self.run_cli("classify", "--profiles", str(broken))[0], 3)

    def test_threshold_undefined(self):
        cubic = self.dir / "cubic.yaml"
        cubic.write_text(
            "p: 3\nprofiles:\n  a: [2, 1]\n  b: [2, 1]\ntails:\n  - pair: [a, b]\n    epsilon: 1\n",
            encoding="utf-8",
        )
        code, _, err = self.run_cli("classify", "--profiles", str(cubic))
        self.assertEqual(code, 1)
        self.assertIn("ThresholdUndefined", err)

    def test_not_simple_reduction(self):
        bc = BranchClassification(ordinary=(), tails=(), simple=False, offending="D.1")
        with mock.patch("covred.cli.classify_points", return_value=bc):
            code, _, err = self.run_cli("classify", "--cover", str(self.cover))
        self.assertEqual(code, 2)
        self.assertIn("D.1", err)

    def test_store(self):
        db_path = self.dir / "runs.db"
        with mock.patch.dict(os.environ, {"COVRED_DATABASE_PATH": str(db_path)}):
            code, _, _ = self.run_cli("classify", "--profiles", str(self.profiles), "--store")
        self.assertEqual(code, 0)
        with DatabaseManager(str(db_path)) as db:
            (run,) = db.list_runs()
            self.assertEqual(run["command"], "classify")
            self.assertTrue(db.get_run(run["id"])["components"])


class TestVerifyCommand(CLITestCase):
    """اختبارات أمر verify"""

    def test_agree(self):
        code, out, err = self.run_cli("verify", "--cover", str(self.cover), "--auto-extend")
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(out)["verdict"], "AGREE")
        self.assertIn("AGREE", err)

    def test_trace_lines(self):
        code, out, _ = self.run_cli("verify", "--cover", str(self.cover), "--auto-extend", "--trace")
        self.assertEqual(code, 0)
        first = json.loads(out.splitlines()[0])
        self.assertEqual(first["component"], "C")
        self.assertEqual(first["residual"], "X^5")

    def test_needs_extension(self):
        code, _, err = self.run_cli("verify", "--cover", str(self.cover))
        self.assertEqual(code, 4)
        self.assertIn("NotRepresentable", err)

    def test_disagree(self):
        with mock.patch("covred.reduction.classifier.ordinary_thickness", return_value=Fraction(1, 6)):
            code, out, err = self.run_cli("verify", "--cover", str(self.cover), "--auto-extend")
        self.assertEqual(code, 5)
        self.assertEqual(json.loads(out)["verdict"], "DISAGREE")

    def test_formula_file_rejected(self):
        self.assertEqual(self.run_cli("verify", "--profiles", str(self.profiles))[0], 3)


class TestReportCommands(CLITestCase):
    """اختبارات أمري atlas و example"""

    def test_atlas_markdown(self):
        code, out, _ = self.run_cli("atlas", "--p", "3", "--r-max", "3")
        self.assertEqual(code, 0)
        self.assertIn("(2, 1) (2, 1)", out)

    def test_atlas_json_files(self):
        code, _, _ = self.run_cli("atlas", "--p", "5", "--r-max", "4", "--out", str(self.dir / "atlas"))
        self.assertEqual(code, 0)
        data = json.loads((self.dir / "atlas" / "atlas_p5.json").read_text(encoding="utf-8"))
        self.assertEqual(data["r_max"], 4)
        self.assertTrue((self.dir / "atlas" / "atlas_p5.md").exists())

    def test_atlas_bad_prime(self):
        self.assertEqual(self.run_cli("atlas", "--p", "4")[0], 1)

    def test_example(self):
        code, _, _ = self.run_cli("example", "--out", str(self.dir / "example"))
        self.assertEqual(code, 0)
        self.assertEqual(len(list((self.dir / "example").glob("example_*.json"))), 9)
        self.assertEqual(len(list((self.dir / "example").glob("example_*.dot"))), 9)


class TestInstanceFile(unittest.TestCase):
    """اختبارات قراءة ملفات المدخلات"""

    def test_mode_mismatch(self):
        with self.assertRaises(SchemaError):
            InstanceFile.from_mapping({"p": 5, "critical": []}, Mode.FORMULA)
        with self.assertRaises(SchemaError):
            InstanceFile.from_mapping({"p": 5, "profiles": {}}, Mode.EXACT)

    def test_tails_parsed(self):
        inst = InstanceFile.from_mapping(
            {"p": 5, "profiles": {"0": [3, 1, 1]}, "tails": [{"pair": "lambda,0", "epsilon": "5/2"}]},
            Mode.FORMULA,
        )
        self.assertEqual(inst.tails, [(("0", "lambda"), Fraction(5, 2))])

    def test_bad_epsilon(self):
        with self.assertRaises(SchemaError):
            InstanceFile.from_mapping(
                {"p": 5, "profiles": {"0": [5]}, "tails": [{"pair": "0,1", "epsilon": "x"}]}, Mode.FORMULA
            )


if __name__ == '__main__':
    unittest.main()
