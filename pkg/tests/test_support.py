"""
Tests for settings and the report database
اختبارات الإعدادات وقاعدة البيانات
"""

import os
import tempfile
import unittest
import sys
from pathlib import Path
from unittest import mock

sys.path.insert(0, str(Path(__file__).parent.parent))

from covred.config import DEFAULTS, get_setting, load_settings
from covred.database.db_manager import DatabaseManager


class TestSettings(unittest.TestCase):
    """اختبارات تحميل الإعدادات"""

    def tearDown(self):
        load_settings()

    def test_defaults_from_repository_file(self):
        settings = load_settings()
        self.assertEqual(settings["oracle"]["max_ramification_index"], 40)
        self.assertEqual(get_setting("field.p"), 5)

    def test_yaml_override(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "settings.yaml"
            path.write_text("oracle:\n  max_depth: 7\n", encoding="utf-8")
            settings = load_settings(str(path))
        self.assertEqual(settings["oracle"]["max_depth"], 7)
        self.assertEqual(settings["oracle"]["max_refinements"], DEFAULTS["oracle"]["max_refinements"])

    def test_environment_override(self):
        env = {"COVRED_ORACLE_MAX_DEPTH": "9", "COVRED_PERFORMANCE_PROGRESS": "false"}
        with mock.patch.dict(os.environ, env):
            load_settings()
            self.assertEqual(get_setting("oracle.max_depth"), 9)
            self.assertIs(get_setting("performance.progress"), False)

    def test_short_log_level(self):
        with mock.patch.dict(os.environ, {"COVRED_LOG_LEVEL": "DEBUG"}):
            self.assertEqual(load_settings()["logging"]["level"], "DEBUG")

    def test_missing_file_and_key(self):
        settings = load_settings("/nonexistent/settings.yaml")
        self.assertEqual(settings["output"]["indent"], 2)
        self.assertEqual(get_setting("oracle.unknown", "fallback"), "fallback")


class TestDatabaseManager(unittest.TestCase):
    """اختبارات مدير قاعدة البيانات"""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.db = DatabaseManager(str(Path(self.tmp.name) / "runs.db"))

    def tearDown(self):
        self.db.close()
        self.tmp.cleanup()

    def report(self):
        return {
            "models": [{
                "X_k": {"components": [
                    {"name": "C", "label": {"kind": "inseparable", "degree": 5, "branch_points": 0, "wild": 0}},
                    {"name": "C'", "label": None},
                ]},
                "Y_k": {"components": [{"name": "D"}]},
            }]
        }

    def test_save_and_get(self):
        run_id = self.db.save_run("verify", {"p": 5}, self.report(), "AGREE")
        stored = self.db.get_run(run_id)
        self.assertEqual(stored["run"]["input"], {"p": 5})
        self.assertEqual(stored["run"]["verdict"], "AGREE")
        self.assertEqual(len(stored["components"]), 3)
        self.assertEqual([c["side"] for c in stored["components"]], ["X", "X", "Y"])

    def test_list_runs(self):
        self.db.save_run("classify", {}, {})
        self.db.save_run("verify", {}, {}, "DISAGREE")
        self.assertEqual(len(self.db.list_runs()), 2)
        (only,) = self.db.list_runs("verify")
        self.assertEqual(only["verdict"], "DISAGREE")

    def test_missing_run(self):
        self.assertIsNone(self.db.get_run(42))

    def test_context_manager_reopens(self):
        path = str(Path(self.tmp.name) / "other.db")
        with DatabaseManager(path) as db:
            run_id = db.save_run("classify", {"p": 3}, self.report())
        self.assertIsNone(db._connection)
        with DatabaseManager(path) as db:
            self.assertEqual(db.get_run(run_id)["run"]["input"], {"p": 3})
            self.assertEqual(len(db.get_run(run_id)["components"]), 3)



if __name__ == '__main__':
    unittest.main()
