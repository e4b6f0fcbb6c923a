"""
Tests for dual graph pairs
اختبارات أزواج الرسوم الثنائية
"""

import unittest
import sys
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent))

from covred.covers.cover import RamificationData
from covred.errors import PreconditionViolated
from covred.reduction.classifier import classify_good_reduction, classify_tail
from covred.reduction.dual_graph import (
    ComponentMap,
    DualGraphPair,
    components_with_marks,
    fiber_mark,
    mark_label,
)


def worked():
    return RamificationData.from_profiles(
        5, {"0": (3, 1, 1), "1": (2, 1, 1, 1), "lambda": (2, 1, 1, 1)}
    )


class TestComponentMap(unittest.TestCase):
    """اختبارات تسميات المكونات"""

    def test_text(self):
        self.assertEqual(str(ComponentMap.inseparable(5)), "insep(5)")
        self.assertEqual(str(ComponentMap.etale(3, 3, 0)), "etale(3; b=3, w=0)")

    def test_marks(self):
        self.assertEqual(fiber_mark("lambda", 2), "lambda^2")
        self.assertEqual(mark_label("3/25 + pi^2^1"), ("3/25 + pi^2", 1))


class TestDualGraphPair(unittest.TestCase):
    """اختبارات البنية والمقارنة والتسلسل"""

    def setUp(self):
        self.model = classify_good_reduction(worked())

    def test_construction_errors(self):
        pair = DualGraphPair(5)
        pair.add_component("X", "C")
        with self.assertRaises(PreconditionViolated):
            pair.add_component("X", "C")
        with self.assertRaises(PreconditionViolated):
            pair.add_edge("X", "C", "C'", Fraction(0))
        with self.assertRaises(PreconditionViolated):
            pair.side("Z")

    def test_scaling_violation_detected(self):
        self.model.downstairs.edges["D", "D'[0]"]["thickness"] = Fraction(1)
        problems = self.model.scaling_violations()
        self.assertEqual(len(problems), 1)
        self.assertIn("C'[0]", problems[0])

    def test_degree_violation_detected(self):
        self.model.set_map("C'[1]", "D'[1]", 4)
        self.assertEqual(self.model.degree_violations(), ["degrees over D'[1] sum to 4, not 5"])

    def test_isomorphism_ignores_names(self):
        renamed = DualGraphPair.from_dict(self.model.to_dict())
        self.assertTrue(renamed.is_isomorphic(self.model))
        self.assertEqual(renamed.diff(self.model), {})

    def test_diff_reports_thickness(self):
        other = DualGraphPair.from_dict(self.model.to_dict())
        other.upstairs.edges["C", "C'[0]"]["thickness"] = Fraction(1, 4)
        diff = self.model.diff(other)
        self.assertFalse(self.model.is_isomorphic(other))
        self.assertEqual(diff["thicknesses"]["X"][1], ["1/4", "1/3", "1/3"])

    def test_subtree_and_parents(self):
        (model,) = classify_tail(worked(), "0", "lambda", Fraction(1)).models
        self.assertEqual(model.subtree("X", "C'"), ["C'", "C_1", "C_2"])
        self.assertEqual(model.parent_map("X")["C_1"], "C'")

    def test_components_with_marks(self):
        self.assertEqual(components_with_marks(self.model, ["1"]), ["C'[1]"])

    def test_dot(self):
        dot = self.model.to_dot("good")
        self.assertIn("subgraph cluster_X", dot)
        self.assertIn('label="Y_k";', dot)
        self.assertIn('"X:C\'[0]" -- "Y:D\'[0]" [style=dashed, label="5"];', dot)

    def test_json_is_stable(self):
        first = self.model.to_json()
        self.assertEqual(DualGraphPair.from_dict(self.model.to_dict()).to_json(), first)


if __name__ == '__main__':
    unittest.main()
