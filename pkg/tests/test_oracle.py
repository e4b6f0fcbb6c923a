"""
Tests for the blow-up oracle and the planted-instance harness
اختبارات المتحقق بالتفجير والتغطيات المزروعة
"""

import unittest
import sys
from collections import Counter
from fractions import Fraction
from pathlib import Path
from unittest import mock

sys.path.insert(0, str(Path(__file__).parent.parent))

from covred.arithmetic.valued_field import FieldContext
from covred.covers.cover import branch_data
from covred.errors import (
    CenterNotRoot,
    IntegralityFailed,
    NeedsExtension,
    NonIntegral,
    NotRepresentable,
    PreconditionViolated,
)
from covred.oracle.blowup import (
    blow_up,
    fundamental_model,
    realized_partition,
    separate_fibers,
    separation_status,
    verify_instance,
)
from covred.oracle.planted import (
    cubic_family,
    planted_instances,
    quintic_family,
    required_ramification,
    run_planted,
    verify_with_base_change,
)
from covred.reduction.classifier import Regime
from covred.reduction.partitions import admissible_partitions

Q5 = FieldContext(5, 1)


class TestFundamentalModel(unittest.TestCase):
    """اختبارات النموذج الأساسي"""

    def setUp(self):
        self.cover = quintic_family(1, 2, Q5)
        self.state = fundamental_model(self.cover)

    def test_reduction_is_frobenius(self):
        self.assertEqual(self.state.residual.dense, (1, 0, 0, 0, 0, 0))
        self.assertTrue(self.state.residual.is_inseparable())
        self.assertEqual(self.state.image_radius, 0)
        self.assertEqual(len(self.state.stages), 1)

    def test_failure(self):
        """β = X^3 - X^2/2 لا تختزل إلى X^3"""
        with self.assertRaises(IntegralityFailed):
            fundamental_model(cubic_family(Fraction(1, 3), FieldContext(3, 1)))

    def test_separation_status(self):
        status = separation_status(self.state, Q5.zero())
        self.assertFalse(status.separated)
        self.assertEqual(str(status), "coalesced(1)")

    def test_trace_entry(self):
        self.assertEqual(self.state.to_trace()["residual"], "X^5")


class TestBlowUp(unittest.TestCase):
    """اختبارات خطوة التفجير"""

    def setUp(self):
        self.state = fundamental_model(quintic_family(1, 2, Q5))

    def test_blow_up(self):
        child = blow_up(self.state, 0, Fraction(1))
        self.assertEqual(child.radius, 1)
        self.assertEqual(len(child.stages), 2)
        self.assertTrue(child.center.is_zero())

    def test_errors(self):
        with self.assertRaises(PreconditionViolated):
            blow_up(self.state, 0, Fraction(0))
        with self.assertRaises(NotRepresentable):
            blow_up(self.state, 0, Fraction(1, 2))
        with self.assertRaises(CenterNotRoot):
            blow_up(self.state, 1, Fraction(1))
        with self.assertRaises(NonIntegral):
            blow_up(self.state, 0, Fraction(1), target=Q5.element(Fraction(1, 5)))


class TestVerification(unittest.TestCase):
    """اختبارات المقارنة بين المتحقق والمصنف"""

    def test_good_reduction_agrees(self):
        cover = quintic_family(1, 2, Q5)
        self.assertEqual(required_ramification(cover), 6)
        verdict = verify_with_base_change(cover)
        self.assertTrue(verdict.agree, verdict.diff)
        self.assertEqual(verdict.regimes, {"all": "GOOD"})
        self.assertEqual(verdict.observed.thicknesses("X"), [Fraction(1, 3), Fraction(1, 3), Fraction(1, 2)])
        self.assertEqual(verdict.observed.violations(), [])
        self.assertTrue(verdict.trace)

    def test_separate_fibers_counts(self):
        cover = quintic_family(1, 2, Q5).base_change(FieldContext(5, 6))
        pair = separate_fibers(cover).pair
        self.assertEqual(len(pair.components("X")), 4)
        self.assertEqual(len(pair.components("Y")), 4)
        self.assertIn("∞", pair.marks("X", "C"))

    def test_near_partition_is_realized(self):
        instance = next(i for i in planted_instances(p=5, regimes=[Regime.NEAR]))
        verdict = verify_with_base_change(instance.cover)
        self.assertTrue(verdict.agree, verdict.diff)
        (pair,) = [tuple(key.split("|")) for key, value in verdict.regimes.items() if value == "NEAR"]
        ram = branch_data(instance.cover)
        realized = realized_partition(verdict.observed, *pair)
        self.assertIn(realized, admissible_partitions(ram.profile(pair[0]), ram.profile(pair[1]), 5))
        self.assertEqual(list(verdict.expected.meta["partitions"].values()), [str(realized)])

    def test_disagreement_is_reported(self):
        cover = quintic_family(1, 2, Q5)
        with mock.patch("covred.reduction.classifier.ordinary_thickness", return_value=Fraction(1, 6)):
            verdict = verify_with_base_change(cover)
        self.assertFalse(verdict.agree)
        self.assertEqual(verdict.label, "DISAGREE")
        self.assertIn("thicknesses", verdict.diff)

    def test_extension_limit(self):
        with self.assertRaises(NeedsExtension) as ctx:
            verify_with_base_change(quintic_family(1, 2, Q5), max_e=2)
        self.assertEqual(ctx.exception.required_e, 6)

    def test_unextended_field_refuses(self):
        with self.assertRaises(NotRepresentable):
            verify_instance(quintic_family(1, 2, Q5))


class TestPlanted(unittest.TestCase):
    """اختبارات الدفعة المزروعة: المتحقق يطابق المصنف في الفروع الأربعة"""

    def test_generator(self):
        instances = planted_instances()
        self.assertGreaterEqual(len(instances), 50)
        self.assertEqual({i.regime for i in instances}, set(Regime))
        self.assertTrue(all(i.regime is Regime.GOOD for i in planted_instances(p=3)))

    def test_batch_agrees(self):
        results = run_planted(planted_instances(), progress=False)
        checked = [r for r in results if r.verdict is not None]
        disagreements = [(r.instance.name, r.verdict.diff, r.verdict.checks) for r in checked if not r.verdict.agree]
        self.assertEqual(disagreements, [])
        self.assertGreaterEqual(len(checked), 50)
        covered = Counter(r.instance.regime for r in checked)
        self.assertEqual(set(covered), set(Regime))
        for result in checked:
            self.assertEqual(result.verdict.observed.scaling_violations(), [])


if __name__ == '__main__':
    unittest.main()
