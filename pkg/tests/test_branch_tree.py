"""
Tests for the metric branch tree
اختبارات شجرة نقاط التفرع
"""

import unittest
import sys
from fractions import Fraction
from itertools import combinations, permutations
from pathlib import Path

import networkx as nx
from hypothesis import assume, given, settings, strategies as st

sys.path.insert(0, str(Path(__file__).parent.parent))

from covred.arithmetic.valued_field import FieldContext, residue, val
from covred.covers.branch_tree import (
    INFINITY_MARK,
    ROOT,
    BranchClassification,
    Tail,
    build_branch_tree,
    classify_points,
    distance,
    is_simple_reduction,
)
from covred.errors import AllPointsCoalesce, PreconditionViolated, VertexNotFound

Q5 = FieldContext(5, 1)


def points(*values, ctx=Q5):
    return {str(v): ctx.element(v) for v in values}


# integral values a + b·π in Q(5^(1/2))
Q5_2 = FieldContext(5, 2)
branch_values = st.lists(
    st.tuples(st.integers(0, 150), st.integers(0, 6)), min_size=2, max_size=6, unique=True
).map(lambda coords: {f"{a}+{b}pi": Q5_2.element(a) + Q5_2.element(b) * Q5_2.pi() for a, b in coords})


def meeting_depth(tree, a, b):
    """عمق أدنى سلف مشترك لمكوّني النقطتين"""
    where = tree.marked_points()
    return distance(tree, ROOT, nx.lowest_common_ancestor(tree.graph, where[a], where[b]))


def spread(values):
    return len({int(residue(x)) for x in values.values()}) >= 2


class TestBuildTree(unittest.TestCase):
    """اختبارات بناء الشجرة"""

    def setUp(self):
        self.tree = build_branch_tree(points(0, 1, 1 + 5 ** 3, 5 ** 2, 2), Q5)

    def test_components(self):
        self.assertEqual(self.tree.vertices(), ["D", "D.1", "D.2"])
        self.assertEqual(self.tree.marks(ROOT), (INFINITY_MARK, "2"))
        self.assertEqual(self.tree.marks("D.1"), ("0", "25"))
        self.assertEqual(self.tree.marks("D.2"), ("1", "126"))

    def test_thicknesses(self):
        self.assertEqual(
            self.tree.edges(),
            [("D", "D.1", Fraction(2)), ("D", "D.2", Fraction(3))],
        )
        self.assertEqual(self.tree.depth("D.2"), 3)

    def test_distance(self):
        self.assertEqual(distance(self.tree, "D.1", "D.2"), 5)
        self.assertEqual(distance(self.tree, "D", "D"), 0)
        with self.assertRaises(VertexNotFound):
            distance(self.tree, "D", "D.9")

    def test_marked_points(self):
        self.assertEqual(self.tree.marked_points()["126"], "D.2")

    def test_serialization(self):
        data = self.tree.to_dict()
        self.assertEqual(data["root"], "D")
        self.assertEqual(data["edges"][0], {"u": "D", "v": "D.1", "thickness": "2"})
        self.assertIn('"D" -- "D.2" [label="3"]', self.tree.to_dot())

    def test_ramified_field_thickness(self):
        ctx = FieldContext(5, 2)
        tree = build_branch_tree({"0": ctx.zero(), "pi": ctx.pi(), "1": ctx.one()}, ctx)
        self.assertEqual(tree.edges(), [("D", "D.1", Fraction(1, 2))])

    def test_coalescing_points(self):
        with self.assertRaises(AllPointsCoalesce):
            build_branch_tree(points(0, 5, 10))

    def test_non_integral(self):
        with self.assertRaises(PreconditionViolated):
            build_branch_tree(points(0, 1, Fraction(1, 5)))

    def test_list_input(self):
        tree = build_branch_tree([Q5.element(0), Q5.element(1)])
        self.assertEqual(tree.marks(ROOT), (INFINITY_MARK, "0", "1"))


class TestClassifyPoints(unittest.TestCase):
    """اختبارات تصنيف النقاط العادية والذيول"""

    def test_two_tails(self):
        bc = classify_points(build_branch_tree(points(0, 1, 1 + 5 ** 3, 5 ** 2, 2)))
        self.assertTrue(bc.simple)
        self.assertEqual(bc.ordinary, ("2",))
        self.assertEqual(
            [(t.pair, t.epsilon) for t in bc.tails],
            [(("0", "25"), Fraction(2)), (("1", "126"), Fraction(3))],
        )

    def test_nested_cluster_is_not_simple(self):
        bc = classify_points(build_branch_tree(points(0, 5, 25, 1)))
        self.assertFalse(bc.simple)
        self.assertEqual(bc.offending, "D.1")

    def test_three_point_cluster_is_not_simple(self):
        bc = classify_points(build_branch_tree(points(0, 5, 10, 1)))
        self.assertFalse(bc.simple)

    def test_small_sets_are_simple(self):
        """ثلاث قيم منتهية على الأكثر: الاختزال بسيط دائماً"""
        for values in ((0, 1), (0, 1, 2), (0, 5, 1), (0, 125, 3), (1, 6, 2)):
            with self.subTest(values=values):
                self.assertTrue(is_simple_reduction(points(*values)))

    def test_from_tails(self):
        bc = BranchClassification.from_tails(["0", "1", "lambda"], [Tail(("0", "lambda"), Fraction(7))])
        self.assertEqual(bc.ordinary, ("1",))
        self.assertTrue(bc.simple)
        self.assertEqual(bc.to_dict()["tails"], [{"pair": ["0", "lambda"], "epsilon": "7"}])


class TestTreeProperties(unittest.TestCase):
    """خصائص الشجرة على قيم عشوائية"""

    @settings(max_examples=100, deadline=None)
    @given(branch_values)
    def test_meeting_depth_is_valuation(self, values):
        """عمق التقاء نقطتين يساوي v(x - y)، وهو فوق-متري على كل ثلاثية"""
        assume(spread(values))
        tree = build_branch_tree(values, Q5_2)
        for a, b in combinations(values, 2):
            self.assertEqual(meeting_depth(tree, a, b), val(values[a] - values[b]))
        for a, b, c in permutations(values, 3):
            self.assertGreaterEqual(
                meeting_depth(tree, a, c), min(meeting_depth(tree, a, b), meeting_depth(tree, b, c))
            )

    @settings(max_examples=100, deadline=None)
    @given(branch_values, st.data())
    def test_removing_points_keeps_distances(self, values, data):
        assume(spread(values))
        kept = data.draw(st.lists(st.sampled_from(sorted(values)), min_size=2, unique=True))
        subset = {label: values[label] for label in kept}
        assume(spread(subset))
        full = build_branch_tree(values, Q5_2)
        sub = build_branch_tree(subset, Q5_2)
        for a, b in combinations(sorted(subset), 2):
            self.assertEqual(meeting_depth(sub, a, b), meeting_depth(full, a, b))

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.integers(0, 5 ** 5), min_size=2, max_size=3, unique=True))
    def test_three_points_reduce_simply(self, xs):
        """ثلاث قيم منتهية على الأكثر: الاختزال بسيط دائماً"""
        assume(len({x % 5 for x in xs}) >= 2)
        self.assertTrue(is_simple_reduction(points(*xs)))


if __name__ == '__main__':
    unittest.main()
