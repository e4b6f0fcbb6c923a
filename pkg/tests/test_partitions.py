"""
Tests for admissible partitions of two fiber profiles
اختبارات التقسيمات المقبولة
"""

import unittest
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent))

from covred.reduction.partitions import PartitionGroup, PartitionPair, admissible_partitions


class TestAdmissiblePartitions(unittest.TestCase):
    """اختبارات تعداد التقسيمات"""

    def test_worked_example_first_tail(self):
        """(3,1,1) و (2,1,1,1): احتمالان"""
        found = admissible_partitions((3, 1, 1), (2, 1, 1, 1), 5)
        self.assertEqual([str(pp) for pp in found], [
            "d=1: {1}|{1}; d=4: {1,3}|{1,1,2}",
            "d=2: {1,1}|{2}; d=3: {3}|{1,1,1}",
        ])
        self.assertEqual([pp.degrees for pp in found], [(1, 4), (2, 3)])

    def test_worked_example_second_tail(self):
        """(2,1,1,1) مرتين: ثلاث مجموعات في كل تقسيم"""
        found = admissible_partitions((2, 1, 1, 1), (2, 1, 1, 1), 5)
        self.assertEqual([str(pp) for pp in found], [
            "d=1: {1}|{1}; d=1: {1}|{1}; d=3: {1,2}|{1,2}",
            "d=1: {1}|{1}; d=2: {1,1}|{2}; d=2: {2}|{1,1}",
        ])
        self.assertTrue(all(pp.s == 3 for pp in found))

    def test_cubic_pairs(self):
        self.assertEqual(admissible_partitions((2, 1), (2, 1), 3), [])
        (only,) = admissible_partitions((2, 1), (1, 1, 1), 3)
        self.assertEqual(only.degrees, (1, 2))

    def test_wrong_sums(self):
        self.assertEqual(admissible_partitions((3, 1), (2, 1, 1, 1), 5), [])

    def test_every_result_is_valid(self):
        for one, two in (((3, 1, 1), (2, 1, 1, 1)), ((2, 1, 1, 1), (2, 1, 1, 1)),
                         ((2, 2, 1), (1, 1, 1, 1, 1)), ((3, 2, 1, 1), (2, 1, 1, 1, 1, 1))):
            p = sum(one)
            with self.subTest(one=one, two=two):
                for pp in admissible_partitions(one, two, p):
                    self.assertTrue(pp.is_valid(p))
                    self.assertEqual(pp.profiles(), (one, two))
                    self.assertEqual(pp.s, len(one) + len(two) - p)

    def test_input_order_does_not_matter(self):
        self.assertEqual(
            admissible_partitions((1, 1, 3), (1, 2, 1, 1), 5),
            admissible_partitions((3, 1, 1), (2, 1, 1, 1), 5),
        )


class TestPartitionPair(unittest.TestCase):
    """اختبارات تمثيل التقسيم"""

    def test_groups_sorted(self):
        a = PartitionGroup(4, (3, 1), (2, 1, 1))
        b = PartitionGroup(1, (1,), (1,))
        self.assertEqual(PartitionPair((a, b)), PartitionPair((b, a)))
        self.assertEqual(PartitionPair((a, b)).groups[0], b)

    def test_invalid_group(self):
        self.assertFalse(PartitionGroup(2, (2,), (2,)).is_valid())
        self.assertFalse(PartitionPair((PartitionGroup(5, (3, 1, 1), (2, 1, 1, 1)),)).is_valid(5))

    def test_dict_form(self):
        pp = admissible_partitions((3, 1, 1), (2, 1, 1, 1), 5)[0]
        self.assertEqual(PartitionPair.from_dict(pp.to_dict()), pp)
        self.assertEqual(pp.to_dict()["s"], 2)


if __name__ == '__main__':
    unittest.main()
