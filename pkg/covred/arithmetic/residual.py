"""
Residual Polynomials
كثيرات الحدود المتبقية فوق F_p

Thin immutable wrapper around sympy.polys.galoistools dense lists
(highest degree first, coefficients in [0, p)).
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

from sympy.polys.domains import ZZ
from sympy.polys.galoistools import (
    gf_diff,
    gf_eval,
    gf_factor,
    gf_quo,
    gf_sqf_list,
    gf_sqf_part,
    gf_strip,
    gf_sub_ground,
)

from covred.errors import ResidualRootOutsideFp

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ResidualPoly:
    """
    كثير حدود فوق F_p

    Args:
        dense: المعاملات من الدرجة العليا إلى الثابت
        p: مميز حقل البواقي
    """

    dense: Tuple[int, ...]
    p: int

    @classmethod
    def from_ascending(cls, coeffs: Sequence[int], p: int) -> "ResidualPoly":
        """بناء من معاملات مرتبة تصاعدياً (c_0, c_1, ...)"""
        dense = gf_strip([int(c) % p for c in reversed(list(coeffs))])
        return cls(tuple(int(c) for c in dense), p)

    @classmethod
    def from_dense(cls, dense: Sequence[int], p: int) -> "ResidualPoly":
        return cls(tuple(int(c) % p for c in gf_strip([int(c) % p for c in dense])), p)

    # --- basic queries ---

    @property
    def degree(self) -> int:
        return len(self.dense) - 1

    def is_zero(self) -> bool:
        return not self.dense

    def _list(self) -> List[int]:
        return list(self.dense)

    # --- operations ---

    def derivative(self) -> "ResidualPoly":
        return ResidualPoly.from_dense(gf_diff(self._list(), self.p, ZZ), self.p)

    def is_inseparable(self) -> bool:
        """المشتقة صفرية: الخريطة تمر عبر فروبينيوس"""
        return self.degree >= 1 and self.derivative().is_zero()

    def sub_constant(self, a: int) -> "ResidualPoly":
        if not self.dense:
            return ResidualPoly.from_ascending([-a], self.p)
        return ResidualPoly.from_dense(gf_sub_ground(self._list(), int(a) % self.p, self.p, ZZ), self.p)

    def evaluate(self, a: int) -> int:
        return int(gf_eval(self._list(), int(a) % self.p, self.p, ZZ))

    def squarefree_degree(self) -> int:
        """
        درجة الجزء الخالي من المربعات = عدد الجذور المختلفة في الإغلاق الجبري
        """
        if self.degree < 1:
            return 0
        part = gf_sqf_part(self._list(), self.p, ZZ)
        return len(part) - 1

    def multiplicities(self) -> List[int]:
        """أسس التحليل الخالي من المربعات"""
        if self.degree < 1:
            return []
        _, factors = gf_sqf_list(self._list(), self.p, ZZ)
        return [int(k) for _, k in factors]

    def irreducible_factors(self) -> List[Tuple[Tuple[int, ...], int]]:
        """
        العوامل غير القابلة للتحليل (أحادية) مع مضاعفاتها
        """
        if self.degree < 1:
            return []
        _, factors = gf_factor(self._list(), self.p, ZZ)
        return sorted((tuple(int(c) for c in g), int(k)) for g, k in factors)

    def roots_in_fp(self) -> Dict[int, int]:
        """
        الجذور في F_p مع مضاعفاتها (بحث شامل)

        Raises:
            ResidualRootOutsideFp: إذا لم تكن كل الجذور في F_p
        """
        roots = self.rational_roots()
        if sum(roots.values()) != self.degree:
            raise ResidualRootOutsideFp(
                f"residual polynomial {self} has roots outside F_{self.p}"
            )
        return roots

    def rational_roots(self) -> Dict[int, int]:
        """الجذور الموجودة في F_p فقط"""
        roots: Dict[int, int] = {}
        for w in range(self.p):
            f = self._list()
            m = 0
            while len(f) > 1 and int(gf_eval(f, w, self.p, ZZ)) == 0:
                f = gf_quo(f, [1, (-w) % self.p], self.p, ZZ)
                m += 1
            if m:
                roots[w] = m
        return roots

    def __str__(self) -> str:
        if not self.dense:
            return "0"
        terms = []
        for i, c in enumerate(self.dense):
            c = int(c)
            if c == 0:
                continue
            k = self.degree - i
            mono = "" if k == 0 else ("X" if k == 1 else f"X^{k}")
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            else:
                terms.append(f"{c}*{mono}")
        return " + ".join(terms)
