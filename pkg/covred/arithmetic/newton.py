"""
Newton Polygons Module
مضلعات نيوتن وتقييمات الجذور وفحص تكامل النموذج الأساسي
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple, Union

from covred.arithmetic.residual import ResidualPoly
from covred.arithmetic.valued_field import (
    INFINITY,
    Element,
    FieldContext,
    Valuation,
    residue,
    uniformizer_power,
    val,
)
from covred.errors import PreconditionViolated, ZeroPolynomial

logger = logging.getLogger(__name__)

Scalar = Union[Element, int, Fraction]


@dataclass(frozen=True, eq=False)
class PolynomialV:
    """
    كثير حدود بمعاملات من Q(π)

    Args:
        coeffs: المعاملات تصاعدياً، المعامل i هو معامل X^i
        ctx: سياق الحقل
    """

    coeffs: Tuple[Element, ...]
    ctx: FieldContext

    def __post_init__(self):
        coeffs = list(self.coeffs)
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        object.__setattr__(self, "coeffs", tuple(coeffs))

    # --- constructors ---

    @classmethod
    def from_scalars(cls, values: Iterable[Scalar], ctx: FieldContext) -> "PolynomialV":
        """من قائمة معاملات تصاعدية (أعداد أو عناصر)"""
        return cls(tuple(ctx.element(v) for v in values), ctx)

    @classmethod
    def from_roots(cls, roots: Iterable[Scalar], ctx: FieldContext) -> "PolynomialV":
        """الحاصل الأحادي (X - r) على الجذور"""
        result = cls.from_scalars([1], ctx)
        for r in roots:
            result = result._mul_linear(ctx.one(), -ctx.element(r))
        return result

    # --- queries ---

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Element:
        if not self.coeffs:
            raise ZeroPolynomial("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    @property
    def constant(self) -> Element:
        return self.coeffs[0] if self.coeffs else self.ctx.zero()

    def coefficient(self, i: int) -> Element:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.ctx.zero()

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.leading == 1

    # --- arithmetic ---

    def __add__(self, other: "PolynomialV") -> "PolynomialV":
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return PolynomialV(
            tuple(self.coefficient(i) + other.coefficient(i) for i in range(n)), self.ctx
        )

    def __neg__(self) -> "PolynomialV":
        return PolynomialV(tuple(-c for c in self.coeffs), self.ctx)

    def __sub__(self, other: "PolynomialV") -> "PolynomialV":
        return self + (-self._coerce(other))

    def __mul__(self, other: Union["PolynomialV", Scalar]) -> "PolynomialV":
        if not isinstance(other, PolynomialV):
            c = self.ctx.element(other)
            return PolynomialV(tuple(a * c for a in self.coeffs), self.ctx)
        if self.is_zero() or other.is_zero():
            return PolynomialV((), self.ctx)
        out = [self.ctx.zero()] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return PolynomialV(tuple(out), self.ctx)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "PolynomialV":
        result = PolynomialV.from_scalars([1], self.ctx)
        for _ in range(n):
            result = result * self
        return result

    def _coerce(self, other) -> "PolynomialV":
        if isinstance(other, PolynomialV):
            return other
        return PolynomialV((self.ctx.element(other),), self.ctx)

    def _mul_linear(self, a: Element, b: Element) -> "PolynomialV":
        """الضرب في (aX + b)"""
        out = [self.ctx.zero()] * (len(self.coeffs) + 1)
        for i, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            out[i] = out[i] + c * b
            out[i + 1] = out[i + 1] + c * a
        return PolynomialV(tuple(out), self.ctx)

    def __call__(self, x: Scalar) -> Element:
        """التقييم بطريقة هورنر"""
        x = self.ctx.element(x)
        result = self.ctx.zero()
        for c in reversed(self.coeffs):
            result = result * x + c
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolynomialV):
            return NotImplemented
        return self.ctx == other.ctx and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.coeffs, self.ctx))

    def derivative(self) -> "PolynomialV":
        return PolynomialV(
            tuple(c * i for i, c in enumerate(self.coeffs) if i > 0), self.ctx
        )

    def antiderivative(self) -> "PolynomialV":
        """التكامل مع ثابت صفري"""
        return PolynomialV(
            (self.ctx.zero(),) + tuple(c * Fraction(1, i + 1) for i, c in enumerate(self.coeffs)),
            self.ctx,
        )

    def affine_substitute(self, a: Scalar, b: Scalar) -> "PolynomialV":
        """
        f(aX + b)
        """
        a, b = self.ctx.element(a), self.ctx.element(b)
        result = PolynomialV((), self.ctx)
        for c in reversed(self.coeffs):
            result = result._mul_linear(a, b) + PolynomialV((c,), self.ctx)
        return result

    def translate(self, b: Scalar) -> "PolynomialV":
        """f(X + b)"""
        return self.affine_substitute(1, b)

    def reversed(self, degree: Optional[int] = None) -> "PolynomialV":
        """X^d f(1/X)"""
        d = self.degree if degree is None else degree
        padded = list(self.coeffs) + [self.ctx.zero()] * (d + 1 - len(self.coeffs))
        return PolynomialV(tuple(reversed(padded)), self.ctx)

    # --- valuation-theoretic ---

    def gauss_valuation(self) -> Valuation:
        """أصغر تقييم بين المعاملات"""
        if self.is_zero():
            return INFINITY
        return min(val(c) for c in self.coeffs)

    def gauss_normalize(self) -> Tuple["PolynomialV", Fraction]:
        """
        القسمة على uniformizer_power(gauss_valuation)

        Returns:
            (كثير الحدود المطبع، التقييم المحذوف)
        """
        if self.is_zero():
            raise ZeroPolynomial("cannot normalize the zero polynomial")
        g = self.gauss_valuation()
        scale = uniformizer_power(g, self.ctx).inverse()
        return self * scale, g

    def is_integral(self) -> bool:
        return self.gauss_valuation() >= 0

    def reduce(self) -> ResidualPoly:
        """الاختزال معاملاً بمعامل إلى F_p"""
        return ResidualPoly.from_ascending(
            [int(residue(c)) for c in self.coeffs], self.ctx.p
        )

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            mono = "" if i == 0 else ("X" if i == 1 else f"X^{i}")
            text = str(c)
            if not mono:
                terms.append(text)
            elif c == 1:
                terms.append(mono)
            else:
                terms.append(f"({text})*{mono}")
        return " + ".join(reversed(terms))

    def __repr__(self) -> str:
        return f"PolynomialV({self})"


@dataclass(frozen=True)
class Segment:
    slope: Fraction
    length: int


@dataclass(frozen=True)
class NewtonPolygon:
    """
    مضلع نيوتن: الغلاف المحدب السفلي للنقاط (i, v(a_i))

    Args:
        vertices: رؤوس الغلاف (i, v)
        segments: الأضلاع (الميل، الطول الأفقي)
        x_order: مضاعفة الجذر 0
    """

    vertices: Tuple[Tuple[int, Fraction], ...]
    segments: Tuple[Segment, ...]
    x_order: int

    def to_dict(self) -> Dict:
        return {
            "vertices": [[i, str(v)] for i, v in self.vertices],
            "segments": [{"slope": str(s.slope), "len": s.length} for s in self.segments],
        }


def _cross(o, a, b) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def newton_polygon(f: PolynomialV) -> NewtonPolygon:
    """
    الغلاف السفلي بخوارزمية السلسلة الرتيبة

    Collinear points are dropped so that every segment is a maximal run of
    constant slope.
    """
    if f.is_zero():
        raise ZeroPolynomial("Newton polygon of the zero polynomial")
    points = [(i, val(c)) for i, c in enumerate(f.coeffs) if not c.is_zero()]
    hull: List[Tuple[int, Fraction]] = []
    for point in points:
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], point) <= 0:
            hull.pop()
        hull.append(point)
    segments = tuple(
        Segment(Fraction(b[1] - a[1]) / (b[0] - a[0]), b[0] - a[0])
        for a, b in zip(hull, hull[1:])
    )
    return NewtonPolygon(tuple(hull), segments, points[0][0])


def root_valuations(f: PolynomialV) -> Tuple[Valuation, ...]:
    """
    تقييمات جذور f (مع التكرار) مرتبة تصاعدياً

    Each segment of slope s and length l gives l roots of valuation -s; the
    X-adic order contributes roots at infinity.
    """
    polygon = newton_polygon(f)
    values: List[Valuation] = []
    for segment in polygon.segments:
        values.extend([-segment.slope] * segment.length)
    values.extend([INFINITY] * polygon.x_order)
    return tuple(sorted(values))


def smallest_root_valuation_above(f: PolynomialV, bound: Fraction) -> Optional[Fraction]:
    """أصغر تقييم جذر منته أكبر تماماً من bound"""
    candidates = [v for v in root_valuations(f) if v != INFINITY and v > bound]
    return min(candidates) if candidates else None


@dataclass(frozen=True)
class Integral:
    """النموذج الأساسي متكامل واختزاله X^p"""

    reduction: ResidualPoly


@dataclass(frozen=True)
class Violation:
    """
    سبب الفشل: معامل ذو تقييم سالب أو اختزال مختلف عن X^p
    """

    index: Optional[int] = None
    reduction: Optional[ResidualPoly] = None

    def describe(self) -> str:
        if self.index is not None:
            return f"coefficient {self.index} has negative valuation"
        return f"reduction {self.reduction} is not X^p"


def check_integrality(f: PolynomialV) -> Union[Integral, Violation]:
    """
    فحص أن كثير الحدود متكامل وأن اختزاله X^p

    Args:
        f: كثير حدود أحادي من الدرجة p مع f(0) = 0
    """
    p = f.ctx.p
    if f.degree != p or not f.is_monic() or not f.constant.is_zero():
        raise PreconditionViolated(
            f"expected a monic polynomial of degree {p} vanishing at 0, got {f}"
        )
    for i, c in enumerate(f.coeffs):
        if val(c) < 0:
            logger.debug(f"Integrality fails at coefficient {i}: {c}")
            return Violation(index=i)
    reduction = f.reduce()
    if reduction.dense != (1,) + (0,) * p:
        return Violation(reduction=reduction)
    return Integral(reduction=reduction)
