"""
Polynomial Covers Module
التغطيات كثيرة الحدود من الدرجة الأولية p: البناء وبيانات التفرع والتطبيع
"""

import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from covred.arithmetic.newton import PolynomialV
from covred.arithmetic.valued_field import (
    Element,
    FieldContext,
    base_change,
    uniformizer_power,
    val,
)
from covred.errors import (
    InvalidDivisor,
    NeedsExtension,
    NotEnoughBranchPoints,
    PreconditionViolated,
    RHViolation,
    SchemaError,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CriticalDivisor:
    """
    النقاط الحرجة المنتهية مع دلائل التفرع

    Args:
        points: أزواج (x, m) مع m >= 2
    """

    points: Tuple[Tuple[Element, int], ...]

    def validate(self, p: int) -> None:
        """التحقق من مجموع (m-1) = p-1 وتمايز النقاط"""
        if not self.points:
            raise InvalidDivisor("empty critical divisor")
        for x, m in self.points:
            if not isinstance(m, int) or m < 2:
                raise InvalidDivisor(f"ramification index of {x} must be >= 2, got {m}")
            if m > p:
                raise InvalidDivisor(f"ramification index {m} exceeds p={p}")
        total = sum(m - 1 for _, m in self.points)
        if total != p - 1:
            raise InvalidDivisor(f"sum of (m-1) is {total}, expected p-1 = {p - 1}")
        xs = [x for x, _ in self.points]
        if len(set(xs)) != len(xs):
            raise InvalidDivisor("critical points must be pairwise distinct")

    def to_json(self) -> List[Dict]:
        return [{"x": str(x), "m": m} for x, m in self.points]


@dataclass(frozen=True)
class Cover:
    """
    تغطية β: P^1 -> P^1 من الدرجة p، أحادية، مع β(0) = 0

    Args:
        beta: كثير الحدود β
        ctx: سياق الحقل
        critical: القاسم الحرج (مطلوب لاستخراج بيانات التفرع)
    """

    beta: PolynomialV
    ctx: FieldContext
    critical: Optional[CriticalDivisor] = None

    def __post_init__(self):
        p = self.ctx.p
        if self.beta.degree != p or not self.beta.is_monic():
            raise PreconditionViolated(f"beta must be monic of degree {p}: {self.beta}")
        if not self.beta.constant.is_zero():
            raise PreconditionViolated(f"beta(0) must be 0: {self.beta}")

    @property
    def p(self) -> int:
        return self.ctx.p

    @property
    def critical_points(self) -> Tuple[Tuple[Element, int], ...]:
        if self.critical is None:
            raise PreconditionViolated("critical points of this cover are unknown")
        return self.critical.points

    def base_change(self, target: FieldContext) -> "Cover":
        """نفس التغطية فوق حقل أكبر"""
        points = tuple((base_change(x, target), m) for x, m in self.critical_points)
        return from_critical_divisor(CriticalDivisor(points), target)

    def to_json(self) -> Dict:
        return {
            "p": self.ctx.p,
            "e": self.ctx.e,
            "critical": self.critical.to_json() if self.critical else [],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Cover":
        """
        قراءة تغطية من JSON بالصيغة
        {"p":5,"e":1,"critical":[{"x":"0","m":3},...]}
        """
        try:
            ctx = FieldContext(int(data["p"]), int(data.get("e", 1)))
            points = tuple((ctx.element(str(item["x"])), int(item["m"])) for item in data["critical"])
        except (KeyError, TypeError, ValueError) as e:
            raise SchemaError(f"Malformed cover description: {e}") from e
        return from_critical_divisor(CriticalDivisor(points), ctx)


def from_critical_divisor(d: CriticalDivisor, ctx: FieldContext) -> Cover:
    """
    β الوحيدة الأحادية من الدرجة p مع β(0)=0 و β' = p ∏(X-x)^(m-1)
    """
    d.validate(ctx.p)
    derivative = PolynomialV.from_scalars([ctx.p], ctx)
    for x, m in d.points:
        derivative = derivative * (PolynomialV.from_roots([x], ctx) ** (m - 1))
    beta = derivative.antiderivative()
    logger.debug(f"Built cover beta = {beta}")
    return Cover(beta=beta, ctx=ctx, critical=d)


def from_coefficients(
    coeffs: Sequence[Union[Element, int, Fraction, str]],
    critical: CriticalDivisor,
    ctx: FieldContext,
) -> Cover:
    """
    قبول معاملات صريحة بشرط تزويد النقاط الحرجة معها
    """
    beta = PolynomialV.from_scalars([ctx.element(c) for c in coeffs], ctx)
    expected = from_critical_divisor(critical, ctx)
    if expected.beta != beta:
        raise InvalidDivisor("supplied critical points do not match beta'")
    return expected


@dataclass(frozen=True)
class Fiber:
    """
    ليف فوق قيمة تفرع منتهية

    Args:
        label: الاسم القانوني للقيمة
        value: القيمة نفسها (None في وضع الصيغ)
        profile: المضاعفات e_x مرتبة تنازلياً
        critical: النقاط الحرجة في هذا الليف
    """

    label: str
    value: Optional[Element]
    profile: Tuple[int, ...]
    critical: Tuple[Tuple[Element, int], ...] = ()

    @property
    def n(self) -> int:
        return len(self.profile)

    @property
    def unramified(self) -> int:
        return sum(1 for e in self.profile if e == 1)


@dataclass(frozen=True)
class RamificationData:
    """
    بيانات التفرع: الألياف فوق القيم المنتهية، مع ∞ ضمنياً ذات المظهر {p}
    """

    p: int
    fibers: Tuple[Fiber, ...]

    @property
    def r(self) -> int:
        return len(self.fibers) + 1

    @property
    def labels(self) -> Tuple[str, ...]:
        return tuple(f.label for f in self.fibers)

    def fiber(self, label: str) -> Fiber:
        for f in self.fibers:
            if f.label == label:
                return f
        raise KeyError(label)

    def n(self, label: str) -> int:
        return self.fiber(label).n

    def profile(self, label: str) -> Tuple[int, ...]:
        return self.fiber(label).profile

    def values(self) -> Dict[str, Element]:
        return {f.label: f.value for f in self.fibers if f.value is not None}

    def check(self) -> None:
        """مجاميع المظاهر وصيغة ريمان-هورفيتز"""
        for f in self.fibers:
            if sum(f.profile) != self.p or not f.profile or min(f.profile) < 1:
                raise RHViolation(f"profile {f.profile} over {f.label} does not sum to p={self.p}")
        total = sum(f.n for f in self.fibers)
        expected = (self.r - 2) * self.p + 1
        if total != expected:
            raise RHViolation(
                f"Riemann-Hurwitz fails: sum n = {total}, (r-2)p+1 = {expected}"
            )

    @classmethod
    def from_profiles(cls, p: int, profiles: Mapping[str, Iterable[int]]) -> "RamificationData":
        """بيانات مجردة لوضع الصيغ (بدون قيم)"""
        fibers = tuple(
            Fiber(label=str(label), value=None, profile=tuple(sorted((int(e) for e in prof), reverse=True)))
            for label, prof in profiles.items()
        )
        data = cls(p=p, fibers=fibers)
        data.check()
        return data

    def to_json(self) -> Dict:
        return {
            "p": self.p,
            "r": self.r,
            "fibers": [{"label": f.label, "profile": list(f.profile)} for f in self.fibers],
        }


def branch_data(c: Cover) -> RamificationData:
    """
    تجميع النقاط الحرجة حسب القيمة β(x) وبناء مظاهر الألياف
    """
    groups: Dict[Element, List[Tuple[Element, int]]] = {}
    for x, m in c.critical_points:
        groups.setdefault(c.beta(x), []).append((x, m))
    fibers = []
    for value, points in groups.items():
        ramified = sum(m for _, m in points)
        if ramified > c.p:
            raise RHViolation(f"fiber over {value} has total multiplicity {ramified} > p")
        profile = tuple(sorted([m for _, m in points], reverse=True)) + (1,) * (c.p - ramified)
        fibers.append(
            Fiber(
                label=str(value),
                value=value,
                profile=profile,
                critical=tuple(sorted(points, key=lambda item: str(item[0]))),
            )
        )
    fibers.sort(key=lambda f: f.label)
    data = RamificationData(p=c.p, fibers=tuple(fibers))
    data.check()
    return data


@dataclass(frozen=True)
class AffineChange:
    """
    تغيير إحداثيات: β_new(X) = (β(x_scale X + x_shift) - t_shift) / t_scale
    """

    x_shift: Element
    x_scale: Element
    t_shift: Element
    t_scale: Element

    def apply_point(self, x: Element) -> Element:
        return (x - self.x_shift) / self.x_scale

    def apply_value(self, value: Element) -> Element:
        return (value - self.t_shift) / self.t_scale

    def is_identity(self) -> bool:
        return (
            self.x_shift.is_zero() and self.t_shift.is_zero()
            and self.x_scale == 1 and self.t_scale == 1
        )

    def to_json(self) -> Dict:
        return {
            "x_shift": str(self.x_shift),
            "x_scale": str(self.x_scale),
            "t_shift": str(self.t_shift),
            "t_scale": str(self.t_scale),
        }


@dataclass(frozen=True)
class NormalizedCover:
    cover: Cover
    change: AffineChange
    normalized: bool


def normalize(c: Cover) -> NormalizedCover:
    """
    تطبيع التغطية: 0 قيمة تفرع، كل القيم متكاملة، وإحداها وحدة

    The result is semi-normalized; `normalized` is true when 1 is a branch
    value as well.

    Raises:
        NotEnoughBranchPoints: أقل من قيمتين منتهيتين
        NeedsExtension: إذا تطلب التحجيم تقييماً خارج (1/e)Z
    """
    ctx = c.ctx
    ram = branch_data(c)
    values = [f.value for f in ram.fibers]
    if len(values) < 2:
        raise NotEnoughBranchPoints(f"only {len(values)} finite branch value(s)")

    zero = ctx.zero()
    if zero in values:
        t_shift, x_shift = zero, zero
    else:
        base = ram.fibers[0]
        t_shift, x_shift = base.value, base.critical[0][0]

    m = min(val(v - t_shift) for v in values if v != t_shift)
    q = Fraction(m) / ctx.p
    if not ctx.is_representable(q):
        needed = ctx.required_e(q)
        raise NeedsExtension(
            f"rescaling needs an element of valuation {q}; enlarge e to {needed}",
            required_e=needed,
        )
    x_scale = uniformizer_power(q, ctx)
    change = AffineChange(
        x_shift=x_shift, x_scale=x_scale, t_shift=t_shift, t_scale=x_scale ** ctx.p
    )
    if change.is_identity():
        new_cover = c
    else:
        points = tuple((change.apply_point(x), m_x) for x, m_x in c.critical_points)
        new_cover = from_critical_divisor(CriticalDivisor(points), ctx)
    new_values = [change.apply_value(v) for v in values]
    normalized = ctx.one() in new_values
    logger.info(
        f"Normalized cover: shift {x_shift}, scale valuation {q}, "
        f"{'normalized' if normalized else 'semi-normalized'}"
    )
    return NormalizedCover(cover=new_cover, change=change, normalized=normalized)


def profile_counts(ram: RamificationData) -> Counter:
    """مظاهر الألياف كمجموعة متعددة (ثابتة تحت التكافؤ)"""
    return Counter(f.profile for f in ram.fibers)
