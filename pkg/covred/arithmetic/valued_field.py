"""
Valued Field Module
الحساب الدقيق في الامتداد المتفرع كلياً Q(π) حيث π^e = p

Elements are stored as e rational coordinates on the basis 1, π, ..., π^(e-1).
The valuation is normalized by v(p) = 1.
"""

import functools
import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Tuple, Union

from sympy import Poly, QQ, Rational, Symbol, isprime, multiplicity

from covred.errors import (
    DivisionByZero,
    NegativeValuation,
    NotRepresentable,
    PreconditionViolated,
    SchemaError,
)

logger = logging.getLogger(__name__)

_T = Symbol("t")

RationalLike = Union[int, Fraction]


@functools.total_ordering
class _Infinity:
    """تقييم الصفر: أكبر من كل عدد نسبي"""

    __slots__ = ()

    def __repr__(self) -> str:
        return "INFINITY"

    def __str__(self) -> str:
        return "oo"

    def __eq__(self, other) -> bool:
        return isinstance(other, _Infinity)

    def __lt__(self, other) -> bool:
        return False

    def __gt__(self, other) -> bool:
        return not isinstance(other, _Infinity)

    def __hash__(self) -> int:
        return hash("covred-infinity")

    def __add__(self, other):
        return self

    __radd__ = __add__


INFINITY = _Infinity()

Valuation = Union[Fraction, _Infinity]


def to_fraction(value: Union[RationalLike, str]) -> Fraction:
    """تحويل عدد صحيح أو نص "a/b" إلى Fraction"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except ValueError as e:
            raise SchemaError(f"Not a rational number: {value!r}") from e
    raise SchemaError(f"Not a rational number: {value!r}")


def padic_valuation(q: Fraction, p: int) -> Valuation:
    """v_p لعدد نسبي"""
    if q == 0:
        return INFINITY
    num = multiplicity(p, abs(q.numerator)) if q.numerator % p == 0 else 0
    den = multiplicity(p, q.denominator) if q.denominator % p == 0 else 0
    return Fraction(num - den)


@dataclass(frozen=True)
class ResidueElement:
    """
    عنصر من حقل البواقي F_p

    Args:
        value: عدد صحيح في [0, p)
        p: العدد الأولي
    """

    value: int
    p: int

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.p)

    def __add__(self, other: "ResidueElement") -> "ResidueElement":
        return ResidueElement(self.value + int(other), self.p)

    def __sub__(self, other: "ResidueElement") -> "ResidueElement":
        return ResidueElement(self.value - int(other), self.p)

    def __mul__(self, other: "ResidueElement") -> "ResidueElement":
        return ResidueElement(self.value * int(other), self.p)

    def __neg__(self) -> "ResidueElement":
        return ResidueElement(-self.value, self.p)

    def __int__(self) -> int:
        return self.value

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class FieldContext:
    """
    الحقل Q(π) مع π^e = p

    X^e - p is Eisenstein at p, so the representation is a field and
    v(π) = 1/e.

    Args:
        p: عدد أولي
        e: دليل التفرع المطلق
    """

    p: int
    e: int = 1

    def __post_init__(self):
        if not isinstance(self.p, int) or not isprime(self.p):
            raise PreconditionViolated(f"p must be prime, got {self.p!r}")
        if not isinstance(self.e, int) or self.e < 1:
            raise PreconditionViolated(f"e must be a positive integer, got {self.e!r}")

    # --- constructors ---

    def element(self, value: Union["Element", RationalLike, str, Iterable]) -> "Element":
        """
        بناء عنصر من عدد نسبي أو نص مثل "3/25 + pi" أو قائمة معاملات
        """
        if isinstance(value, Element):
            if value.ctx != self:
                raise PreconditionViolated(
                    f"Element lives in {value.ctx}, not in {self}; use base_change"
                )
            return value
        if isinstance(value, (int, Fraction)):
            return Element((Fraction(value),) + (Fraction(0),) * (self.e - 1), self)
        if isinstance(value, str):
            return parse_element(value, self)
        coeffs = tuple(to_fraction(c) for c in value)
        if len(coeffs) != self.e:
            raise SchemaError(f"Expected {self.e} coefficients, got {len(coeffs)}")
        return Element(coeffs, self)

    def zero(self) -> "Element":
        return self.element(0)

    def one(self) -> "Element":
        return self.element(1)

    def pi(self) -> "Element":
        """المنتظم π"""
        if self.e == 1:
            return self.element(self.p)
        coeffs = [Fraction(0)] * self.e
        coeffs[1] = Fraction(1)
        return Element(tuple(coeffs), self)

    def is_representable(self, q: Fraction) -> bool:
        return (Fraction(q) * self.e).denominator == 1

    def required_e(self, q: Fraction) -> int:
        """أصغر مضاعف لـ e يجعل q في (1/e)Z"""
        den = (Fraction(q) * self.e).denominator
        return self.e * den

    def __str__(self) -> str:
        return f"Q({self.p}^(1/{self.e}))" if self.e > 1 else "Q"


@dataclass(frozen=True, eq=False)
class Element:
    """
    عنصر من Q(π) ممثل بـ e معاملات نسبية

    Args:
        coeffs: (c_0, ..., c_{e-1}) حيث العنصر = مجموع c_i π^i
        ctx: سياق الحقل
    """

    coeffs: Tuple[Fraction, ...]
    ctx: FieldContext

    # --- coercion ---

    def _coerce(self, other) -> "Element":
        if isinstance(other, Element):
            if other.ctx != self.ctx:
                raise PreconditionViolated(f"Mixed fields {self.ctx} and {other.ctx}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ctx.element(other)
        return NotImplemented

    # --- arithmetic ---

    def __add__(self, other) -> "Element":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Element(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), self.ctx)

    __radd__ = __add__

    def __neg__(self) -> "Element":
        return Element(tuple(-a for a in self.coeffs), self.ctx)

    def __sub__(self, other) -> "Element":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Element(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)), self.ctx)

    def __rsub__(self, other) -> "Element":
        return (-self) + other

    def __mul__(self, other) -> "Element":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        e, p = self.ctx.e, self.ctx.p
        out = [Fraction(0)] * e
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                if b == 0:
                    continue
                k = i + j
                if k >= e:
                    # π^e = p
                    out[k - e] += p * a * b
                else:
                    out[k] += a * b
        return Element(tuple(out), self.ctx)

    __rmul__ = __mul__

    def inverse(self) -> "Element":
        """
        المعكوس عبر خوارزمية إقليدس الموسعة مع X^e - p
        """
        if self.is_zero():
            raise DivisionByZero("Division by zero in Q(pi)")
        if all(c == 0 for c in self.coeffs[1:]):
            return self.ctx.element(1 / self.coeffs[0])
        e, p = self.ctx.e, self.ctx.p
        rep = Poly(
            [Rational(c.numerator, c.denominator) for c in reversed(self.coeffs)],
            _T,
            domain=QQ,
        )
        modulus = Poly(_T**e - p, _T, domain=QQ)
        inv = rep.invert(modulus)
        coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(inv.all_coeffs())]
        coeffs += [Fraction(0)] * (e - len(coeffs))
        return Element(tuple(coeffs[:e]), self.ctx)

    def __truediv__(self, other) -> "Element":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other) -> "Element":
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int) -> "Element":
        if n < 0:
            return self.inverse() ** (-n)
        result = self.ctx.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # --- comparisons ---

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.ctx.element(other)
        if not isinstance(other, Element):
            return NotImplemented
        return self.ctx == other.ctx and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.coeffs, self.ctx))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    # --- valuation ---

    def valuation(self) -> Valuation:
        """min_i (v_p(c_i) + i/e)"""
        return val(self)

    def is_integral(self) -> bool:
        return val(self) >= 0

    def residue(self) -> ResidueElement:
        return residue(self)

    # --- text forms ---

    def __str__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
                continue
            power = "pi" if i == 1 else f"pi^{i}"
            if c == 1:
                terms.append(power)
            elif c == -1:
                terms.append(f"-{power}")
            else:
                terms.append(f"{c}*{power}")
        if not terms:
            return "0"
        text = terms[0]
        for term in terms[1:]:
            text += f" - {term[1:]}" if term.startswith("-") else f" + {term}"
        return text

    def __repr__(self) -> str:
        return f"Element({self}, p={self.ctx.p}, e={self.ctx.e})"

    def to_json(self) -> Dict:
        return {"coeffs": [str(c) for c in self.coeffs], "p": self.ctx.p, "e": self.ctx.e}

    @classmethod
    def from_json(cls, data: Dict) -> "Element":
        try:
            ctx = FieldContext(int(data["p"]), int(data["e"]))
            return ctx.element(data["coeffs"])
        except (KeyError, TypeError, ValueError) as e:
            raise SchemaError(f"Malformed element JSON: {data!r}") from e


# --- module-level operations ---

def val(x: Element) -> Valuation:
    """
    تقييم عنصر

    Term valuations v_p(c_i) + i/e are pairwise distinct modulo 1, so the
    minimum is attained once and no cancellation can occur.
    """
    e, p = x.ctx.e, x.ctx.p
    best: Valuation = INFINITY
    for i, c in enumerate(x.coeffs):
        if c == 0:
            continue
        v = padic_valuation(c, p) + Fraction(i, e)
        if v < best:
            best = v
    return best


def residue(x: Element) -> ResidueElement:
    """
    صورة عنصر متكامل في F_p
    """
    v = val(x)
    if v < 0:
        raise NegativeValuation(f"residue of {x} with valuation {v}")
    p = x.ctx.p
    c0 = x.coeffs[0]
    return ResidueElement(c0.numerator * pow(c0.denominator, -1, p), p)


def uniformizer_power(q: Union[Fraction, int], ctx: FieldContext) -> Element:
    """
    عنصر قانوني p^a π^b تقييمه q بالضبط، مع q = a + b/e و 0 <= b < e
    """
    q = Fraction(q)
    if not ctx.is_representable(q):
        needed = ctx.required_e(q)
        raise NotRepresentable(
            f"valuation {q} is not in (1/{ctx.e})Z; enlarge e to {needed}",
            denominator=q.denominator,
            required_e=needed,
        )
    steps = int(q * ctx.e)
    a, b = divmod(steps, ctx.e)
    coeffs = [Fraction(0)] * ctx.e
    coeffs[b] = Fraction(ctx.p) ** a
    return Element(tuple(coeffs), ctx)


def base_change(x: Element, target: FieldContext) -> Element:
    """
    تضمين Q(p^(1/e)) في Q(p^(1/e')) عندما e | e'، عبر π -> π'^(e'/e)
    """
    if target.p != x.ctx.p or target.e % x.ctx.e != 0:
        raise PreconditionViolated(f"Cannot embed {x.ctx} into {target}")
    k = target.e // x.ctx.e
    coeffs = [Fraction(0)] * target.e
    for i, c in enumerate(x.coeffs):
        coeffs[i * k] = c
    return Element(tuple(coeffs), target)


_TERM = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
        (?P<coef>\d+(?:/\d+)?)?\s*
        (?:\*?\s*(?P<pi>pi|π)(?:\s*\^\s*(?P<exp>\d+))?)?\s*""",
    re.VERBOSE,
)


def parse_element(text: str, ctx: FieldContext) -> Element:
    """
    قراءة عنصر من نص مثل "3/25 + pi" أو "-2*pi^3 + 1"
    """
    source = text.strip()
    if not source:
        raise SchemaError("Empty element text")
    result = ctx.zero()
    pi = ctx.pi()
    pos = 0
    first = True
    while pos < len(source):
        match = _TERM.match(source, pos)
        if match is None or match.end() == pos:
            raise SchemaError(f"Cannot parse element {text!r} at position {pos}")
        sign, coef, has_pi, exp = (
            match.group("sign"), match.group("coef"), match.group("pi"), match.group("exp")
        )
        if coef is None and has_pi is None:
            raise SchemaError(f"Cannot parse element {text!r} at position {pos}")
        if sign is None and not first:
            raise SchemaError(f"Missing operator in {text!r} at position {pos}")
        value = Fraction(coef) if coef is not None else Fraction(1)
        if sign == "-":
            value = -value
        term = ctx.element(value)
        if has_pi is not None:
            term = term * pi ** (int(exp) if exp is not None else 1)
        result = result + term
        pos = match.end()
        first = False
    return result
