"""
Planted Instances
مولّد تغطيات معروفة البنية لكل فرع تصنيف، ومشغّل التحقق مع توسيع الحقل التلقائي

The p = 5 families share the critical divisor {(0, 3), (a, 2), (b, 2)}:
β = X^5 - (5/4)(a+b)X^4 + (5/3)abX^3 with branch values 0, β(a), β(b).
The position of a relative to 5 decides the tail {0, β(a)}. A second p = 5
family has four simple critical points with distinct residues.
"""

import logging
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence

from sympy import ilcm
from tqdm import tqdm

from covred.arithmetic.valued_field import FieldContext
from covred.config import get_setting
from covred.covers.branch_tree import build_branch_tree, classify_points
from covred.covers.cover import Cover, CriticalDivisor, branch_data, from_critical_divisor
from covred.errors import NeedsExtension, NotRepresentable, ResidualRootOutsideFp
from covred.oracle.blowup import Verdict, verify_instance
from covred.reduction.classifier import Mode, Regime, assemble_full_model

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PlantedInstance:
    """
    تغطية مزروعة مع الفرع المتوقع

    Args:
        name: وصف قصير للمعاملات
        regime: الفرع المتوقع للذيل (GOOD إن لم يوجد ذيل)
        cover: التغطية
    """

    name: str
    regime: Regime
    cover: Cover

    def to_dict(self) -> dict:
        return {"name": self.name, "regime": self.regime.value, "cover": self.cover.to_json()}


@dataclass
class PlantedResult:
    instance: PlantedInstance
    verdict: Optional[Verdict] = None
    skipped: Optional[str] = None


def cubic_family(b, ctx: FieldContext) -> Cover:
    """p = 3: النقاط الحرجة {(0, 2), (b, 2)}"""
    return from_critical_divisor(CriticalDivisor(((ctx.zero(), 2), (ctx.element(b), 2))), ctx)


def quintic_family(a, b, ctx: FieldContext) -> Cover:
    """p = 5: النقاط الحرجة {(0, 3), (a, 2), (b, 2)}"""
    points = ((ctx.zero(), 3), (ctx.element(a), 2), (ctx.element(b), 2))
    return from_critical_divisor(CriticalDivisor(points), ctx)


def quartet_family(points, ctx: FieldContext) -> Cover:
    """p = 5: أربع نقاط حرجة بسيطة (أربع قيم تفرع ذات المظهر (2,1,1,1))"""
    divisor = CriticalDivisor(tuple((ctx.element(x), 2) for x in points))
    return from_critical_divisor(divisor, ctx)


def _cubic_good(e_values: Sequence[int]) -> Iterable[PlantedInstance]:
    for e in e_values:
        ctx = FieldContext(3, e)
        for b in (1, 2, 4, 5):
            yield PlantedInstance(f"p=3 e={e} b={b}", Regime.GOOD, cubic_family(b, ctx))


def _quintic_good() -> Iterable[PlantedInstance]:
    ctx = FieldContext(5, 1)
    for a, b in ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4), (6, 2), (1, 8)):
        yield PlantedInstance(f"p=5 a={a} b={b}", Regime.GOOD, quintic_family(a, b, ctx))


def _quintic_quartet() -> Iterable[PlantedInstance]:
    # beta(x) = x mod 5 for integral x, so distinct residues keep the values apart
    ctx = FieldContext(5, 1)
    for points in ((0, 1, 2, 3), (0, 1, 2, 4), (1, 2, 3, 4), (0, 1, 3, 4), (0, 6, 2, 8)):
        name = ",".join(str(x) for x in points)
        yield PlantedInstance(f"p=5 points={name}", Regime.GOOD, quartet_family(points, ctx))


def _quintic_far(e_values: Sequence[int]) -> Iterable[PlantedInstance]:
    # a = pi, so v(beta(a)) = 5/e < 5
    for e in e_values:
        if e < 2:
            continue
        ctx = FieldContext(5, e)
        for b in (1, 2, 3, 4):
            yield PlantedInstance(f"p=5 e={e} a=pi b={b}", Regime.FAR, quintic_family(ctx.pi(), b, ctx))


def _quintic_critical() -> Iterable[PlantedInstance]:
    # a = 5t with b != 3t mod 5 gives v(beta(a)) = 5
    ctx = FieldContext(5, 1)
    for t in (1, 2, 3, 4):
        for b in (1, 2, 3, 4):
            if (b - 3 * t) % 5 == 0:
                continue
            yield PlantedInstance(f"p=5 a={5 * t} b={b}", Regime.CRITICAL, quintic_family(5 * t, b, ctx))


def _quintic_near() -> Iterable[PlantedInstance]:
    # a = 5t with b = 3t + 5k gives v(beta(a)) = 5 + v(5k) > 5
    ctx = FieldContext(5, 1)
    for t in (1, 2, 3, 4):
        for k in (1, 2, 3, 5):
            b = 3 * t + 5 * k
            yield PlantedInstance(f"p=5 a={5 * t} b={b}", Regime.NEAR, quintic_family(5 * t, b, ctx))


def planted_instances(
    p: Optional[int] = None,
    e_values: Sequence[int] = (1, 2, 3, 4),
    regimes: Optional[Iterable[Regime]] = None,
) -> List[PlantedInstance]:
    """
    توليد التغطيات المزروعة

    Args:
        p: 3 أو 5 (الكل افتراضياً)
        e_values: قيم e الابتدائية للعائلات التي تستعملها
        regimes: الفروع المطلوبة (الكل افتراضياً)

    Returns:
        قائمة PlantedInstance
    """
    wanted = set(regimes) if regimes is not None else set(Regime)
    instances: List[PlantedInstance] = []
    if p in (None, 3):
        instances.extend(_cubic_good(e_values))
    if p in (None, 5):
        instances.extend(_quintic_good())
        instances.extend(_quintic_quartet())
        instances.extend(_quintic_far(e_values))
        instances.extend(_quintic_critical())
        instances.extend(_quintic_near())
    return [inst for inst in instances if inst.regime in wanted]


def required_ramification(cover: Cover) -> int:
    """
    أصغر e يجعل كل سماكات المصنف قابلة للتمثيل
    """
    ram = branch_data(cover)
    bc = classify_points(build_branch_tree(ram.values(), cover.ctx))
    e = cover.ctx.e
    for model in assemble_full_model(ram, bc, Mode.FORMULA):
        for thickness in model.thicknesses("X"):
            e = int(ilcm(e, cover.ctx.required_e(thickness)))
    return e


def verify_with_base_change(cover: Cover, max_e: Optional[int] = None) -> Verdict:
    """
    التحقق مع إعادة البناء فوق حقل أكبر كلما طلب المتحقق نصف قطر غير ممثل

    Raises:
        NeedsExtension: إذا تجاوز e الحد oracle.max_ramification_index
    """
    limit = int(max_e or get_setting("oracle.max_ramification_index", 40))
    target = required_ramification(cover)
    while True:
        if target > limit:
            raise NeedsExtension(
                f"verification needs e = {target} > {limit}", required_e=target
            )
        if target != cover.ctx.e:
            logger.info(f"Base change from e={cover.ctx.e} to e={target}")
            cover = cover.base_change(FieldContext(cover.p, target))
        try:
            return verify_instance(cover)
        except NotRepresentable as e:
            target = int(ilcm(target, e.required_e))


def run_planted(
    instances: Sequence[PlantedInstance], progress: Optional[bool] = None
) -> List[PlantedResult]:
    """
    تشغيل التحقق على دفعة من التغطيات المزروعة

    Instances refused with ResidualRootOutsideFp or NeedsExtension are
    recorded as skipped.
    """
    show = get_setting("performance.progress", True) if progress is None else progress
    results = []
    for instance in tqdm(instances, desc="planted", disable=not show):
        try:
            results.append(PlantedResult(instance, verify_with_base_change(instance.cover)))
        except (ResidualRootOutsideFp, NeedsExtension) as e:
            logger.warning(f"Skipping {instance.name}: {e}")
            results.append(PlantedResult(instance, skipped=str(e)))
    agree = sum(1 for r in results if r.verdict is not None and r.verdict.agree)
    logger.info(f"Planted batch: {agree}/{len(results)} AGREE")
    return results
