"""
Reduction Classifier
حساب الرسوم الثنائية للنموذج شبه المستقر الأصغر بالصيغ المغلقة

Every classification carries `steps`: the derivation lines (threshold,
chosen regime, instantiated formulas), in the manner of a worked solution.
"""

import itertools
import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Tuple

from covred.covers.branch_tree import BranchClassification, Tail
from covred.covers.cover import RamificationData
from covred.errors import (
    BadReduction,
    InadmissiblePartition,
    NotOrdinary,
    NotSimpleReduction,
    NotSimpleTail,
    ThresholdUndefined,
    TooFewBranchPoints,
)
from covred.reduction.dual_graph import (
    INFINITY_MARK,
    X_ROOT,
    Y_ROOT,
    ComponentMap,
    DualGraphPair,
    fiber_mark,
)
from covred.reduction.partitions import PartitionPair, admissible_partitions

logger = logging.getLogger(__name__)


class Regime(str, Enum):
    """فرع التصنيف لكل ذيل"""

    GOOD = "GOOD"
    FAR = "FAR"
    CRITICAL = "CRITICAL"
    NEAR = "NEAR"


class Mode(str, Enum):
    FORMULA = "formula"
    EXACT = "exact"


@dataclass
class TailClassification:
    """
    نتيجة تصنيف ذيل: الفرع والعتبة والنماذج والخطوات
    """

    pair: Tuple[str, str]
    epsilon: Fraction
    regime: Regime
    threshold: Fraction
    models: List[DualGraphPair]
    partitions: List[PartitionPair] = field(default_factory=list)
    steps: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict:
        return {
            "pair": list(self.pair),
            "epsilon": str(self.epsilon),
            "regime": self.regime.value,
            "threshold": str(self.threshold),
            "partitions": [pp.to_dict() for pp in self.partitions],
            "steps": list(self.steps),
        }


def _tagged(base: str, tag: str) -> str:
    return f"{base}[{tag}]" if tag else base


def _fiber_marks(ram: RamificationData, label: str) -> List[str]:
    return [fiber_mark(label, e) for e in ram.profile(label)]


def _central_pair(p: int) -> DualGraphPair:
    pair = DualGraphPair(p)
    pair.add_component("X", X_ROOT, ComponentMap.inseparable(p), [INFINITY_MARK])
    pair.add_component("Y", Y_ROOT, None, [INFINITY_MARK])
    pair.set_map(X_ROOT, Y_ROOT, p)
    return pair


def ordinary_thickness(n: int) -> Fraction:
    """سماكة الحافة C-C' لنقطة عادية ذات n نقطة في الليف"""
    return Fraction(1, n - 1)


def threshold(ram: RamificationData, label1: str, label2: str) -> Fraction:
    """
    العتبة p/(n1 + n2 - p - 1)

    Raises:
        ThresholdUndefined: إذا كان n1 + n2 <= p + 1
    """
    u = ram.n(label1) + ram.n(label2) - ram.p - 1
    if u <= 0:
        raise ThresholdUndefined(
            f"n({label1}) + n({label2}) = {u + ram.p + 1} <= p + 1; threshold undefined"
        )
    return Fraction(ram.p, u)


def regime_of(ram: RamificationData, label1: str, label2: str, epsilon: Fraction) -> Regime:
    bound = threshold(ram, label1, label2)
    if epsilon < bound:
        return Regime.FAR
    if epsilon == bound:
        return Regime.CRITICAL
    return Regime.NEAR


def classify_ordinary(
    ram: RamificationData,
    label: str,
    bc: Optional[BranchClassification] = None,
    tag: str = "",
) -> DualGraphPair:
    """
    نقطة تفرع عادية: مكوّنان في كل طرف

    Args:
        ram: بيانات التفرع
        label: اسم قيمة التفرع
        bc: تصنيف نقاط التفرع (للتحقق من أن النقطة عادية)
        tag: لاحقة لأسماء المكونات عند اللصق
    """
    if bc is not None and label not in bc.ordinary:
        raise NotOrdinary(f"{label} does not specialize to the root component")
    p = ram.p
    n = ram.n(label)
    pair = _central_pair(p)
    if n == 1:
        # totally ramified fiber: already a single point on C
        pair.add_marks("X", X_ROOT, _fiber_marks(ram, label))
        pair.add_marks("Y", Y_ROOT, [label])
        pair.meta = {"label": label, "n": n}
        return pair

    c1, d1 = _tagged("C'", tag or label), _tagged("D'", tag or label)
    nu = ordinary_thickness(n)
    pair.add_component("X", c1, ComponentMap.etale(p, 2, 1), _fiber_marks(ram, label))
    pair.add_component("Y", d1, None, [label])
    pair.add_edge("X", X_ROOT, c1, nu)
    pair.add_edge("Y", Y_ROOT, d1, p * nu)
    pair.set_map(c1, d1, p)
    pair.meta = {"label": label, "n": n, "thickness": str(nu)}
    logger.debug(f"Ordinary point {label}: n={n}, thickness {nu}")
    return pair


def classify_good_reduction(
    ram: RamificationData, bc: Optional[BranchClassification] = None
) -> DualGraphPair:
    """
    اختزال جيد لمجموعة التفرع: نجمة حول C و D
    """
    if bc is not None and bc.tails:
        raise BadReduction(f"branch locus has {len(bc.tails)} tail(s)")
    if ram.r < 3:
        raise TooFewBranchPoints(f"r = {ram.r} < 3")
    pair = _central_pair(ram.p)
    for label in ram.labels:
        pair.graft(classify_ordinary(ram, label))
    pair.meta = {"regime": Regime.GOOD.value}
    return pair


def _far_model(ram, l1, l2, eps, u, tag) -> Tuple[DualGraphPair, List[str]]:
    p = ram.p
    pair = _central_pair(p)
    base_x, base_y = _tagged("C'", tag), _tagged("D'", tag)
    pair.add_component("X", base_x, ComponentMap.inseparable(p))
    pair.add_component("Y", base_y)
    pair.add_edge("X", X_ROOT, base_x, eps / p)
    pair.add_edge("Y", Y_ROOT, base_y, eps)
    pair.set_map(base_x, base_y, p)
    steps = [f"C-C' thickness eps/p = {eps / p}, downstairs {eps}"]
    for i, label in enumerate((l1, l2), start=1):
        n = ram.n(label)
        nu = (p - u * eps) / (p * (n - 1))
        cx, cy = _tagged(f"C_{i}", tag), _tagged(f"D_{i}", tag)
        pair.add_component("X", cx, ComponentMap.etale(p, 2, 1), _fiber_marks(ram, label))
        pair.add_component("Y", cy, None, [label])
        pair.add_edge("X", base_x, cx, nu)
        pair.add_edge("Y", base_y, cy, p * nu)
        pair.set_map(cx, cy, p)
        steps.append(
            f"nu_{i} = (p - u*eps)/(p(n_{i}-1)) = ({p} - {u}*{eps})/({p}*{n - 1}) = {nu}"
        )
    return pair, steps


def _critical_model(ram, l1, l2, eps, tag) -> Tuple[DualGraphPair, List[str]]:
    p = ram.p
    pair = _central_pair(p)
    base_x, base_y = _tagged("C'", tag), _tagged("D'", tag)
    branch = 1 + sum(1 for label in (l1, l2) if ram.n(label) < p)
    marks = _fiber_marks(ram, l1) + _fiber_marks(ram, l2)
    pair.add_component("X", base_x, ComponentMap.etale(p, branch, 1), marks)
    pair.add_component("Y", base_y, None, [l1, l2])
    pair.add_edge("X", X_ROOT, base_x, eps / p)
    pair.add_edge("Y", Y_ROOT, base_y, eps)
    pair.set_map(base_x, base_y, p)
    return pair, [f"C-C' thickness eps/p = {eps / p}, downstairs {eps}; {branch} branch points"]


def _near_model(ram, l1, l2, eps, bound, partition: PartitionPair, tag) -> Tuple[DualGraphPair, List[str]]:
    p = ram.p
    eps0, eps1 = bound, eps - bound
    pair = _central_pair(p)
    base_x, base_y, top_y = _tagged("C'", tag), _tagged("D'", tag), _tagged("D_1", tag)
    pair.add_component("X", base_x, ComponentMap.etale(p, 2, 1))
    pair.add_component("Y", base_y)
    pair.add_component("Y", top_y, None, [l1, l2])
    pair.add_edge("X", X_ROOT, base_x, eps0 / p)
    pair.add_edge("Y", Y_ROOT, base_y, eps0)
    pair.add_edge("Y", base_y, top_y, eps1)
    pair.set_map(base_x, base_y, p)
    steps = [f"eps0 = {eps0}, eps1 = eps - eps0 = {eps1}", f"C-C' thickness eps0/p = {eps0 / p}"]
    for i, group in enumerate(partition.groups, start=1):
        d = group.d
        branch = int(d >= 2) + int(group.n1 < d) + int(group.n2 < d)
        cx = _tagged(f"C_{i}", tag)
        marks = [fiber_mark(l1, e) for e in group.part1] + [fiber_mark(l2, e) for e in group.part2]
        pair.add_component("X", cx, ComponentMap.etale(d, branch, 0), marks)
        pair.add_edge("X", base_x, cx, eps1 / d)
        pair.set_map(cx, top_y, d)
        steps.append(f"C_{i} ({group}): thickness eps1/d = {eps1 / d}")
    pair.meta = {"partition": str(partition)}
    return pair, steps


def classify_tail(
    ram: RamificationData,
    label1: str,
    label2: str,
    epsilon: Fraction,
    mode: Mode = Mode.FORMULA,
    partition: Optional[PartitionPair] = None,
    bc: Optional[BranchClassification] = None,
    tag: str = "",
) -> TailClassification:
    """
    تصنيف ذيل بسيط {λ1, λ2} بسماكة ε حسب موقع ε من العتبة

    Args:
        ram: بيانات التفرع
        label1, label2: قيمتا التفرع في الذيل
        epsilon: سماكة الذيل
        mode: FORMULA يعيد كل التقسيمات في الحالة القريبة، EXACT يستعمل partition
        partition: التقسيم المحقق (وضع EXACT)
        bc: تصنيف نقاط التفرع (للتحقق من أن الزوج ذيل بسيط)
        tag: لاحقة لأسماء المكونات عند اللصق

    Returns:
        TailClassification
    """
    epsilon = Fraction(epsilon)
    pair = tuple(sorted((label1, label2)))
    if bc is not None and pair not in {t.pair for t in bc.tails}:
        raise NotSimpleTail(f"{pair} is not a simple tail of the branch tree")
    if epsilon <= 0:
        raise NotSimpleTail(f"tail thickness must be positive, got {epsilon}")

    p = ram.p
    n1, n2 = ram.n(label1), ram.n(label2)
    bound = threshold(ram, label1, label2)
    u = n1 + n2 - p - 1
    regime = regime_of(ram, label1, label2, epsilon)
    steps = [
        f"n({label1}) = {n1}, n({label2}) = {n2}, u = n1 + n2 - p - 1 = {u}",
        f"threshold p/u = {p}/{u} = {bound}",
        f"eps = {epsilon} {'<' if regime is Regime.FAR else '=' if regime is Regime.CRITICAL else '>'} "
        f"{bound}: {regime.value}",
    ]
    result = TailClassification(pair=pair, epsilon=epsilon, regime=regime, threshold=bound, models=[], steps=steps)

    if regime is Regime.FAR:
        model, more = _far_model(ram, label1, label2, epsilon, u, tag)
        result.models.append(model)
        result.steps.extend(more)
    elif regime is Regime.CRITICAL:
        model, more = _critical_model(ram, label1, label2, epsilon, tag)
        result.models.append(model)
        result.steps.extend(more)
    else:
        admissible = admissible_partitions(ram.profile(label1), ram.profile(label2), p)
        if mode is Mode.EXACT:
            if partition is None or partition not in admissible:
                raise InadmissiblePartition(f"partition {partition} is not admissible for {pair}")
            chosen = [partition]
        else:
            chosen = admissible
        result.steps.append(f"{len(admissible)} admissible partition(s); s = n1 + n2 - p = {n1 + n2 - p}")
        for pp in chosen:
            model, more = _near_model(ram, label1, label2, epsilon, bound, pp, tag)
            result.models.append(model)
            result.partitions.append(pp)
            result.steps.extend(more)

    for model in result.models:
        model.meta.update({"regime": regime.value, "pair": list(pair), "epsilon": str(epsilon)})
    logger.info(f"Tail {pair} with eps={epsilon}: {regime.value} ({len(result.models)} model(s))")
    return result


def assemble_full_model(
    ram: RamificationData,
    bc: BranchClassification,
    mode: Mode = Mode.FORMULA,
    partitions: Optional[Mapping[Tuple[str, str], PartitionPair]] = None,
) -> List[DualGraphPair]:
    """
    لصق نجوم النقاط العادية وأشجار الذيول على الزوج المركزي C -> D

    In formula mode the result is the cartesian product of the NEAR tails'
    partition choices; in exact mode it has one element.
    """
    if not bc.simple:
        raise NotSimpleReduction(
            f"branch locus is not of simple reduction (cluster {bc.offending})",
            cluster=bc.offending,
        )
    partitions = partitions or {}
    base = _central_pair(ram.p)
    for label in bc.ordinary:
        base.graft(classify_ordinary(ram, label, bc))

    choices: List[List[DualGraphPair]] = []
    regimes: Dict[str, str] = {}
    for tail in bc.tails:
        tag = "|".join(tail.pair)
        result = classify_tail(
            ram, tail.pair[0], tail.pair[1], tail.epsilon, mode,
            partition=partitions.get(tail.pair), tag=tag,
        )
        regimes[tag] = result.regime.value
        choices.append(result.models)

    models = []
    for combination in itertools.product(*choices):
        model = _central_pair(ram.p)
        model.graft(base)
        for piece in combination:
            model.graft(piece)
        model.meta = {
            "regimes": dict(regimes) if regimes else {"all": Regime.GOOD.value},
            "partitions": {
                piece.meta["pair"][0] + "|" + piece.meta["pair"][1]: piece.meta["partition"]
                for piece in combination
                if "partition" in piece.meta
            },
        }
        models.append(model)
    logger.info(f"Assembled {len(models)} full model(s) over {len(bc.tails)} tail(s)")
    return models
