"""
Blow-up Oracle
التحقق المستقل: النموذج الأساسي والتفجيرات المتتالية وفصل الألياف من المعاملات فقط

The oracle walks the tree of discs D(c, ρ) on the X-line. For each disc it
reads the reduction of β(π_ρ X + c) − λ for every branch value λ; residual
roots are residue classes, residual multiplicities count points. A class
holding two or more fiber points becomes a child component whose radius is
the smallest root valuation above ρ of the recentred polynomial. The
Y-side is computed from image discs, independently of the scaling law.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from covred.arithmetic.newton import (
    Integral,
    PolynomialV,
    check_integrality,
    smallest_root_valuation_above,
)
from covred.arithmetic.residual import ResidualPoly
from covred.arithmetic.valued_field import Element, residue, uniformizer_power, val
from covred.config import get_setting
from covred.covers.branch_tree import build_branch_tree, classify_points
from covred.covers.cover import Cover, Fiber, RamificationData, branch_data
from covred.errors import (
    CenterNotRoot,
    InadmissiblePartition,
    IntegralityFailed,
    NonIntegral,
    NonTermination,
    NotSimpleReduction,
    PreconditionViolated,
    ResidualRootOutsideFp,
)
from covred.reduction.classifier import (
    Mode,
    Regime,
    assemble_full_model,
    regime_of,
    threshold,
)
from covred.reduction.dual_graph import (
    INFINITY_MARK,
    X_ROOT,
    Y_ROOT,
    ComponentMap,
    DualGraphPair,
    components_with_marks,
    fiber_mark,
    mark_label,
)
from covred.reduction.partitions import PartitionGroup, PartitionPair

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Stage:
    center: Element
    radius: Fraction


@dataclass(frozen=True, eq=False)
class ModelState:
    """
    حالة نموذج محلي: القرص D(c, ρ) وصورته D(β(c), σ)

    Args:
        cover: التغطية
        center: المركز c
        radius: نصف القطر ρ
        scale: عنصر تقييمه ρ
        image_center: β(c)
        image_radius: σ = تقييم غاوس لـ β(π_ρ X + c) − β(c)
        local: (β(π_ρ X + c) − β(c)) / π_σ
        residual: اختزال local
        stages: مكدس المخططات المطبقة
    """

    cover: Cover
    center: Element
    radius: Fraction
    scale: Element
    image_center: Element
    image_radius: Fraction
    local: PolynomialV
    residual: ResidualPoly
    stages: Tuple[Stage, ...] = ()

    @property
    def degree(self) -> int:
        return self.residual.degree

    def shifted(self, value: Element) -> Optional[Element]:
        """(λ − β(c)) / π_σ إذا كانت متكاملة"""
        shift = (value - self.image_center) / uniformizer_power(self.image_radius, self.cover.ctx)
        return shift if val(shift) >= 0 else None

    def fiber_residual(self, value: Element) -> Optional[ResidualPoly]:
        """اختزال β(π_ρ X + c) − λ بعد التطبيع، أو None إن كان الليف خارج القرص"""
        shift = self.shifted(value)
        if shift is None:
            return None
        return self.residual.sub_constant(int(residue(shift)))

    def to_trace(self) -> Dict:
        return {
            "center": str(self.center),
            "radius": str(self.radius),
            "image_center": str(self.image_center),
            "image_radius": str(self.image_radius),
            "residual": str(self.residual),
        }


def chart(cover: Cover, center: Element, radius: Fraction, stages: Tuple[Stage, ...] = ()) -> ModelState:
    """
    المخطط المحلي عند المركز c ونصف القطر ρ

    Raises:
        NotRepresentable: إذا كان ρ خارج (1/e)Z
    """
    ctx = cover.ctx
    radius = Fraction(radius)
    scale = uniformizer_power(radius, ctx)
    moved = cover.beta.affine_substitute(scale, center)
    image_center = moved.constant
    h = moved - PolynomialV((image_center,), ctx)
    local, sigma = h.gauss_normalize()
    return ModelState(
        cover=cover,
        center=center,
        radius=radius,
        scale=scale,
        image_center=image_center,
        image_radius=Fraction(sigma),
        local=local,
        residual=local.reduce(),
        stages=stages + (Stage(center, radius),),
    )


def fundamental_model(cover: Cover) -> ModelState:
    """
    النموذج الأساسي: β متكاملة واختزالها X^p، و γ(X) = X^p β(1/X) اختزالها 1

    Raises:
        IntegralityFailed
    """
    outcome = check_integrality(cover.beta)
    if not isinstance(outcome, Integral):
        raise IntegralityFailed(f"fundamental model fails: {outcome.describe()}")
    gamma = cover.beta.reversed(cover.p)
    if not gamma.is_integral() or gamma.reduce().dense != (1,):
        raise IntegralityFailed(f"chart at infinity does not reduce to 1: gamma = {gamma}")
    state = chart(cover, cover.ctx.zero(), Fraction(0), ())
    logger.debug(f"Fundamental model: beta = {cover.beta}, gamma = {gamma}")
    return state


def blow_up(
    state: ModelState, w: int, nu: Fraction, target: Optional[Element] = None
) -> ModelState:
    """
    تفجير عند الجذر w للكثير المتبقي بسماكة ν

    Args:
        state: الحالة الحالية
        w: جذر في F_p
        nu: السماكة الموجبة
        target: قيمة تفرع يُؤخذ ليفها بدل β(c)
    """
    nu = Fraction(nu)
    if nu <= 0:
        raise PreconditionViolated(f"blow-up thickness must be positive, got {nu}")
    uniformizer_power(nu, state.cover.ctx)
    if target is None:
        poly = state.residual
    else:
        poly = state.fiber_residual(target)
        if poly is None:
            raise NonIntegral(f"{target} does not lie in the image disc")
    if poly.evaluate(w) != 0:
        raise CenterNotRoot(f"{w} is not a root of {poly}")
    center = state.center + state.scale * w
    logger.info(f"Blow-up at residue {w} with thickness {nu}")
    return chart(state.cover, center, state.radius + nu, state.stages)


@dataclass(frozen=True)
class SeparationStatus:
    separated: bool
    count: int

    def __str__(self) -> str:
        return f"{'separated' if self.separated else 'coalesced'}({self.count})"


def separation_status(state: ModelState, value: Element, n: Optional[int] = None) -> SeparationStatus:
    """
    عدد الاختصاصات المختلفة لليف = درجة الجزء الخالي من المربعات

    Args:
        state: الحالة
        value: قيمة التفرع
        n: عدد نقاط الليف (يُحسب من التغطية إن لم يُعطَ)
    """
    residual = state.fiber_residual(value)
    if residual is None:
        raise NonIntegral(f"{value} is not integral in the current chart")
    count = residual.squarefree_degree()
    if n is None:
        values = {f.value: f.n for f in branch_data(state.cover).fibers}
        n = values.get(value, state.cover.p)
    return SeparationStatus(separated=count == n, count=count)


@dataclass
class OracleResult:
    """
    نتيجة المتحقق: زوج الرسوم وسجل المراحل
    """

    pair: DualGraphPair
    trace: List[Dict] = field(default_factory=list)


class _Explorer:
    """استكشاف شجرة الأقراص"""

    def __init__(self, cover: Cover, fibers: Sequence[Fiber], ram: RamificationData):
        self.cover = cover
        self.ctx = cover.ctx
        self.p = cover.p
        self.fibers = list(fibers)
        self.all_values = [f.value for f in ram.fibers]
        self.pair = DualGraphPair(self.p)
        self.images: List[Tuple[str, Element, Fraction]] = []
        self.trace: List[Dict] = []
        self.max_depth = int(get_setting("oracle.max_depth", 64))
        self.max_refinements = int(get_setting("oracle.max_refinements", 200))

    def run(self) -> OracleResult:
        state = fundamental_model(self.cover)
        self._visit(state, X_ROOT, None, None, 0)
        self.pair.add_marks("X", X_ROOT, [INFINITY_MARK])
        self.pair.add_marks("Y", Y_ROOT, [INFINITY_MARK])
        return OracleResult(pair=self.pair, trace=self.trace)

    # --- components ---

    def _image(self, state: ModelState, name: str) -> str:
        b, sigma = state.image_center, state.image_radius
        for y, center, radius in self.images:
            if radius == sigma and val(b - center) >= sigma:
                return y
        y = Y_ROOT + name[len(X_ROOT):]
        self.images.append((y, b, sigma))
        self.pair.add_component("Y", y)
        return y

    def _label(self, state: ModelState) -> ComponentMap:
        rho = state.residual
        degree = rho.degree
        if rho.is_inseparable():
            return ComponentMap.inseparable(degree)
        branch = wild = 0
        if degree >= 2:
            branch += 1
            wild += int(degree % self.p == 0)
        seen = set()
        for value in self.all_values:
            shift = state.shifted(value)
            if shift is None:
                continue
            a = int(residue(shift))
            if a in seen:
                continue
            seen.add(a)
            fiber = rho.sub_constant(a)
            if fiber.squarefree_degree() < fiber.degree:
                branch += 1
                wild += int(any(k % self.p == 0 for k in fiber.multiplicities()))
        return ComponentMap.etale(degree, branch, wild)

    def _add_component(self, state: ModelState, name: str, parent: Optional[Tuple[str, ModelState, str]]) -> str:
        y = self._image(state, name)
        self.pair.add_component("X", name, self._label(state))
        self.pair.set_map(name, y, state.degree)
        if parent is not None:
            parent_name, parent_state, parent_y = parent
            self.pair.add_edge("X", parent_name, name, state.radius - parent_state.radius)
            if parent_y == y:
                logger.warning(f"Component {name} maps onto its parent's image {y}")
            elif not self.pair.downstairs.has_edge(parent_y, y):
                self.pair.add_edge("Y", parent_y, y, state.image_radius - parent_state.image_radius)
        return y

    def _add_leaf(self, name: str, y: str, label: str, e: int) -> None:
        self.pair.add_marks("X", name, [fiber_mark(label, e)])
        if label not in self.pair.marks("Y", y):
            self.pair.add_marks("Y", y, [label])

    # --- recursion ---

    def _reduces_to(self, state: ModelState, x: Element, w: int) -> bool:
        t = (x - state.center) / state.scale
        return val(t) >= 0 and int(residue(t)) == w

    def _visit(self, state: ModelState, name: str, parent_name, parent_state, depth: int) -> None:
        if depth > self.max_depth:
            raise NonTermination(f"blow-up depth exceeded {self.max_depth}")
        parent = None
        if parent_name is not None:
            parent = (parent_name, parent_state, self.pair.vertical[parent_name][0])
        y = self._add_component(state, name, parent)

        classes: Dict[Tuple, Dict[str, Tuple[int, int, List[Tuple[Element, int]]]]] = {}
        entry_trace = dict(state.to_trace(), component=name, fibers={})
        for fiber in self.fibers:
            rho = state.fiber_residual(fiber.value)
            if rho is None or rho.degree < 1:
                continue
            entry_trace["fibers"][fiber.label] = str(rho)
            for g, m in rho.irreducible_factors():
                if len(g) == 2:
                    w = (-g[1]) % self.p
                    crit = [(x, mx) for x, mx in fiber.critical if self._reduces_to(state, x, w)]
                    key: Tuple = (0, w)
                else:
                    crit = []
                    key = (1, g)
                count = len(crit) + (m - sum(mx for _, mx in crit))
                classes.setdefault(key, {})[fiber.label] = (count, m, crit)
        self.trace.append(entry_trace)

        index = 0
        for key in sorted(classes):
            entry = classes[key]
            total = sum(count for count, _, _ in entry.values())
            if key[0] == 1:
                if total >= 2:
                    raise ResidualRootOutsideFp(
                        f"points of several fibers meet at a residue outside F_{self.p} on {name}"
                    )
                (label, (_, m, _)), = entry.items()
                for _ in range(len(key[1]) - 1):
                    self._add_leaf(name, y, label, m)
                continue
            if total == 1:
                (label, (_, m, _)), = entry.items()
                self._add_leaf(name, y, label, m)
                continue
            index += 1
            child = self._locate(state, key[1], entry)
            self._visit(child, f"{name}.{index}", name, state, depth + 1)

    def _locate(self, state: ModelState, w: int, entry: Dict) -> ModelState:
        """
        مركز العنقود ونصف قطره: نقطة حرجة دقيقة إن وجدت، وإلا رفع الباقي مع التحسين
        """
        values = {f.label: f.value for f in self.fibers if f.label in entry}
        crit = sorted((x for _, _, cw in entry.values() for x, _ in cw), key=str)
        exact = bool(crit)
        center = crit[0] if exact else state.center + state.scale * w
        for _ in range(self.max_refinements):
            moved = self.cover.beta.translate(center)
            radius = None
            for value in values.values():
                candidate = smallest_root_valuation_above(
                    moved - PolynomialV((value,), self.ctx), state.radius
                )
                if candidate is not None and (radius is None or candidate < radius):
                    radius = candidate
            if radius is None:
                raise NonTermination(f"no cluster radius above {state.radius} at {center}")
            trial = chart(self.cover, center, radius, state.stages)
            if exact:
                return trial
            residues = set()
            for value in values.values():
                rho = trial.fiber_residual(value)
                for g, _ in rho.irreducible_factors():
                    residues.add((-g[1]) % self.p if len(g) == 2 else tuple(g))
            if len(residues) >= 2:
                return trial
            # one residue class left; recentering needs it in F_p
            (u,) = {w for value in values.values() for w in trial.fiber_residual(value).roots_in_fp()}
            self.trace.append(dict(trial.to_trace(), refine=True))
            center = center + trial.scale * u
        raise NonTermination(f"center refinement did not converge after {self.max_refinements} steps")


def separate_fibers(cover: Cover, labels: Optional[Sequence[str]] = None) -> OracleResult:
    """
    فصل الألياف بالتفجيرات الأصغرية

    Args:
        cover: تغطية متكاملة القيم مع β(0) = 0
        labels: أسماء قيم التفرع المطلوب فصلها (الكل افتراضياً)

    Returns:
        OracleResult
    """
    ram = branch_data(cover)
    fibers = [f for f in ram.fibers if labels is None or f.label in labels]
    if labels is not None and len(fibers) != len(set(labels)):
        raise PreconditionViolated(f"unknown branch value among {list(labels)}")
    result = _Explorer(cover, fibers, ram).run()
    logger.info(
        f"Oracle: {len(result.pair.components('X'))} upstairs and "
        f"{len(result.pair.components('Y'))} downstairs component(s)"
    )
    return result


def realized_partition(pair: DualGraphPair, label1: str, label2: str) -> PartitionPair:
    """
    التقسيم المحقق لذيل قريب كما يُقرأ من المكونات الحاملة للأليافين
    """
    groups = []
    for x in components_with_marks(pair, [label1, label2]):
        marks = [mark_label(m) for m in pair.marks("X", x) if m != INFINITY_MARK]
        part1 = tuple(sorted((e for lab, e in marks if lab == label1), reverse=True))
        part2 = tuple(sorted((e for lab, e in marks if lab == label2), reverse=True))
        groups.append(PartitionGroup(sum(part1), part1, part2))
    return PartitionPair(tuple(groups))


@dataclass
class Verdict:
    """
    حكم المقارنة بين المتحقق والمصنف
    """

    agree: bool
    diff: Dict
    expected: Optional[DualGraphPair]
    observed: DualGraphPair
    regimes: Dict[str, str]
    checks: List[str]
    trace: List[Dict] = field(default_factory=list)

    @property
    def label(self) -> str:
        return "AGREE" if self.agree else "DISAGREE"

    def to_dict(self) -> Dict:
        return {
            "verdict": self.label,
            "diff": self.diff,
            "regimes": self.regimes,
            "checks": self.checks,
        }


def _tail_checks(
    pair: DualGraphPair, ram: RamificationData, l1: str, l2: str, eps: Fraction, regime: Regime
) -> List[str]:
    """
    المتراجحة ν <= 1/(n1+n2-p-1)، و v(λ) = pν في الحالة البعيدة، و ε0+ε1 = ε في القريبة
    """
    problems = []
    holders = set(components_with_marks(pair, [l1, l2]))
    base = None
    for child in pair.upstairs.neighbors(X_ROOT):
        if holders.issubset(set(pair.subtree("X", child))):
            base = child
    if base is None:
        return [f"tail {l1}|{l2}: no component above C carries both fibers"]
    nu = pair.upstairs.edges[X_ROOT, base]["thickness"]
    bound = threshold(ram, l1, l2) / ram.p
    if nu > bound:
        problems.append(f"tail {l1}|{l2}: nu = {nu} exceeds {bound}")
    if (nu == bound) != (regime in (Regime.CRITICAL, Regime.NEAR)):
        problems.append(f"tail {l1}|{l2}: nu = {nu} vs bound {bound} contradicts {regime.value}")
    if regime is Regime.FAR and eps != ram.p * nu:
        problems.append(f"tail {l1}|{l2}: v(lambda) = {eps} != p*nu = {ram.p * nu}")
    if regime is Regime.NEAR:
        base_y = pair.vertical[base][0]
        eps0 = pair.downstairs.edges[Y_ROOT, base_y]["thickness"]
        above = [n for n in pair.downstairs.neighbors(base_y) if n != Y_ROOT]
        if len(above) != 1:
            problems.append(f"tail {l1}|{l2}: expected one component above {base_y}")
        else:
            eps1 = pair.downstairs.edges[base_y, above[0]]["thickness"]
            if eps0 + eps1 != eps:
                problems.append(f"tail {l1}|{l2}: eps0 + eps1 = {eps0 + eps1} != {eps}")
    return problems


def verify_instance(cover: Cover) -> Verdict:
    """
    تشغيل المتحقق والمصنف (الوضع الدقيق بالتقسيمات المحققة) ومقارنتهما
    """
    ram = branch_data(cover)
    tree = build_branch_tree(ram.values(), cover.ctx)
    bc = classify_points(tree)
    if not bc.simple:
        raise NotSimpleReduction(
            f"branch locus is not of simple reduction (cluster {bc.offending})",
            cluster=bc.offending,
        )
    oracle = separate_fibers(cover)
    observed = oracle.pair
    checks = observed.violations()

    regimes: Dict[str, str] = {}
    partitions: Dict[Tuple[str, str], PartitionPair] = {}
    for tail in bc.tails:
        l1, l2 = tail.pair
        regime = regime_of(ram, l1, l2, tail.epsilon)
        regimes["|".join(tail.pair)] = regime.value
        if regime is Regime.NEAR:
            partitions[tail.pair] = realized_partition(observed, l1, l2)
        checks.extend(_tail_checks(observed, ram, l1, l2, tail.epsilon, regime))
    if not bc.tails:
        regimes["all"] = Regime.GOOD.value

    try:
        (expected,) = assemble_full_model(ram, bc, Mode.EXACT, partitions)
    except InadmissiblePartition as e:
        logger.info(f"Realized partition rejected: {e}")
        return Verdict(
            agree=False,
            diff={"partition": str(e)},
            expected=None,
            observed=observed,
            regimes=regimes,
            checks=checks,
            trace=oracle.trace,
        )
    agree = expected.is_isomorphic(observed) and not checks
    diff = expected.diff(observed)
    logger.info(f"Verification: {'AGREE' if agree else 'DISAGREE'} ({regimes})")
    return Verdict(
        agree=agree,
        diff=diff,
        expected=expected,
        observed=observed,
        regimes=regimes,
        checks=checks,
        trace=oracle.trace,
    )
