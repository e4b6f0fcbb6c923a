"""
Branch Tree Module
الشجرة المترية للنموذج المستقر للخط الإسقاطي المعلّم بنقاط التفرع
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import networkx as nx

from covred.arithmetic.valued_field import Element, FieldContext, residue, val
from covred.errors import AllPointsCoalesce, PreconditionViolated, VertexNotFound

logger = logging.getLogger(__name__)

ROOT = "D"
INFINITY_MARK = "∞"


class MetricTree:
    """
    شجرة مترية جذرها المكوّن D الذي يحمل ∞

    Nodes carry `depth` and `marks`; edges carry `thickness` (exact Fraction).

    Args:
        graph: رسم networkx موجه من الأب إلى الابن
    """

    def __init__(self, graph: Optional[nx.DiGraph] = None):
        self.graph = graph if graph is not None else nx.DiGraph()
        if ROOT not in self.graph:
            self.graph.add_node(ROOT, depth=Fraction(0), marks=(INFINITY_MARK,))

    @property
    def root(self) -> str:
        return ROOT

    def vertices(self) -> List[str]:
        return sorted(self.graph.nodes)

    def marks(self, vertex: str) -> Tuple[str, ...]:
        self._require(vertex)
        return self.graph.nodes[vertex]["marks"]

    def depth(self, vertex: str) -> Fraction:
        self._require(vertex)
        return self.graph.nodes[vertex]["depth"]

    def children(self, vertex: str) -> List[str]:
        self._require(vertex)
        return sorted(self.graph.successors(vertex))

    def edges(self) -> List[Tuple[str, str, Fraction]]:
        return sorted((u, v, d["thickness"]) for u, v, d in self.graph.edges(data=True))

    def marked_points(self) -> Dict[str, str]:
        """كل علامة -> الرأس الذي تتخصص فيه"""
        return {
            mark: vertex
            for vertex, data in self.graph.nodes(data=True)
            for mark in data["marks"]
            if mark != INFINITY_MARK
        }

    def _require(self, vertex: str) -> None:
        if vertex not in self.graph:
            raise VertexNotFound(vertex)

    def to_dict(self) -> Dict:
        return {
            "root": ROOT,
            "vertices": [
                {"name": v, "depth": str(self.depth(v)), "marks": list(self.marks(v))}
                for v in self.vertices()
            ],
            "edges": [{"u": u, "v": v, "thickness": str(t)} for u, v, t in self.edges()],
        }

    def to_dot(self) -> str:
        lines = ["graph branch_tree {"]
        for v in self.vertices():
            marks = ", ".join(self.marks(v))
            lines.append(f'  "{v}" [label="{v}\\n{{{marks}}}"];')
        for u, v, t in self.edges():
            lines.append(f'  "{u}" -- "{v}" [label="{t}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Tail:
    """
    ذيل بسيط: مكوّن يلتقي D فقط ويحمل قيمتي تفرع بالضبط

    Args:
        pair: الاسمان مرتبان
        epsilon: سماكة نقطة الالتقاء بـ D
        vertex: اسم الرأس في الشجرة
    """

    pair: Tuple[str, str]
    epsilon: Fraction
    vertex: Optional[str] = None


@dataclass(frozen=True)
class BranchClassification:
    """
    النقاط العادية والذيول وهل الاختزال بسيط

    Args:
        ordinary: قيم التفرع التي تتخصص في D
        tails: الذيول البسيطة
        simple: هل كل ذيل بسيط
        offending: أول رأس يخالف البساطة
    """

    ordinary: Tuple[str, ...]
    tails: Tuple[Tail, ...]
    simple: bool
    offending: Optional[str] = None

    @classmethod
    def from_tails(cls, labels: Sequence[str], tails: Sequence[Tail]) -> "BranchClassification":
        """بناء تصنيف مباشرة (وضع الصيغ)"""
        in_tails = {label for t in tails for label in t.pair}
        ordinary = tuple(sorted(label for label in labels if label not in in_tails))
        return cls(ordinary=ordinary, tails=tuple(tails), simple=True)

    def to_dict(self) -> Dict:
        return {
            "ordinary": list(self.ordinary),
            "tails": [{"pair": list(t.pair), "epsilon": str(t.epsilon)} for t in self.tails],
            "simple": self.simple,
            "offending": self.offending,
        }


def _labelled(S: Union[Mapping[str, Element], Sequence[Element]]) -> Dict[str, Element]:
    if isinstance(S, Mapping):
        return dict(S)
    return {str(x): x for x in S}


def build_branch_tree(
    S: Union[Mapping[str, Element], Sequence[Element]], ctx: Optional[FieldContext] = None
) -> MetricTree:
    """
    بناء شجرة العناقيد المتداخلة من التقييمات الدقيقة للفروق

    Args:
        S: قيم التفرع المنتهية (قائمة أو قاموس اسم -> عنصر)
        ctx: سياق الحقل (للتحقق فقط)

    Raises:
        AllPointsCoalesce: أقل من باقيين مختلفين
    """
    points = _labelled(S)
    for label, x in points.items():
        if ctx is not None and x.ctx != ctx:
            raise PreconditionViolated(f"{label} does not live in {ctx}")
        if val(x) < 0:
            raise PreconditionViolated(f"branch value {label} is not integral")
    residues = {int(residue(x)) for x in points.values()}
    if len(residues) < 2:
        raise AllPointsCoalesce(f"{len(points)} branch value(s) share a single residue")

    labels = sorted(points)
    distances = {
        (a, b): val(points[a] - points[b]) for a in labels for b in labels if a != b
    }

    tree = MetricTree()
    _split(tree, ROOT, labels, Fraction(0), distances)
    logger.debug(f"Branch tree with {tree.graph.number_of_nodes()} components")
    return tree


def _split(
    tree: MetricTree,
    vertex: str,
    labels: List[str],
    depth: Fraction,
    distances: Dict[Tuple[str, str], Fraction],
) -> None:
    """
    تقسيم المجموعة إلى أصناف v(x - y) > depth
    """
    classes: List[List[str]] = []
    for label in labels:
        for cls in classes:
            if distances[(cls[0], label)] > depth:
                cls.append(label)
                break
        else:
            classes.append([label])

    marks = list(tree.graph.nodes[vertex]["marks"])
    index = 0
    for cls in sorted(classes):
        if len(cls) == 1:
            marks.append(cls[0])
            continue
        index += 1
        child = f"{vertex}.{index}"
        child_depth = min(distances[(a, b)] for a in cls for b in cls if a != b)
        tree.graph.add_node(child, depth=child_depth, marks=())
        tree.graph.add_edge(vertex, child, thickness=child_depth - depth)
        _split(tree, child, cls, child_depth, distances)
    tree.graph.nodes[vertex]["marks"] = tuple(sorted(marks, key=lambda m: (m != INFINITY_MARK, m)))


def classify_points(t: MetricTree) -> BranchClassification:
    """
    النقاط العادية = علامات D؛ البساطة = كل ابن لـ D ورقة تحمل علامتين بالضبط
    """
    ordinary = tuple(sorted(m for m in t.marks(ROOT) if m != INFINITY_MARK))
    tails = []
    offending = None
    for child in t.children(ROOT):
        marks = t.marks(child)
        if t.children(child) or len(marks) != 2:
            offending = offending or child
            continue
        tails.append(
            Tail(
                pair=tuple(sorted(marks)),
                epsilon=t.graph.edges[ROOT, child]["thickness"],
                vertex=child,
            )
        )
    simple = offending is None
    if not simple:
        logger.info(f"Branch locus is not of simple reduction at {offending}")
    return BranchClassification(ordinary=ordinary, tails=tuple(tails), simple=simple, offending=offending)


def distance(t: MetricTree, c1: str, c2: str) -> Fraction:
    """
    مجموع سماكات الحواف على المسار بين مكوّنين
    """
    t._require(c1)
    t._require(c2)
    if c1 == c2:
        return Fraction(0)
    return Fraction(
        nx.shortest_path_length(t.graph.to_undirected(as_view=True), c1, c2, weight="thickness")
    )


def is_simple_reduction(
    S: Union[Mapping[str, Element], Sequence[Element]], ctx: Optional[FieldContext] = None
) -> bool:
    return classify_points(build_branch_tree(S, ctx)).simple
