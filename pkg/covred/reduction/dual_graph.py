"""
Dual Graph Pairs
أزواج الرسوم الثنائية (X_k, Y_k) مع درجات الخريطة والسماكات
"""

import json
import logging
from collections import Counter
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from covred.errors import PreconditionViolated

logger = logging.getLogger(__name__)

X_ROOT = "C"
Y_ROOT = "D"
INFINITY_MARK = "∞"

INSEPARABLE = "inseparable"
ETALE = "etale"


@dataclass(frozen=True)
class ComponentMap:
    """
    وصف الخريطة المختزلة على مكوّن من X_k

    Args:
        kind: inseparable أو etale
        degree: درجة الخريطة
        branch_points: عدد النقاط التي تتفرع فوقها
        wild: عدد النقاط ذات التفرع البري
    """

    kind: str
    degree: int
    branch_points: int = 0
    wild: int = 0

    @classmethod
    def inseparable(cls, degree: int) -> "ComponentMap":
        return cls(INSEPARABLE, degree, 0, 0)

    @classmethod
    def etale(cls, degree: int, branch_points: int, wild: int) -> "ComponentMap":
        return cls(ETALE, degree, branch_points, wild)

    def __str__(self) -> str:
        if self.kind == INSEPARABLE:
            return f"insep({self.degree})"
        return f"etale({self.degree}; b={self.branch_points}, w={self.wild})"

    def to_dict(self) -> Dict:
        return asdict(self)


def fiber_mark(label: str, e: int) -> str:
    """علامة نقطة في الليف: الاسم^المضاعفة"""
    return f"{label}^{e}"


def mark_label(mark: str) -> Tuple[str, int]:
    label, _, e = mark.rpartition("^")
    return label, int(e)


class DualGraphPair:
    """
    زوج الرسمين الثنائيين للنموذج شبه المستقر

    Upstairs nodes carry `label` (ComponentMap) and `marks`; downstairs
    nodes carry `marks`. Edges carry an exact `thickness`. The vertical
    map sends each upstairs component to a downstairs one with a degree.
    """

    def __init__(self, p: int):
        self.p = p
        self.upstairs = nx.Graph()
        self.downstairs = nx.Graph()
        self.vertical: Dict[str, Tuple[str, int]] = {}
        self.meta: Dict = {}

    # --- construction ---

    def side(self, side: str) -> nx.Graph:
        if side == "X":
            return self.upstairs
        if side == "Y":
            return self.downstairs
        raise PreconditionViolated(f"unknown side {side!r}")

    def add_component(
        self,
        side: str,
        name: str,
        label: Optional[ComponentMap] = None,
        marks: Iterable[str] = (),
    ) -> None:
        graph = self.side(side)
        if name in graph:
            raise PreconditionViolated(f"component {name} already exists on {side}")
        graph.add_node(name, label=label, marks=tuple(sorted(marks)))

    def add_marks(self, side: str, name: str, marks: Iterable[str]) -> None:
        node = self.side(side).nodes[name]
        node["marks"] = tuple(sorted(node["marks"] + tuple(marks)))

    def add_edge(self, side: str, u: str, v: str, thickness: Fraction) -> None:
        thickness = Fraction(thickness)
        if thickness <= 0:
            raise PreconditionViolated(f"non-positive thickness {thickness} on {u}-{v}")
        self.side(side).add_edge(u, v, thickness=thickness)

    def set_map(self, x: str, y: str, degree: int) -> None:
        self.vertical[x] = (y, degree)

    # --- queries ---

    def components(self, side: str) -> List[str]:
        return sorted(self.side(side).nodes)

    def label(self, x: str) -> Optional[ComponentMap]:
        return self.upstairs.nodes[x]["label"]

    def marks(self, side: str, name: str) -> Tuple[str, ...]:
        return self.side(side).nodes[name]["marks"]

    def root(self, side: str) -> str:
        return X_ROOT if side == "X" else Y_ROOT

    def parent_map(self, side: str) -> Dict[str, str]:
        """الأب لكل مكوّن بالنسبة للجذر"""
        graph = self.side(side)
        return dict(nx.bfs_predecessors(graph, self.root(side)))

    def oriented_edges(self, side: str) -> List[Tuple[str, str, Fraction]]:
        """الحواف موجهة من الأب إلى الابن"""
        graph = self.side(side)
        parents = self.parent_map(side)
        return sorted(
            (parents[child], child, graph.edges[parents[child], child]["thickness"])
            for child in parents
        )

    def thicknesses(self, side: str) -> List[Fraction]:
        return sorted(d["thickness"] for _, _, d in self.side(side).edges(data=True))

    def subtree(self, side: str, top: str) -> List[str]:
        """المكوّن top وكل ما تحته"""
        parents = self.parent_map(side)
        members = {top}
        changed = True
        while changed:
            changed = False
            for child, parent in parents.items():
                if parent in members and child not in members:
                    members.add(child)
                    changed = True
        return sorted(members)

    # --- invariants ---

    def check_trees(self) -> List[str]:
        problems = []
        for side in ("X", "Y"):
            graph = self.side(side)
            if graph.number_of_nodes() and not nx.is_tree(graph):
                problems.append(f"{side}_k is not a tree")
        return problems

    def scaling_violations(self) -> List[str]:
        """
        سماكة الحافة السفلى = (الدرجة المحلية) × سماكة الحافة العليا
        """
        problems = []
        for parent, child, thickness in self.oriented_edges("X"):
            y_parent, _ = self.vertical[parent]
            y_child, degree = self.vertical[child]
            if y_parent == y_child:
                problems.append(f"edge {parent}-{child} is contracted downstairs")
                continue
            if not self.downstairs.has_edge(y_parent, y_child):
                problems.append(f"no downstairs edge {y_parent}-{y_child} under {parent}-{child}")
                continue
            down = self.downstairs.edges[y_parent, y_child]["thickness"]
            if down != degree * thickness:
                problems.append(
                    f"{parent}-{child}: {down} != {degree} * {thickness}"
                )
        return problems

    def degree_violations(self) -> List[str]:
        """مجموع الدرجات فوق كل مكوّن سفلي يساوي p"""
        totals: Counter = Counter()
        for _, (y, degree) in self.vertical.items():
            totals[y] += degree
        return [
            f"degrees over {y} sum to {totals[y]}, not {self.p}"
            for y in self.components("Y")
            if totals[y] != self.p
        ]

    def violations(self) -> List[str]:
        return self.check_trees() + self.scaling_violations() + self.degree_violations()

    # --- grafting ---

    def graft(self, piece: "DualGraphPair") -> None:
        """
        لصق قطعة تشترك في الجذرين C و D
        """
        for side in ("X", "Y"):
            graph = self.side(side)
            other = piece.side(side)
            root = self.root(side)
            for name, data in other.nodes(data=True):
                if name == root:
                    self.add_marks(side, root, [m for m in data["marks"] if m not in graph.nodes[root]["marks"]])
                    continue
                self.add_component(side, name, data["label"], data["marks"])
            for u, v, data in other.edges(data=True):
                self.add_edge(side, u, v, data["thickness"])
        for x, (y, degree) in piece.vertical.items():
            if x != X_ROOT:
                self.set_map(x, y, degree)

    # --- comparison ---

    def combined_graph(self) -> nx.Graph:
        """رسم واحد يضم الطرفين والخريطة الرأسية، لفحص التماثل"""
        graph = nx.Graph()
        for name, data in self.upstairs.nodes(data=True):
            label = data["label"]
            graph.add_node(
                ("X", name),
                key=("X", tuple(asdict(label).values()) if label else None, data["marks"]),
            )
        for name, data in self.downstairs.nodes(data=True):
            graph.add_node(("Y", name), key=("Y", None, data["marks"]))
        for side, g in (("X", self.upstairs), ("Y", self.downstairs)):
            for u, v, data in g.edges(data=True):
                graph.add_edge((side, u), (side, v), key=("node", data["thickness"]))
        for x, (y, degree) in self.vertical.items():
            graph.add_edge(("X", x), ("Y", y), key=("map", degree))
        return graph

    def is_isomorphic(self, other: "DualGraphPair") -> bool:
        return nx.is_isomorphic(
            self.combined_graph(),
            other.combined_graph(),
            node_match=lambda a, b: a["key"] == b["key"],
            edge_match=lambda a, b: a["key"] == b["key"],
        )

    def diff(self, other: "DualGraphPair") -> Dict:
        """
        فرق منظم بين زوجين: عدد المكونات والسماكات والتسميات والعلامات
        """
        result: Dict = {}
        for side in ("X", "Y"):
            mine, theirs = len(self.components(side)), len(other.components(side))
            if mine != theirs:
                result.setdefault("components", {})[side] = [mine, theirs]
            a, b = self.thicknesses(side), other.thicknesses(side)
            if a != b:
                result.setdefault("thicknesses", {})[side] = [
                    [str(t) for t in a], [str(t) for t in b]
                ]
        labels_a = sorted(str(self.label(x)) for x in self.components("X"))
        labels_b = sorted(str(other.label(x)) for x in other.components("X"))
        if labels_a != labels_b:
            result["labels"] = [labels_a, labels_b]
        for side in ("X", "Y"):
            marks_a = sorted(list(self.marks(side, n)) for n in self.components(side))
            marks_b = sorted(list(other.marks(side, n)) for n in other.components(side))
            if marks_a != marks_b:
                result.setdefault("marks", {})[side] = [marks_a, marks_b]
        degrees_a = sorted(d for _, d in self.vertical.values())
        degrees_b = sorted(d for _, d in other.vertical.values())
        if degrees_a != degrees_b:
            result["degrees"] = [degrees_a, degrees_b]
        if not result and not self.is_isomorphic(other):
            result["structure"] = "same invariants, different incidence"
        return result

    # --- serialization ---

    def to_dict(self) -> Dict:
        def side_dict(side: str) -> Dict:
            graph = self.side(side)
            components = []
            for name in self.components(side):
                entry = {"name": name, "marks": list(graph.nodes[name]["marks"])}
                if side == "X":
                    label = graph.nodes[name]["label"]
                    entry["label"] = label.to_dict() if label else None
                components.append(entry)
            edges = [
                {"u": u, "v": v, "thickness": str(t)} for u, v, t in self.oriented_edges(side)
            ]
            return {"components": components, "edges": edges}

        data = {
            "p": self.p,
            "X_k": side_dict("X"),
            "Y_k": side_dict("Y"),
            "map": [
                {"from": x, "to": y, "degree": d} for x, (y, d) in sorted(self.vertical.items())
            ],
        }
        if self.meta:
            data["meta"] = self.meta
        return data

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True, ensure_ascii=False)

    @classmethod
    def from_dict(cls, data: Dict) -> "DualGraphPair":
        pair = cls(int(data["p"]))
        for side, key in (("X", "X_k"), ("Y", "Y_k")):
            for comp in data[key]["components"]:
                label = comp.get("label")
                pair.add_component(
                    side,
                    comp["name"],
                    ComponentMap(**label) if label else None,
                    comp["marks"],
                )
            for edge in data[key]["edges"]:
                pair.add_edge(side, edge["u"], edge["v"], Fraction(edge["thickness"]))
        for item in data["map"]:
            pair.set_map(item["from"], item["to"], int(item["degree"]))
        pair.meta = dict(data.get("meta", {}))
        return pair

    def to_dot(self, title: str = "dual") -> str:
        """
        DOT مع مجموعتين فرعيتين X_k و Y_k وأسهم متقطعة للخريطة
        """
        lines = [f'graph "{title}" {{', "  compound=true;"]
        for side, cluster in (("X", "X_k"), ("Y", "Y_k")):
            graph = self.side(side)
            lines.append(f"  subgraph cluster_{side} {{")
            lines.append(f'    label="{cluster}";')
            for name in self.components(side):
                text = name
                if side == "X" and graph.nodes[name]["label"] is not None:
                    text += f"\\n{graph.nodes[name]['label']}"
                marks = graph.nodes[name]["marks"]
                if marks:
                    text += "\\n" + " ".join(marks)
                lines.append(f'    "{side}:{name}" [label="{text}"];')
            for u, v, t in self.oriented_edges(side):
                lines.append(f'    "{side}:{u}" -- "{side}:{v}" [label="{t}"];')
            lines.append("  }")
        for x, (y, degree) in sorted(self.vertical.items()):
            lines.append(f'  "X:{x}" -- "Y:{y}" [style=dashed, label="{degree}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def components_with_marks(pair: DualGraphPair, labels: Sequence[str]) -> List[str]:
    """المكونات العليا التي تحمل نقاطاً من ألياف القيم المذكورة"""
    wanted = set(labels)
    return [
        x for x in pair.components("X")
        if any(mark_label(m)[0] in wanted for m in pair.marks("X", x) if m != INFINITY_MARK)
    ]


def good_reduction_after_blowdown(pair: DualGraphPair, labels: Sequence[str]) -> bool:
    """
    هل يحمل مكوّن علوي واحد كل نقاط الألياف فوق القيم المذكورة؟

    When it does, contracting every other component gives a smooth model of
    the curve marked by ∞ and those fibers.
    """
    holders = components_with_marks(pair, labels)
    return len(holders) == 1
