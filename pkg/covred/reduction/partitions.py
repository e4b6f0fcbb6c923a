"""
Admissible Partitions
تقسيمات مظهري الليفين إلى مجموعات متحاذية في حالة الذيل القريب
"""

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, Iterable, List, Sequence, Set, Tuple

logger = logging.getLogger(__name__)

Multiset = Tuple[int, ...]


def _canon(values: Iterable[int]) -> Multiset:
    return tuple(sorted(values, reverse=True))


@dataclass(frozen=True, order=True)
class PartitionGroup:
    """
    مجموعة واحدة: d_i مع الجزأين من الليفين

    Args:
        d: مجموع كل جزء
        part1: مضاعفات نقاط الليف الأول
        part2: مضاعفات نقاط الليف الثاني
    """

    d: int
    part1: Multiset
    part2: Multiset

    @property
    def n1(self) -> int:
        return len(self.part1)

    @property
    def n2(self) -> int:
        return len(self.part2)

    def is_valid(self) -> bool:
        return (
            sum(self.part1) == self.d
            and sum(self.part2) == self.d
            and self.n1 + self.n2 == self.d + 1
            and 1 <= self.n1 <= self.d
            and 1 <= self.n2 <= self.d
        )

    def __str__(self) -> str:
        one = ",".join(str(e) for e in sorted(self.part1))
        two = ",".join(str(e) for e in sorted(self.part2))
        return f"d={self.d}: {{{one}}}|{{{two}}}"

    def to_dict(self) -> Dict:
        return {"d": self.d, "part1": list(self.part1), "part2": list(self.part2)}


@dataclass(frozen=True)
class PartitionPair:
    """
    تقسيم متحاذٍ للمظهرين إلى s >= 2 مجموعات، مرتب قانونياً
    """

    groups: Tuple[PartitionGroup, ...]

    def __post_init__(self):
        object.__setattr__(self, "groups", tuple(sorted(self.groups)))

    @property
    def s(self) -> int:
        return len(self.groups)

    @property
    def degrees(self) -> Tuple[int, ...]:
        return tuple(g.d for g in self.groups)

    def profiles(self) -> Tuple[Multiset, Multiset]:
        return (
            _canon(e for g in self.groups for e in g.part1),
            _canon(e for g in self.groups for e in g.part2),
        )

    def is_valid(self, p: int) -> bool:
        return self.s >= 2 and sum(self.degrees) == p and all(g.is_valid() for g in self.groups)

    def __str__(self) -> str:
        return "; ".join(str(g) for g in self.groups)

    def to_dict(self) -> Dict:
        return {"s": self.s, "groups": [g.to_dict() for g in self.groups]}

    @classmethod
    def from_dict(cls, data: Dict) -> "PartitionPair":
        return cls(
            tuple(
                PartitionGroup(int(g["d"]), _canon(g["part1"]), _canon(g["part2"]))
                for g in data["groups"]
            )
        )


def _sub_multisets(values: Multiset, must_include_first: bool) -> List[Tuple[Multiset, Multiset]]:
    """
    كل المجموعات الجزئية المتعددة (المختارة، الباقي) دون تكرار
    """
    seen: Set[Multiset] = set()
    out = []
    indices = range(len(values))
    for size in range(1, len(values) + 1):
        for chosen in combinations(indices, size):
            if must_include_first and 0 not in chosen:
                continue
            picked = _canon(values[i] for i in chosen)
            if picked in seen:
                continue
            seen.add(picked)
            rest = _canon(values[i] for i in indices if i not in chosen)
            out.append((picked, rest))
    return out


def _groups(rest1: Multiset, rest2: Multiset) -> Iterable[Tuple[PartitionGroup, ...]]:
    if not rest1 and not rest2:
        yield ()
        return
    if not rest1 or not rest2:
        return
    # the group containing the largest remaining entry of the first fiber
    for part1, left1 in _sub_multisets(rest1, must_include_first=True):
        d = sum(part1)
        needed = d + 1 - len(part1)
        if needed < 1:
            continue
        for part2, left2 in _sub_multisets(rest2, must_include_first=False):
            if len(part2) != needed or sum(part2) != d:
                continue
            for tail in _groups(left1, left2):
                yield (PartitionGroup(d, part1, part2),) + tail


def admissible_partitions(
    profile1: Sequence[int], profile2: Sequence[int], p: int
) -> List[PartitionPair]:
    """
    كل التقسيمات المقبولة (حتى إعادة الترتيب) للمظهرين

    Args:
        profile1: مضاعفات الليف الأول (مجموعها p)
        profile2: مضاعفات الليف الثاني (مجموعها p)
        p: الدرجة

    Returns:
        قائمة مرتبة قانونياً (قد تكون فارغة)
    """
    one, two = _canon(profile1), _canon(profile2)
    if sum(one) != p or sum(two) != p:
        return []
    found: Set[PartitionPair] = set()
    for groups in _groups(one, two):
        if len(groups) >= 2:
            found.add(PartitionPair(groups))
    result = sorted(found, key=lambda pp: pp.groups)
    logger.debug(f"{len(result)} admissible partition(s) for {one} / {two}")
    return result
