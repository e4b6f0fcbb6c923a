"""
Reduction-Type Atlas
جدول كل مظاهر التفرع المتسقة مع ريمان-هورفيتز، ولكل زوج ذيل: العتبة والصيغ والتقسيمات

Formula-mode only: thicknesses are written symbolically in eps, the
thickness of the tail.
"""

import json
import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from typing import Dict, List, Tuple

import pandas as pd
from sympy import isprime
from sympy.utilities.iterables import partitions
from tqdm import tqdm

from covred.config import get_setting
from covred.errors import PreconditionViolated
from covred.reduction.partitions import admissible_partitions

logger = logging.getLogger(__name__)

Profile = Tuple[int, ...]

PROFILE_COLUMNS = ["r", "profiles", "n"]
TAIL_COLUMNS = [
    "r", "profiles", "pair", "n1", "n2", "threshold",
    "far", "critical", "near", "partitions", "partition_list",
]


def ramified_profiles(p: int) -> List[Profile]:
    """كل تجزئات p ما عدا (1,...,1)، تنازلياً"""
    found = []
    for part in partitions(p):
        # sympy reuses the dict between iterations
        counts = dict(part)
        profile = tuple(sorted((k for k, m in counts.items() for _ in range(m)), reverse=True))
        if profile[0] > 1:
            found.append(profile)
    return sorted(found, key=lambda prof: (len(prof), prof))


def _far_text(p: int, u: int, n1: int, n2: int) -> str:
    return (
        f"C-C' = eps/{p}; "
        f"nu_1 = ({p} - {u}*eps)/{p * (n1 - 1)}; "
        f"nu_2 = ({p} - {u}*eps)/{p * (n2 - 1)}"
    )


def _near_text(bound: Fraction, p: int, pp_list) -> str:
    degrees = sorted({d for pp in pp_list for d in pp.degrees})
    parts = ", ".join(f"(eps - {bound})/{d}" for d in degrees)
    return f"C-C' = {bound / p}; eps0 = {bound}; C_i: {parts}" if degrees else f"eps0 = {bound}"


def _tail_rows(p: int, r: int, profiles: Tuple[Profile, ...]) -> List[Dict]:
    rows = []
    seen = set()
    for i, j in combinations(range(len(profiles)), 2):
        one, two = profiles[i], profiles[j]
        if (one, two) in seen:
            continue
        seen.add((one, two))
        n1, n2 = len(one), len(two)
        u = n1 + n2 - p - 1
        row = {
            "r": r,
            "profiles": " ".join(str(prof) for prof in profiles),
            "pair": f"{one}|{two}",
            "n1": n1,
            "n2": n2,
        }
        if u <= 0:
            row.update(threshold="undefined", far="", critical="", near="",
                       partitions=0, partition_list="")
        else:
            bound = Fraction(p, u)
            found = admissible_partitions(one, two, p)
            row.update(
                threshold=str(bound),
                far=_far_text(p, u, n1, n2),
                critical=f"C-C' = {bound / p}",
                near=_near_text(bound, p, found),
                partitions=len(found),
                partition_list="; ".join(f"[{pp}]" for pp in found),
            )
        rows.append(row)
    return rows


@dataclass
class Atlas:
    """
    جدولان: المظاهر، وأزواج الذيول
    """

    p: int
    r_max: int
    profiles: pd.DataFrame
    tails: pd.DataFrame

    def to_dict(self) -> Dict:
        return {
            "p": self.p,
            "r_max": self.r_max,
            "profiles": self.profiles.to_dict(orient="records"),
            "tails": self.tails.to_dict(orient="records"),
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, ensure_ascii=False, default=int)

    def to_markdown(self) -> str:
        out = [f"# Reduction types for p = {self.p}, r <= {self.r_max}", ""]
        out.append("## Ramification profiles")
        out.extend(_markdown_table(self.profiles))
        out.append("")
        out.append("## Tail pairs")
        out.extend(_markdown_table(self.tails))
        return "\n".join(out) + "\n"


def _markdown_table(frame: pd.DataFrame) -> List[str]:
    columns = list(frame.columns)
    lines = ["| " + " | ".join(columns) + " |", "|" + "---|" * len(columns)]
    for record in frame.itertuples(index=False):
        lines.append("| " + " | ".join(str(value) for value in record) + " |")
    return lines


def build_atlas(p: int, r_max: int) -> Atlas:
    """
    تعداد كل مجموعات المظاهر فوق r-1 قيمة منتهية مع sum n = (r-2)p + 1

    Args:
        p: عدد أولي (3 أو 5 أو 7)
        r_max: أكبر عدد لنقاط التفرع (<= 4)

    Returns:
        Atlas
    """
    if not isprime(p) or p > 7:
        raise PreconditionViolated(f"atlas supports p in {{3, 5, 7}}, got {p}")
    if not 2 <= r_max <= 4:
        raise PreconditionViolated(f"atlas supports 2 <= r_max <= 4, got {r_max}")

    candidates = ramified_profiles(p)
    profile_rows: List[Dict] = []
    tail_rows: List[Dict] = []
    show = get_setting("performance.progress", True)
    for r in tqdm(range(2, r_max + 1), desc="atlas", disable=not show):
        target = (r - 2) * p + 1
        for combo in combinations_with_replacement(candidates, r - 1):
            if sum(len(prof) for prof in combo) != target:
                continue
            profile_rows.append({
                "r": r,
                "profiles": " ".join(str(prof) for prof in combo),
                "n": ",".join(str(len(prof)) for prof in combo),
            })
            tail_rows.extend(_tail_rows(p, r, combo))

    atlas = Atlas(
        p=p,
        r_max=r_max,
        profiles=pd.DataFrame(profile_rows, columns=PROFILE_COLUMNS),
        tails=pd.DataFrame(tail_rows, columns=TAIL_COLUMNS),
    )
    logger.info(f"Atlas p={p}: {len(atlas.profiles)} profile rows, {len(atlas.tails)} tail rows")
    return atlas
