"""
Worked Example
النماذج التسعة للمثال المحلول: p = 5 مع ثلاث قيم تفرع منتهية 0 و 1 و λ

The fibers have profiles (3,1,1) over 0 and (2,1,1,1) over 1 and λ. The
models are: good reduction, then the tail {0, λ} at eps = 1, 5, 7 and the
tail {1, λ} at eps = 1, 5/2, 3 (the NEAR cases give two models each).
"""

import logging
from fractions import Fraction
from pathlib import Path
from typing import List, Tuple

from covred.covers.branch_tree import BranchClassification, Tail
from covred.covers.cover import RamificationData
from covred.reduction.classifier import Mode, assemble_full_model, classify_good_reduction
from covred.reduction.dual_graph import DualGraphPair

logger = logging.getLogger(__name__)

WORKED_PROFILES = {"0": (3, 1, 1), "1": (2, 1, 1, 1), "lambda": (2, 1, 1, 1)}
WORKED_TAILS = (
    (("0", "lambda"), (Fraction(1), Fraction(5), Fraction(7))),
    (("1", "lambda"), (Fraction(1), Fraction(5, 2), Fraction(3))),
)


def worked_example_data() -> RamificationData:
    return RamificationData.from_profiles(5, WORKED_PROFILES)


def worked_example_models() -> List[Tuple[str, DualGraphPair]]:
    """
    النماذج التسعة بترتيب ثابت

    Returns:
        أزواج (الاسم، الزوج الثنائي)
    """
    ram = worked_example_data()
    models = [("good", classify_good_reduction(ram))]
    for pair, epsilons in WORKED_TAILS:
        for eps in epsilons:
            bc = BranchClassification.from_tails(ram.labels, [Tail(pair, eps)])
            found = assemble_full_model(ram, bc, Mode.FORMULA)
            for k, model in enumerate(found, start=1):
                name = f"{pair[0]}|{pair[1]} eps={eps}"
                if len(found) > 1:
                    name += f" #{k}"
                models.append((name, model))
    logger.info(f"Worked example: {len(models)} models")
    return models


def write_worked_example(out_dir: str, indent: int = 2) -> List[Path]:
    """
    كتابة example_<n>.json و example_<n>.dot لكل نموذج

    Args:
        out_dir: المجلد الهدف
        indent: إزاحة JSON

    Returns:
        المسارات المكتوبة
    """
    directory = Path(out_dir)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for n, (name, model) in enumerate(worked_example_models(), start=1):
        model.meta["name"] = name
        json_path = directory / f"example_{n}.json"
        dot_path = directory / f"example_{n}.dot"
        json_path.write_text(model.to_json(indent) + "\n", encoding="utf-8")
        dot_path.write_text(model.to_dot(f"example {n}: {name}"), encoding="utf-8")
        written.extend([json_path, dot_path])
    return written


def golden_summary(model: DualGraphPair) -> dict:
    """الملخص المقارن مع الملف الذهبي"""
    return {
        "x": [str(t) for t in model.thicknesses("X")],
        "y": [str(t) for t in model.thicknesses("Y")],
        "components": [len(model.components("X")), len(model.components("Y"))],
        "partition": next(iter(model.meta.get("partitions", {}).values()), None),
    }
