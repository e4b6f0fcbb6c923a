"""
الاختزال شبه المستقر للتغطيات - covred
Semi-stable reduction of degree-p polynomial covers of the projective line
"""

__version__ = "1.0.0"
__author__ = "Covred Development Team"

from covred.arithmetic.valued_field import FieldContext, Element
from covred.covers.cover import Cover, branch_data, normalize
from covred.covers.branch_tree import build_branch_tree, classify_points
from covred.reduction.classifier import classify_tail, assemble_full_model
from covred.oracle.blowup import separate_fibers, verify_instance

__all__ = [
    "FieldContext",
    "Element",
    "Cover",
    "branch_data",
    "normalize",
    "build_branch_tree",
    "classify_points",
    "classify_tail",
    "assemble_full_model",
    "separate_fibers",
    "verify_instance",
]
