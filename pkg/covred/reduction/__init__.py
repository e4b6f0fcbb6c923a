"""Dual graphs, partitions and the closed-form classifier"""

from covred.reduction.dual_graph import DualGraphPair, ComponentMap
from covred.reduction.partitions import PartitionPair, admissible_partitions
from covred.reduction.classifier import Regime, Mode, classify_tail, assemble_full_model

__all__ = ['DualGraphPair', 'ComponentMap', 'PartitionPair', 'admissible_partitions',
           'Regime', 'Mode', 'classify_tail', 'assemble_full_model']
