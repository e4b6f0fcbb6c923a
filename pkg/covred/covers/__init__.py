"""Covers and branch trees"""

from covred.covers.cover import Cover, RamificationData, branch_data, normalize
from covred.covers.branch_tree import MetricTree, build_branch_tree, classify_points

__all__ = ['Cover', 'RamificationData', 'branch_data', 'normalize',
           'MetricTree', 'build_branch_tree', 'classify_points']
