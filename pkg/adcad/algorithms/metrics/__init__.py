"""
评估指标模块
"""

from .roc import roc_curve, auc_trapezoid, auc_pairwise_oracle, accuracy_at_threshold, from_samples

__all__ = [
    'roc_curve',
    'auc_trapezoid',
    'auc_pairwise_oracle',
    'accuracy_at_threshold',
    'from_samples',
]
