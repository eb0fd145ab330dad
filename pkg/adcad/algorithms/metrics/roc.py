"""
ROC/AUC 计算
ROC 曲线（并列分数成块处理）、梯形法 AUC、成对枚举 AUC 与阈值准确率
"""

import logging
from typing import Sequence, Tuple

import numpy as np

from ...models.evaluation import RocCurve, ScoredSample
from ...utils.exceptions import DataValidationError, DegenerateInputError

logger = logging.getLogger(__name__)


def _prepare(scores, labels) -> Tuple[np.ndarray, np.ndarray]:
    """转换为 float64 分数与布尔阳性标记"""
    s = np.asarray(scores, dtype=np.float64).reshape(-1)
    y = np.asarray(labels).reshape(-1).astype(bool)
    if s.shape != y.shape:
        raise DataValidationError(f"分数数量 {s.size} 与标签数量 {y.size} 不一致")
    if s.size == 0:
        raise DataValidationError("样本为空")
    if not np.all(np.isfinite(s)):
        raise DataValidationError("分数含有非有限值")
    return s, y


def _require_both_classes(y: np.ndarray) -> Tuple[int, int]:
    positives = int(y.sum())
    negatives = int(y.size - positives)
    if positives == 0 or negatives == 0:
        raise DegenerateInputError(
            f"ROC 未定义：阳性 {positives} 个，阴性 {negatives} 个",
            positives=positives, negatives=negatives
        )
    return positives, negatives


def from_samples(samples: Sequence[ScoredSample]) -> Tuple[np.ndarray, np.ndarray]:
    """ScoredSample 列表转换为数组"""
    return ScoredSample.to_arrays(samples)


def roc_curve(scores, labels) -> RocCurve:
    """
    构造 ROC 曲线

    Args:
        scores: 分数
        labels: 阳性标记（True/1 = AD）

    Returns:
        RocCurve；按分数降序，每个不同分数值输出一个点，起点 (0,0)，终点 (1,1)
    """
    s, y = _prepare(scores, labels)
    positives, negatives = _require_both_classes(y)

    order = np.argsort(-s, kind="stable")
    s_sorted = s[order]
    y_sorted = y[order]

    # 每个并列块的最后一个位置
    block_ends = np.r_[np.nonzero(np.diff(s_sorted))[0], s_sorted.size - 1]
    true_pos = np.cumsum(y_sorted)[block_ends]
    false_pos = block_ends + 1 - true_pos

    fpr = np.r_[0.0, false_pos / negatives]
    tpr = np.r_[0.0, true_pos / positives]
    return RocCurve(fpr=fpr.tolist(), tpr=tpr.tolist())


def auc_trapezoid(curve: RocCurve) -> float:
    """ROC 曲线下面积（梯形积分）"""
    return float(np.trapezoid(curve.tpr, curve.fpr))


def auc_pairwise_oracle(scores, labels) -> float:
    """
    成对枚举 AUC：P(阳性分数 > 阴性分数) + 0.5·P(相等)

    Args:
        scores: 分数
        labels: 阳性标记

    Returns:
        AUC
    """
    s, y = _prepare(scores, labels)
    positives, negatives = _require_both_classes(y)
    diff = s[y][:, np.newaxis] - s[~y][np.newaxis, :]
    wins = np.count_nonzero(diff > 0)
    ties = np.count_nonzero(diff == 0)
    return (wins + 0.5 * ties) / (positives * negatives)


def accuracy_at_threshold(scores, labels, threshold: float = 0.5) -> float:
    """(score >= threshold) 与真实阳性一致的比例"""
    s, y = _prepare(scores, labels)
    return float(np.mean((s >= threshold) == y))
