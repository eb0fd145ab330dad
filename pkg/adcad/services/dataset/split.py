"""
分层划分
按类别独立划分，配额按最大余数法取整；支持 ROI 级与增强样本级两种模式
"""

import logging
import math
from fractions import Fraction
from typing import List, Sequence, Tuple

import numpy as np
import pandas as pd

from ...config.constants import DatasetConstants
from ...models.dataset import SplitMode, SplitRatios
from ...utils.exceptions import DataValidationError

logger = logging.getLogger(__name__)


def largest_remainder(total: int, fractions: Sequence[Fraction]) -> List[int]:
    """
    最大余数法分配整数配额

    Args:
        total: 待分配总数
        fractions: 各份比例（内部归一化）

    Returns:
        各份数量，和为 total；余数相同时靠前的份优先
    """
    weight = sum(fractions)
    quotas = [total * f / weight for f in fractions]
    counts = [math.floor(q) for q in quotas]
    leftover = total - sum(counts)
    order = sorted(range(len(quotas)), key=lambda i: (-(quotas[i] - counts[i]), i))
    for i in order[:leftover]:
        counts[i] += 1
    return counts


def assign_splits(
    frame: pd.DataFrame,
    ratios: SplitRatios,
    seed: int,
    mode: SplitMode = SplitMode.ROI_LEVEL
) -> pd.DataFrame:
    """
    为清单的每一行分配 train/val/test

    Args:
        frame: 含 label、roi_id 列的清单
        ratios: 划分比例
        seed: 洗牌种子
        mode: roi-level（同一 ROI 的变体同属一个划分）或 paper-faithful（直接划分样本）

    Returns:
        split 列已填写的新清单
    """
    labels = frame['label'].to_numpy()
    roi_ids = frame['roi_id'].to_numpy()
    for label in DatasetConstants.LABELS:
        if not np.any(labels == label):
            raise DataValidationError(
                f"类别 {label} 没有样本，无法分层划分",
                validation_errors=[{'field': 'label', 'missing': label}]
            )

    mode = SplitMode(mode)
    if mode is SplitMode.ROI_LEVEL:
        label_counts = frame.groupby('roi_id')['label'].nunique()
        mixed = label_counts[label_counts > 1]
        if not mixed.empty:
            raise DataValidationError(
                f"ROI {list(mixed.index[:5])} 同时带有两种标签",
                validation_errors=[{'field': 'roi_id', 'mixed': [int(i) for i in mixed.index]}]
            )

    fractions = ratios.as_fractions()
    rng = np.random.default_rng(seed)
    assigned = np.full(len(frame), "", dtype=object)

    for label in (DatasetConstants.LABEL_AD, DatasetConstants.LABEL_NORMAL):
        positions = np.flatnonzero(labels == label)
        units = np.unique(roi_ids[positions]) if mode is SplitMode.ROI_LEVEL else positions
        shuffled = units[rng.permutation(len(units))]
        counts = largest_remainder(len(units), fractions)
        chunks = np.split(shuffled, np.cumsum(counts)[:-1])
        for name, chunk in zip(DatasetConstants.SPLITS, chunks):
            if mode is SplitMode.ROI_LEVEL:
                assigned[positions[np.isin(roi_ids[positions], chunk)]] = name
            else:
                assigned[chunk] = name
        logger.info(
            f"类别 {label} 划分完成（{mode.value}）: "
            + ", ".join(f"{name}={count}" for name, count in zip(DatasetConstants.SPLITS, counts))
        )

    result = frame.copy()
    result['split'] = assigned.astype(str)
    return result


def stratified_split(
    frame: pd.DataFrame,
    ratios: SplitRatios,
    seed: int,
    mode: SplitMode = SplitMode.ROI_LEVEL
) -> Tuple[pd.DataFrame, pd.DataFrame, pd.DataFrame]:
    """分层划分，返回 (train, validation, test) 三个子清单"""
    assigned = assign_splits(frame, ratios, seed, mode)
    return tuple(
        assigned[assigned['split'] == name].reset_index(drop=True)
        for name in DatasetConstants.SPLITS
    )
