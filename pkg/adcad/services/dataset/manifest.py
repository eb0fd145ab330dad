"""
数据清单
UTF-8 逗号分隔文本，表头 path,label,split,roi_id,plan_index；plan_index 为 original 或计划下标
"""

import logging
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np
import pandas as pd

from ...algorithms.augment import PlanEntry
from ...config.constants import DatasetConstants, ProtocolConstants
from ...utils.exceptions import DataValidationError

logger = logging.getLogger(__name__)


def plan_position(value: str) -> Optional[int]:
    """plan_index 取值转换为计划下标，original 返回 None"""
    if value == DatasetConstants.PROVENANCE_ORIGINAL:
        return None
    return int(value)


def validate_manifest(frame: pd.DataFrame) -> pd.DataFrame:
    """
    校验清单列与取值

    Args:
        frame: 清单

    Returns:
        roi_id 转为整数的清单
    """
    errors = []
    if list(frame.columns) != list(DatasetConstants.MANIFEST_COLUMNS):
        raise DataValidationError(
            f"清单表头必须为 {','.join(DatasetConstants.MANIFEST_COLUMNS)}，实际为 {','.join(map(str, frame.columns))}"
        )

    bad_labels = ~frame['label'].isin(DatasetConstants.LABELS)
    if bad_labels.any():
        errors.append({'field': 'label', 'rows': frame.index[bad_labels].tolist()[:10]})

    bad_splits = ~frame['split'].isin(("",) + DatasetConstants.SPLITS)
    if bad_splits.any():
        errors.append({'field': 'split', 'rows': frame.index[bad_splits].tolist()[:10]})

    roi_ids = pd.to_numeric(frame['roi_id'], errors='coerce')
    bad_ids = roi_ids.isna() | (roi_ids < 0) | (roi_ids != roi_ids.round())
    if bad_ids.any():
        errors.append({'field': 'roi_id', 'rows': frame.index[bad_ids].tolist()[:10]})

    plan = frame['plan_index'].astype(str)
    numeric = pd.to_numeric(plan.where(plan != DatasetConstants.PROVENANCE_ORIGINAL), errors='coerce')
    bad_plan = (plan != DatasetConstants.PROVENANCE_ORIGINAL) & (
        numeric.isna() | (numeric < 0) | (numeric >= ProtocolConstants.PLAN_LENGTH)
    )
    if bad_plan.any():
        errors.append({'field': 'plan_index', 'rows': frame.index[bad_plan].tolist()[:10]})

    if errors:
        raise DataValidationError(
            f"清单校验失败: {', '.join(error['field'] for error in errors)}",
            validation_errors=errors
        )

    result = frame.copy()
    result['roi_id'] = roi_ids.astype(np.int64)
    result['plan_index'] = plan
    return result


def read_manifest(path: Union[str, Path]) -> pd.DataFrame:
    """读取清单"""
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, encoding='utf-8')
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise DataValidationError(f"无法读取清单 {path}: {e}") from e
    return validate_manifest(frame)


def write_manifest(frame: pd.DataFrame, path: Union[str, Path]) -> Path:
    """写出清单"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = validate_manifest(frame[list(DatasetConstants.MANIFEST_COLUMNS)])
    frame.to_csv(path, index=False, encoding='utf-8', lineterminator='\n')
    logger.info(f"清单已写出: {path}，共 {len(frame)} 行")
    return path


def expand_manifest(frame: pd.DataFrame, plan: Sequence[PlanEntry]) -> pd.DataFrame:
    """
    按增强计划把每个原始 ROI 展开为 len(plan) 行

    Args:
        frame: 只含 original 行的清单
        plan: 增强计划

    Returns:
        按 (ROI, 计划下标) 顺序排列的新清单
    """
    augmented = frame['plan_index'] != DatasetConstants.PROVENANCE_ORIGINAL
    if augmented.any():
        raise DataValidationError(
            f"清单中已有 {int(augmented.sum())} 行增强样本，只能对原始 ROI 展开"
        )
    expanded = frame.loc[frame.index.repeat(len(plan))].reset_index(drop=True)
    expanded['plan_index'] = np.tile([str(entry.index) for entry in plan], len(frame))
    counts = expanded['label'].value_counts().to_dict()
    logger.info(f"增强展开完成: {len(frame)} -> {len(expanded)} 行，类别计数 {counts}")
    return expanded
