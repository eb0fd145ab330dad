"""
扫描结果输出
逐 ROI 分数表、热力图与多检查汇总
"""

import logging
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import pandas as pd

from ...models.scan import ScanResult
from ..dataset.pgm import write_pgm

logger = logging.getLogger(__name__)

SUMMARY_COLUMNS = ('exam_id', 'n_rois', 'n_positive', 'auc', 'accuracy')


def write_scan_artifacts(result: ScanResult, directory: Union[str, Path]) -> Dict[str, Path]:
    """
    写出单次检查的扫描结果

    Args:
        result: 扫描结果
        directory: 输出目录

    Returns:
        {'rois': ROI 表路径, 'heatmap': 热力图路径}
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    rois_path = directory / f"{result.exam_id}_rois.csv"
    result.to_frame().to_csv(rois_path, index=False, encoding='utf-8', lineterminator='\n',
                             float_format='%.17g')
    heatmap_path = write_pgm(result.heatmap, directory / f"{result.exam_id}_heatmap.pgm")
    if result.roc is not None:
        roc_path = directory / f"{result.exam_id}_roc.csv"
        result.roc.to_frame().to_csv(roc_path, index=False, encoding='utf-8', lineterminator='\n')
    logger.info(f"检查 {result.exam_id} 结果已写出: {rois_path}, {heatmap_path}")
    return {'rois': rois_path, 'heatmap': heatmap_path}


def summary_frame(results: Sequence[ScanResult]) -> pd.DataFrame:
    """多检查汇总表；ROC 未定义时 auc 为 NA"""
    rows = [
        {
            'exam_id': r.exam_id,
            'n_rois': r.n_rois,
            'n_positive': r.n_positive,
            'auc': 'NA' if r.auc is None else f"{r.auc:.6f}",
            'accuracy': f"{r.accuracy:.6f}",
        }
        for r in results
    ]
    return pd.DataFrame(rows, columns=list(SUMMARY_COLUMNS))


def write_summary(results: Sequence[ScanResult], path: Union[str, Path]) -> Path:
    """写出汇总表"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    summary_frame(results).to_csv(path, index=False, encoding='utf-8', lineterminator='\n')
    logger.info(f"扫描汇总已写出: {path}，共 {len(results)} 个检查")
    return path


def best_exam(results: Sequence[ScanResult]) -> Optional[ScanResult]:
    """AUC 最高的检查（仅考虑 ROC 有定义的检查）"""
    defined: List[ScanResult] = [r for r in results if r.auc is not None]
    if not defined:
        return None
    return max(defined, key=lambda r: r.auc)
