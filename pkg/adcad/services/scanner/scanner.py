"""
全片扫描
乳腺分割、重叠窗口网格、中心包含标注、逐窗口打分、ROC 与热力图
"""

import logging
from typing import List, Optional, Protocol, Sequence, Tuple

import numpy as np

from ...algorithms.augment import area_mean_downscale, zscore_standardize
from ...algorithms.metrics import accuracy_at_threshold, auc_trapezoid, roc_curve
from ...algorithms.segmentation import segment_breast
from ...models.dataset import RoiLabel
from ...models.image import AdMark, ExamImage
from ...models.scan import ScanGrid, ScanResult, ScoredRoi
from ...utils.exceptions import RoiSizeError, ShapeError
from ..dataset.roi import crop_roi

logger = logging.getLogger(__name__)

# 每次前向的窗口数
SCORING_CHUNK = 128


class Scorer(Protocol):
    """可对标准化图像批打分的模型"""

    def predict_scores(self, batch: np.ndarray) -> np.ndarray:
        """结构扭曲概率 [N]"""


def extract_grid(mask: np.ndarray, grid: ScanGrid) -> np.ndarray:
    """
    提取扫描窗口中心

    Args:
        mask: 乳腺掩膜
        grid: 网格参数

    Returns:
        [n, 2] 窗口中心 (row, col)，行优先顺序
    """
    mask = np.asarray(mask, dtype=bool)
    height, width = mask.shape
    size = grid.roi_size
    if size > height or size > width:
        raise RoiSizeError(f"图像 {height}x{width} 小于扫描窗口 {size}", size=size)

    # 积分图求每个窗口内的掩膜像素数
    integral = np.zeros((height + 1, width + 1), dtype=np.int64)
    integral[1:, 1:] = mask.cumsum(axis=0, dtype=np.int64).cumsum(axis=1)

    tops = np.arange(0, height - size + 1, grid.stride)
    lefts = np.arange(0, width - size + 1, grid.stride)
    t = tops[:, np.newaxis]
    l = lefts[np.newaxis, :]
    inside = (integral[t + size, l + size] - integral[t, l + size]
              - integral[t + size, l] + integral[t, l])
    keep = inside / (size * size) >= grid.coverage_min

    rows, cols = np.nonzero(keep)
    centers = np.stack([tops[rows] + size // 2, lefts[cols] + size // 2], axis=1)
    logger.debug(f"扫描网格: 候选 {keep.size} 个，保留 {len(centers)} 个")
    return centers.astype(np.int64)


def label_roi(bounds: Tuple[int, int, int, int], marks: Sequence[AdMark]) -> RoiLabel:
    """
    中心包含规则

    Args:
        bounds: (top, left, bottom, right)，闭区间
        marks: 标记列表

    Returns:
        任一标记落在窗口内（含边界）为 AD，否则为 normal
    """
    top, left, bottom, right = bounds
    for mark in marks:
        if top <= mark.row <= bottom and left <= mark.col <= right:
            return RoiLabel.AD
    return RoiLabel.NORMAL


def max_heatmap(shape: Tuple[int, int], centers: np.ndarray, size: int, scores: np.ndarray) -> np.ndarray:
    """每个像素取覆盖它的窗口的最大分数，未覆盖处为 0"""
    heatmap = np.zeros(shape)
    for (row, col), score in zip(centers, scores):
        top, left = row - size // 2, col - size // 2
        window = heatmap[top:top + size, left:left + size]
        np.maximum(window, score, out=window)
    return heatmap


def _score_windows(network: Scorer, image: np.ndarray, centers: np.ndarray,
                   roi_size: int, input_size: int) -> np.ndarray:
    scores: List[np.ndarray] = []
    for start in range(0, len(centers), SCORING_CHUNK):
        batch = np.stack([
            zscore_standardize(area_mean_downscale(crop_roi(image, tuple(center), roi_size), input_size))
            for center in centers[start:start + SCORING_CHUNK]
        ])
        scores.append(np.asarray(network.predict_scores(batch), dtype=np.float64))
    return np.concatenate(scores) if scores else np.empty(0)


def scan_exam(
    network: Scorer,
    exam: ExamImage,
    grid: ScanGrid,
    threshold: float = 0.5,
    input_size: Optional[int] = None
) -> ScanResult:
    """
    扫描单次检查

    Args:
        network: 打分模型
        exam: 检查图像
        grid: 网格参数
        threshold: 准确率阈值
        input_size: 网络输入边长，默认取 network.config.input_size；roi_size 需为其整数倍

    Returns:
        ScanResult；单一类别时 roc/auc 为空
    """
    if input_size is None:
        input_size = network.config.input_size
    if grid.roi_size % input_size:
        raise ShapeError(
            f"扫描窗口 {grid.roi_size} 不是网络输入 {input_size} 的整数倍",
            expected=(input_size, input_size), actual=(grid.roi_size, grid.roi_size)
        )

    try:
        mask = segment_breast(exam.pixels)
        centers = extract_grid(mask, grid)
        scores = _score_windows(network, exam.pixels, centers, grid.roi_size, input_size)

        size = grid.roi_size
        labels = [
            label_roi((row - size // 2, col - size // 2, row - size // 2 + size - 1,
                       col - size // 2 + size - 1), exam.marks)
            for row, col in centers
        ]
        rois = [
            ScoredRoi(row=int(row), col=int(col), score=float(score), label=label)
            for (row, col), score, label in zip(centers, scores, labels)
        ]
        heatmap = max_heatmap(exam.pixels.shape, centers, size, scores)

        positive = np.array([label is RoiLabel.AD for label in labels], dtype=bool)
        roc = auc = None
        if positive.any() and not positive.all():
            roc = roc_curve(scores, positive)
            auc = auc_trapezoid(roc)
        else:
            logger.warning(
                f"检查 {exam.exam_id} 的 ROI 只有单一类别（阳性 {int(positive.sum())}/{len(positive)}），ROC 未定义"
            )
        accuracy = accuracy_at_threshold(scores, positive, threshold) if len(scores) else 0.0

        result = ScanResult(
            exam_id=exam.exam_id, rois=rois, roc=roc, auc=auc,
            accuracy=accuracy, heatmap=heatmap
        )
        logger.info(
            f"检查 {exam.exam_id} 扫描完成: ROI {result.n_rois} 个，阳性 {result.n_positive} 个，"
            f"AUC {'NA' if auc is None else f'{auc:.6f}'}，准确率 {accuracy:.6f}"
        )
        return result

    except Exception as e:
        logger.error(f"扫描检查 {exam.exam_id} 失败: {str(e)}")
        raise
