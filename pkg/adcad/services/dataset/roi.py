"""
ROI 提取
按中心裁剪（越界时平移窗口）、正常 ROI 随机放置与标记检查的成对提取
"""

import logging
from typing import List, Tuple

import numpy as np

from ...config.constants import DatasetConstants
from ...models.dataset import RoiLabel, RoiRecord
from ...models.image import ExamImage, ensure_gray_image
from ...utils.exceptions import PlacementError, RoiSizeError

logger = logging.getLogger(__name__)


def window_origin(center: Tuple[int, int], size: int, shape: Tuple[int, int]) -> Tuple[int, int]:
    """
    计算窗口左上角；越界时以最小距离平移进图像

    Args:
        center: (row, col)
        size: 窗口边长
        shape: 图像 (height, width)

    Returns:
        (top, left)
    """
    height, width = shape
    if size > min(height, width):
        raise RoiSizeError(f"ROI 尺寸 {size} 超出图像范围 {height}x{width}", size=size)
    top = min(max(int(center[0]) - size // 2, 0), height - size)
    left = min(max(int(center[1]) - size // 2, 0), width - size)
    return top, left


def crop_roi(image: np.ndarray, center: Tuple[int, int], size: int) -> np.ndarray:
    """
    裁剪 size x size 窗口

    Args:
        image: 灰度图像
        center: 窗口中心 (row, col)
        size: 边长

    Returns:
        原图子块的副本
    """
    image = np.asarray(image, dtype=np.float64)
    top, left = window_origin(center, size, image.shape)
    return image[top:top + size, left:left + size].copy()


def _overlaps(a: Tuple[int, int], b: Tuple[int, int], size: int) -> bool:
    return a[0] < b[0] + size and b[0] < a[0] + size and a[1] < b[1] + size and b[1] < a[1] + size


def sample_normal_roi(
    image: np.ndarray,
    ad_center: Tuple[int, int],
    size: int,
    rng_seed: int
) -> Tuple[int, int]:
    """
    随机选取与结构扭曲窗口零重叠、且非背景的正常 ROI 中心

    Args:
        image: 灰度图像
        ad_center: 结构扭曲中心
        size: 窗口边长
        rng_seed: 随机种子

    Returns:
        平移后的有效窗口中心 (row, col)
    """
    image = ensure_gray_image(image)
    height, width = image.shape
    ad_origin = window_origin(ad_center, size, image.shape)
    rng = np.random.default_rng(rng_seed)
    budget = DatasetConstants.NORMAL_SAMPLING_MAX_DRAWS

    for _ in range(budget):
        candidate = (int(rng.integers(0, height)), int(rng.integers(0, width)))
        top, left = window_origin(candidate, size, image.shape)
        if _overlaps((top, left), ad_origin, size):
            continue
        if image[top:top + size, left:left + size].mean() <= DatasetConstants.BACKGROUND_MEAN_THRESHOLD:
            continue
        return top + size // 2, left + size // 2

    raise PlacementError(
        f"{budget} 次抽样内未找到与结构扭曲窗口不重叠的正常 ROI",
        draws=budget
    )


def extract_roi_pairs(exam: ExamImage, size: int, seed: int) -> List[Tuple[RoiRecord, np.ndarray]]:
    """
    按标记提取 ROI：每个标记一个结构扭曲 ROI 和一个随机正常 ROI

    Args:
        exam: 带标记的检查图像
        size: ROI 边长
        seed: 运行种子

    Returns:
        (RoiRecord, 像素) 列表，按标记顺序交替为 AD、正常
    """
    pairs: List[Tuple[RoiRecord, np.ndarray]] = []
    for mark in exam.marks:
        ad_center = (mark.row, mark.col)
        top, left = window_origin(ad_center, size, exam.pixels.shape)
        ad_record = RoiRecord(
            image_id=exam.exam_id, center_row=top + size // 2, center_col=left + size // 2,
            size=size, label=RoiLabel.AD
        )
        pairs.append((ad_record, crop_roi(exam.pixels, ad_center, size)))

        mark_seed = int(np.random.SeedSequence([seed, mark.row, mark.col]).generate_state(1)[0])
        normal_center = sample_normal_roi(exam.pixels, ad_center, size, mark_seed)
        normal_record = RoiRecord(
            image_id=exam.exam_id, center_row=normal_center[0], center_col=normal_center[1],
            size=size, label=RoiLabel.NORMAL
        )
        pairs.append((normal_record, crop_roi(exam.pixels, normal_center, size)))

    logger.info(f"检查 {exam.exam_id} 提取 ROI {len(pairs)} 个")
    return pairs
