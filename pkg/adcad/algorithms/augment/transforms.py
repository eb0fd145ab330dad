"""
数据增强
翻转/旋转/高斯噪声的确定性增强计划，以及 z-score 标准化与面积均值下采样
"""

import logging
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import List, Tuple

import numpy as np

from ...config.constants import ProtocolConstants
from ...models.image import ensure_gray_image
from ...utils.exceptions import ConfigurationError, ShapeError

logger = logging.getLogger(__name__)


class GeometricTransform(str, Enum):
    """几何变换标签（旋转为顺时针；f∘g 表示先 g 后 f）"""
    IDENTITY = "identity"
    FLIP_H = "flipH"
    FLIP_V = "flipV"
    FLIP_HV = "flipHV"
    ROT90 = "rot90"
    ROT180 = "rot180"
    ROT270 = "rot270"
    FLIP_H_ROT90 = "flipH∘rot90"
    FLIP_V_ROT90 = "flipV∘rot90"


def _rotate_cw(image: np.ndarray, quarter_turns: int) -> np.ndarray:
    return np.rot90(image, k=-quarter_turns)


_GEOMETRY = {
    GeometricTransform.IDENTITY: lambda x: x,
    GeometricTransform.FLIP_H: lambda x: x[:, ::-1],
    GeometricTransform.FLIP_V: lambda x: x[::-1, :],
    GeometricTransform.FLIP_HV: lambda x: x[::-1, ::-1],
    GeometricTransform.ROT90: lambda x: _rotate_cw(x, 1),
    GeometricTransform.ROT180: lambda x: _rotate_cw(x, 2),
    GeometricTransform.ROT270: lambda x: _rotate_cw(x, 3),
    GeometricTransform.FLIP_H_ROT90: lambda x: _rotate_cw(x, 1)[:, ::-1],
    GeometricTransform.FLIP_V_ROT90: lambda x: _rotate_cw(x, 1)[::-1, :],
}


@dataclass(frozen=True)
class NoiseSpec:
    """零均值高斯噪声，方差以 [0,1] 强度的平方为单位"""

    variance: float = 0.0

    def __post_init__(self):
        if self.variance not in ProtocolConstants.NOISE_VARIANCES:
            raise ConfigurationError(
                f"噪声方差必须是 {ProtocolConstants.NOISE_VARIANCES} 之一，实际为 {self.variance}",
                config_key="augment.noise_variance", config_value=self.variance
            )


@dataclass(frozen=True)
class PlanEntry:
    """增强计划中的一项"""

    index: int
    transform: GeometricTransform
    noise: NoiseSpec


@lru_cache(maxsize=1)
def enumerate_plan() -> Tuple[PlanEntry, ...]:
    """
    固定的 36 项增强计划：9 种几何变换（外层）× 4 种噪声方差（内层）

    Returns:
        按计划顺序排列的 PlanEntry 元组，第 0 项为 (identity, 方差 0)
    """
    entries = []
    for transform in GeometricTransform:
        for variance in ProtocolConstants.NOISE_VARIANCES:
            entries.append(PlanEntry(len(entries), transform, NoiseSpec(variance)))
    return tuple(entries)


def apply_geometric(image: np.ndarray, transform: GeometricTransform) -> np.ndarray:
    """
    几何变换（纯像素置换，无插值）

    Args:
        image: 正方形灰度图像
        transform: 几何变换标签

    Returns:
        变换后的连续数组
    """
    image = np.asarray(image, dtype=np.float64)
    if image.ndim != 2 or image.shape[0] != image.shape[1]:
        raise ShapeError(f"几何变换需要正方形图像，实际形状 {image.shape}", actual=image.shape)
    return np.ascontiguousarray(_GEOMETRY[GeometricTransform(transform)](image))


def gaussian_noise_field(
    shape: Tuple[int, ...],
    variance: float,
    seed: int,
    roi_id: int = 0,
    plan_index: int = 0
) -> np.ndarray:
    """由 (seed, roi_id, plan_index) 决定的 PCG64 正态噪声场（截断前）"""
    rng = np.random.default_rng(np.random.SeedSequence([seed, roi_id, plan_index]))
    return rng.normal(0.0, np.sqrt(variance), size=shape)


def add_gaussian_noise(
    image: np.ndarray,
    spec: NoiseSpec,
    seed: int,
    roi_id: int = 0,
    plan_index: int = 0
) -> np.ndarray:
    """
    加零均值高斯噪声并截断到 [0,1]

    Args:
        image: [0,1] 灰度图像
        spec: 噪声方差
        seed: 运行种子
        roi_id: ROI 编号
        plan_index: 计划下标

    Returns:
        加噪图像；方差为 0 时原样返回输入
    """
    if spec.variance == 0:
        return image
    image = ensure_gray_image(image)
    noise = gaussian_noise_field(image.shape, spec.variance, seed, roi_id, plan_index)
    return np.clip(image + noise, 0.0, 1.0)


def apply_plan_entry(image: np.ndarray, entry: PlanEntry, seed: int, roi_id: int = 0) -> np.ndarray:
    """先几何变换、后加噪"""
    transformed = apply_geometric(image, entry.transform)
    return add_gaussian_noise(transformed, entry.noise, seed, roi_id, entry.index)


def augment_roi(roi: np.ndarray, plan: Tuple[PlanEntry, ...], seed: int, roi_id: int = 0) -> List[np.ndarray]:
    """
    按计划顺序生成 ROI 的全部增强变体

    Args:
        roi: 正方形 [0,1] ROI
        plan: 增强计划
        seed: 运行种子
        roi_id: ROI 编号（噪声键的一部分）

    Returns:
        与计划等长的图像列表
    """
    roi = ensure_gray_image(roi, "roi")
    return [apply_plan_entry(roi, entry, seed, roi_id) for entry in plan]


def zscore_standardize(image: np.ndarray, epsilon: float = 1e-8) -> np.ndarray:
    """(x - mean) / max(std, epsilon)，总体标准差"""
    image = np.asarray(image, dtype=np.float64)
    if image.size == 0:
        raise ShapeError("标准化需要非空图像", actual=image.shape)
    return (image - image.mean()) / max(float(image.std()), epsilon)


def area_mean_downscale(image: np.ndarray, size: int) -> np.ndarray:
    """
    整数倍面积均值下采样到 size x size

    Args:
        image: 正方形图像，边长为 size 的整数倍
        size: 目标边长

    Returns:
        下采样图像；边长相同时原样返回
    """
    image = np.asarray(image, dtype=np.float64)
    height, width = image.shape
    if height == size and width == size:
        return image
    if height != width or height % size:
        raise ShapeError(
            f"图像 {height}x{width} 不是 {size}x{size} 的整数倍，无法面积均值下采样",
            expected=(size, size), actual=image.shape
        )
    factor = height // size
    return image.reshape(size, factor, size, factor).mean(axis=(1, 3))
