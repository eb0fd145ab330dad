"""
样本加载
按清单惰性读取 ROI：下采样到网络输入、应用增强计划项、z-score 标准化
"""

import logging
from pathlib import Path
from typing import Dict, Optional, Protocol, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from ...algorithms.augment import (
    apply_plan_entry, area_mean_downscale, enumerate_plan, zscore_standardize
)
from ...config.constants import DatasetConstants
from ...utils.exceptions import DataValidationError, ShapeError
from .manifest import plan_position
from .pgm import read_pgm

logger = logging.getLogger(__name__)


class SampleSet(Protocol):
    """训练与评估使用的样本集合"""

    labels: np.ndarray

    def __len__(self) -> int:
        """样本数"""

    def batch(self, indices: Sequence[int]) -> Tuple[np.ndarray, np.ndarray]:
        """返回 (标准化图像 [n,H,W], 类别下标 [n])"""


class ArrayDataset:
    """内存中的样本集合（图像已标准化）"""

    def __init__(self, images: np.ndarray, labels: np.ndarray):
        images = np.asarray(images, dtype=np.float64)
        labels = np.asarray(labels, dtype=np.int64)
        if images.ndim != 3 or images.shape[0] != labels.shape[0]:
            raise ShapeError(
                f"图像 {images.shape} 与标签 {labels.shape} 不匹配",
                actual=images.shape
            )
        self.images = images
        self.labels = labels

    def __len__(self) -> int:
        return int(self.labels.shape[0])

    def batch(self, indices: Sequence[int]) -> Tuple[np.ndarray, np.ndarray]:
        indices = np.asarray(indices, dtype=np.int64)
        return self.images[indices], self.labels[indices]


class ManifestDataset:
    """清单驱动的惰性样本集合"""

    def __init__(
        self,
        frame: pd.DataFrame,
        base_dir: Union[str, Path],
        input_size: int,
        seed: int
    ):
        """
        Args:
            frame: 清单（可为某个划分的子集）
            base_dir: 清单中相对路径的基准目录
            input_size: 网络输入边长
            seed: 噪声种子
        """
        self.frame = frame.reset_index(drop=True)
        self.base_dir = Path(base_dir)
        self.input_size = input_size
        self.seed = seed
        self.labels = (self.frame['label'] == DatasetConstants.LABEL_AD).to_numpy().astype(np.int64)
        self._plan = enumerate_plan()
        self._sources: Dict[str, np.ndarray] = {}

    def __len__(self) -> int:
        return len(self.frame)

    def _source(self, path: str) -> np.ndarray:
        """读取并缓存下采样后的原始 ROI"""
        if path not in self._sources:
            resolved = Path(path) if Path(path).is_absolute() else self.base_dir / path
            image = read_pgm(resolved)
            if image.shape[0] != image.shape[1]:
                raise ShapeError(f"ROI 必须为正方形: {path} {image.shape}", actual=image.shape)
            self._sources[path] = area_mean_downscale(image, self.input_size)
        return self._sources[path]

    def raw_image(self, index: int) -> np.ndarray:
        """第 index 行的增强后图像（未标准化）"""
        row = self.frame.iloc[index]
        image = self._source(row['path'])
        position = plan_position(row['plan_index'])
        if position is None:
            return image
        return apply_plan_entry(image, self._plan[position], self.seed, int(row['roi_id']))

    def batch(self, indices: Sequence[int]) -> Tuple[np.ndarray, np.ndarray]:
        indices = np.asarray(indices, dtype=np.int64)
        images = np.stack([zscore_standardize(self.raw_image(int(i))) for i in indices])
        return images, self.labels[indices]


def load_split(
    frame: pd.DataFrame,
    split: Optional[str],
    base_dir: Union[str, Path],
    input_size: int,
    seed: int
) -> ManifestDataset:
    """
    取清单中某个划分的样本集合

    Args:
        frame: 完整清单
        split: 划分名称，None 表示全部
        base_dir: 相对路径基准目录
        input_size: 网络输入边长
        seed: 噪声种子

    Returns:
        ManifestDataset
    """
    subset = frame if split is None else frame[frame['split'] == split]
    if subset.empty:
        raise DataValidationError(
            f"划分 {split} 没有样本",
            validation_errors=[{'field': 'split', 'value': split}]
        )
    logger.info(f"加载划分 {split or '全部'}: {len(subset)} 个样本")
    return ManifestDataset(subset, base_dir, input_size, seed)
