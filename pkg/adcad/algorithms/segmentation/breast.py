"""
乳腺区域分割
Otsu 阈值（256 级直方图）加最大 4 连通分量
"""

import logging

import numpy as np
from scipy import ndimage
from skimage.filters import threshold_otsu

from ...config.constants import ScanConstants
from ...models.image import ensure_gray_image
from ...utils.exceptions import SegmentationError

logger = logging.getLogger(__name__)


def segment_breast(image: np.ndarray) -> np.ndarray:
    """
    分割乳腺前景

    Args:
        image: [0,1] 灰度图像

    Returns:
        与图像同形的布尔掩膜，仅保留面积最大的 4 连通前景分量
    """
    image = ensure_gray_image(image)
    if image.min() == image.max():
        raise SegmentationError("图像像素全部相同，无法分割前景")

    try:
        threshold = threshold_otsu(image, nbins=ScanConstants.HISTOGRAM_BINS)
        foreground = image > threshold
        if not foreground.any():
            raise SegmentationError(f"阈值 {threshold:.6f} 以上没有前景像素")

        # 默认结构元素即 4 连通
        components, count = ndimage.label(foreground)
        sizes = np.bincount(components.ravel())
        sizes[0] = 0
        largest = int(sizes.argmax())

        mask = components == largest
        logger.debug(
            f"乳腺分割完成，阈值: {threshold:.4f}，连通分量: {count}，"
            f"保留面积: {int(sizes[largest])}"
        )
        return mask

    except SegmentationError:
        raise
    except Exception as e:
        logger.error(f"乳腺分割失败: {str(e)}")
        raise
