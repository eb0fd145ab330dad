"""
合成数据生成
平滑随机纹理（正常）与叠加放射状毛刺线的纹理（结构扭曲），以及带乳腺轮廓的合成全片
"""

import logging
from typing import List, Tuple

import numpy as np
from scipy import ndimage
from skimage.draw import line

from ...config.constants import DatasetConstants
from ...models.dataset import RoiLabel
from ...models.image import AdMark, ExamImage
from ...utils.exceptions import ConfigurationError

logger = logging.getLogger(__name__)

# 种子序列中的类别编码
_STREAM_CODES = {RoiLabel.NORMAL: 0, RoiLabel.AD: 1}
_EXAM_STREAM = 2

# 乳腺半椭圆的纵向/横向半轴（相对图像尺寸）
BREAST_SEMI_AXES = (0.48, 0.9)


def smoothed_field(rng: np.random.Generator, shape: Tuple[int, int], box: int) -> np.ndarray:
    """白噪声经 box 均值滤波后线性缩放到 [0.2, 0.8]"""
    white = rng.random(shape)
    smooth = ndimage.uniform_filter(white, size=box, mode='reflect')
    low, high = DatasetConstants.SYNTH_FIELD_RANGE
    span = smooth.max() - smooth.min()
    return low + (smooth - smooth.min()) / span * (high - low)


def spiculation_boost(
    rng: np.random.Generator,
    shape: Tuple[int, int],
    center: Tuple[int, int],
    radius: float,
    width: int = 1
) -> np.ndarray:
    """
    放射状毛刺线的亮度增量

    Args:
        rng: 随机数生成器
        shape: 图像形状
        center: 放射中心
        radius: 线段长度，增量随距离线性衰减到 0
        width: 线宽（像素）

    Returns:
        增量图，各线段取最大值合成
    """
    boost = np.zeros(shape)
    low, high = DatasetConstants.SYNTH_SPICULE_COUNT
    count = int(rng.integers(low, high + 1))
    angles = rng.uniform(0.0, 2 * np.pi, size=count)
    r0, c0 = int(center[0]), int(center[1])

    for angle in angles:
        r1 = int(round(r0 + radius * np.sin(angle)))
        c1 = int(round(c0 + radius * np.cos(angle)))
        rr, cc = line(r0, c0, r1, c1)
        inside = (rr >= 0) & (rr < shape[0]) & (cc >= 0) & (cc < shape[1])
        rr, cc = rr[inside], cc[inside]
        falloff = 1.0 - np.hypot(rr - r0, cc - c0) / radius
        values = DatasetConstants.SYNTH_SPICULE_GAIN * np.clip(falloff, 0.0, 1.0)
        boost[rr, cc] = np.maximum(boost[rr, cc], values)

    if width > 1:
        boost = ndimage.maximum_filter(boost, size=width)
    return boost


def synth_samples(
    count: int,
    label: RoiLabel,
    image_size: int,
    seed: int
) -> List[Tuple[np.ndarray, Tuple[int, int]]]:
    """
    生成合成 ROI 及其（潜在）毛刺中心

    Args:
        count: 数量
        label: 类别
        image_size: 边长
        seed: 种子

    Returns:
        (图像, 中心) 列表；正常类也抽取中心但不叠加毛刺
    """
    if count < 1:
        raise ConfigurationError(f"合成数量必须 >= 1，实际为 {count}", config_key="synth.count",
                                 config_value=count)
    label = RoiLabel(label)
    samples = []
    for index in range(count):
        rng = np.random.default_rng(np.random.SeedSequence([seed, _STREAM_CODES[label], index]))
        image = smoothed_field(rng, (image_size, image_size), DatasetConstants.SYNTH_BOX_FILTER)
        margin = image_size // 4
        center = tuple(int(v) for v in rng.integers(margin, image_size - margin, size=2))
        if label is RoiLabel.AD:
            image = image + spiculation_boost(rng, image.shape, center, image_size / 4)
        samples.append((np.clip(image, 0.0, 1.0), center))
    return samples


def synth_generate(count: int, label: RoiLabel, image_size: int, seed: int) -> List[np.ndarray]:
    """生成合成 ROI 图像"""
    images = [image for image, _ in synth_samples(count, label, image_size, seed)]
    logger.info(f"合成 {RoiLabel(label).value} 类 ROI {len(images)} 个，尺寸 {image_size}")
    return images


def breast_mask(shape: Tuple[int, int]) -> np.ndarray:
    """胸壁位于左侧的半椭圆乳腺区域"""
    height, width = shape
    rows, cols = np.ogrid[:height, :width]
    vertical, horizontal = BREAST_SEMI_AXES
    return ((rows - height / 2) / (vertical * height)) ** 2 + (cols / (horizontal * width)) ** 2 <= 1.0


def synth_exam(
    size: int,
    seed: int,
    roi_size: int,
    input_size: int,
    exam_id: str = "exam_0",
    index: int = 0
) -> ExamImage:
    """
    生成带单个结构扭曲的合成全片

    Args:
        size: 全片边长
        seed: 种子
        roi_size: 扫描窗口边长
        input_size: 网络输入边长；纹理按 roi_size / input_size 放大
        exam_id: 检查编号
        index: 种子序列中的检查序号

    Returns:
        ExamImage（背景为 0，含一个 AdMark）
    """
    if roi_size % input_size:
        raise ConfigurationError(
            f"扫描窗口 {roi_size} 必须是网络输入 {input_size} 的整数倍",
            config_key="scan.roi_size", config_value=roi_size
        )
    scale = roi_size // input_size
    rng = np.random.default_rng(np.random.SeedSequence([seed, _EXAM_STREAM, index]))
    mask = breast_mask((size, size))
    field = smoothed_field(rng, (size, size), DatasetConstants.SYNTH_BOX_FILTER * scale)

    row = int(rng.integers(int(0.3 * size), int(0.7 * size) + 1))
    col = int(rng.integers(roi_size // 2, max(roi_size // 2 + 1, size // 2)))
    boost = spiculation_boost(rng, (size, size), (row, col), roi_size / 4, width=scale)

    pixels = np.clip((field + boost) * mask, 0.0, 1.0)
    logger.info(f"合成全片 {exam_id}: {size}x{size}，结构扭曲中心 ({row}, {col})")
    return ExamImage(exam_id=exam_id, pixels=pixels, marks=[AdMark(row=row, col=col)])
