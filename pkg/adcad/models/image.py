"""
图像数据模型
定义灰度图像校验、专家标记与全片检查图像
"""

from typing import List, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..utils.exceptions import DataValidationError


def ensure_gray_image(image, name: str = "image") -> np.ndarray:
    """
    校验并转换灰度图像

    Args:
        image: 二维数组，像素取值应在 [0,1]
        name: 出错时报告的参数名

    Returns:
        float64 二维数组
    """
    array = np.asarray(image, dtype=np.float64)
    if array.ndim != 2 or array.size == 0:
        raise DataValidationError(
            f"{name} 必须是非空二维灰度图像，实际形状: {array.shape}",
            validation_errors=[{'field': name, 'shape': list(array.shape)}]
        )
    if not np.all(np.isfinite(array)):
        raise DataValidationError(f"{name} 含有非有限像素值")
    low, high = float(array.min()), float(array.max())
    if low < 0.0 or high > 1.0:
        raise DataValidationError(
            f"{name} 像素超出 [0,1] 范围: [{low}, {high}]",
            validation_errors=[{'field': name, 'min': low, 'max': high}]
        )
    return array


class AdMark(BaseModel):
    """结构扭曲中心标记"""

    model_config = ConfigDict(frozen=True)

    row: int = Field(..., ge=0, description="标记中心行坐标（像素）")
    col: int = Field(..., ge=0, description="标记中心列坐标（像素）")


class ExamImage(BaseModel):
    """全片检查图像"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    exam_id: str = Field(..., min_length=1, description="检查编号")
    pixels: np.ndarray = Field(..., description="灰度像素，取值 [0,1]")
    marks: List[AdMark] = Field(default_factory=list, description="专家标注的结构扭曲中心")
    maxval: Literal[255, 65535] = Field(default=65535, description="写回 PGM 时使用的 maxval")

    @field_validator('pixels')
    @classmethod
    def validate_pixels(cls, v: np.ndarray) -> np.ndarray:
        """验证像素矩阵"""
        return ensure_gray_image(v, "pixels")

    @model_validator(mode='after')
    def validate_marks(self) -> 'ExamImage':
        """验证标记位于图像内部"""
        height, width = self.pixels.shape
        for mark in self.marks:
            if mark.row >= height or mark.col >= width:
                raise ValueError(
                    f"标记 ({mark.row}, {mark.col}) 超出图像范围 {height}x{width}"
                )
        return self

    @property
    def height(self) -> int:
        return int(self.pixels.shape[0])

    @property
    def width(self) -> int:
        return int(self.pixels.shape[1])
