"""
数据集模型
定义 ROI 记录、类别标签、数据划分比例与划分模式
"""

from enum import Enum
from fractions import Fraction
from typing import Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..config.constants import DatasetConstants, ProtocolConstants


class RoiLabel(str, Enum):
    """ROI 类别"""
    AD = DatasetConstants.LABEL_AD
    NORMAL = DatasetConstants.LABEL_NORMAL

    @property
    def class_index(self) -> int:
        """网络输出下标（1 = 结构扭曲）"""
        return 1 if self is RoiLabel.AD else 0


class SplitName(str, Enum):
    """数据划分名称"""
    TRAIN = DatasetConstants.SPLIT_TRAIN
    VAL = DatasetConstants.SPLIT_VAL
    TEST = DatasetConstants.SPLIT_TEST


class SplitMode(str, Enum):
    """划分模式"""
    # 同一 ROI 的全部增强变体进入同一划分
    ROI_LEVEL = "roi-level"
    # 直接划分增强后的样本池
    PAPER_FAITHFUL = "paper-faithful"


class RoiRecord(BaseModel):
    """带标签的 ROI 引用"""

    model_config = ConfigDict(frozen=True)

    image_id: str = Field(..., min_length=1, description="来源图像编号")
    center_row: int = Field(..., ge=0, description="中心行坐标")
    center_col: int = Field(..., ge=0, description="中心列坐标")
    size: int = Field(default=ProtocolConstants.ROI_SIZE, gt=0, description="ROI 边长（像素）")
    label: RoiLabel = Field(..., description="类别")

    @property
    def center(self) -> Tuple[int, int]:
        return self.center_row, self.center_col


class SplitRatios(BaseModel):
    """训练/验证/测试划分比例"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    train: float = Field(default=ProtocolConstants.SPLIT_RATIOS[0], gt=0, lt=1, description="训练集比例")
    validation: float = Field(default=ProtocolConstants.SPLIT_RATIOS[1], gt=0, lt=1, description="验证集比例")
    test: float = Field(default=ProtocolConstants.SPLIT_RATIOS[2], gt=0, lt=1, description="测试集比例")

    @model_validator(mode='after')
    def validate_sum(self) -> 'SplitRatios':
        """三个比例之和必须为 1"""
        total = self.train + self.validation + self.test
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"划分比例之和必须为1，实际为 {total}")
        return self

    def as_fractions(self) -> Tuple[Fraction, Fraction, Fraction]:
        """转换为有理数，避免浮点配额误差（0.70 -> 7/10）"""
        return tuple(
            Fraction(value).limit_denominator(10 ** 6)
            for value in (self.train, self.validation, self.test)
        )
