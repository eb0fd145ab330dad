"""
全片扫描模型
定义扫描网格参数、逐 ROI 打分结果与单次检查的扫描结果
"""

from typing import List, Optional

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..config.constants import ProtocolConstants, ScanConstants
from .dataset import RoiLabel
from .evaluation import RocCurve


class ScanGrid(BaseModel):
    """扫描网格"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    roi_size: int = Field(default=ProtocolConstants.ROI_SIZE, ge=1, description="扫描窗口边长")
    stride: int = Field(default=ScanConstants.DEFAULT_STRIDE, ge=1, description="窗口步长")
    coverage_min: float = Field(
        default=ScanConstants.DEFAULT_COVERAGE_MIN, gt=0, le=1,
        description="窗口内乳腺区域最小占比"
    )

    @model_validator(mode='after')
    def validate_stride(self) -> 'ScanGrid':
        if self.stride > self.roi_size:
            raise ValueError(f"步长 {self.stride} 不能大于窗口边长 {self.roi_size}")
        return self


class ScoredRoi(BaseModel):
    """单个扫描窗口的结果"""

    model_config = ConfigDict(frozen=True)

    row: int = Field(..., description="窗口中心行")
    col: int = Field(..., description="窗口中心列")
    score: float = Field(..., ge=0, le=1, description="结构扭曲概率")
    label: RoiLabel = Field(..., description="按中心包含规则得到的标签")


class ScanResult(BaseModel):
    """单次检查的扫描结果"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    exam_id: str = Field(..., description="检查编号")
    rois: List[ScoredRoi] = Field(default_factory=list, description="按行优先顺序排列的窗口结果")
    roc: Optional[RocCurve] = Field(None, description="ROC 曲线，单一类别时为空")
    auc: Optional[float] = Field(None, description="AUC，单一类别时为空")
    accuracy: float = Field(..., ge=0, le=1, description="阈值准确率")
    heatmap: np.ndarray = Field(..., description="逐像素覆盖窗口最大分数")

    @property
    def n_rois(self) -> int:
        return len(self.rois)

    @property
    def n_positive(self) -> int:
        return sum(1 for roi in self.rois if roi.label is RoiLabel.AD)

    @property
    def roc_defined(self) -> bool:
        return self.roc is not None

    def best_roi(self) -> Optional[ScoredRoi]:
        """分数最高的窗口（并列取行优先顺序中最早者）"""
        if not self.rois:
            return None
        return max(self.rois, key=lambda roi: roi.score)

    def to_frame(self) -> pd.DataFrame:
        """转换为 row,col,score,label 表"""
        return pd.DataFrame(
            [(roi.row, roi.col, roi.score, roi.label.value) for roi in self.rois],
            columns=['row', 'col', 'score', 'label']
        )
