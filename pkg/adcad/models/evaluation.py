"""
评估模型
定义打分样本、ROC 曲线与评估指标
"""

import math
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .dataset import RoiLabel


class ScoredSample(BaseModel):
    """带分数的样本"""

    model_config = ConfigDict(frozen=True)

    score: float = Field(..., ge=0, le=1, description="结构扭曲类别概率")
    label: RoiLabel = Field(..., description="真实类别（AD 为阳性）")

    @field_validator('score')
    @classmethod
    def validate_score(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError("分数必须为有限值")
        return v

    @property
    def positive(self) -> bool:
        return self.label is RoiLabel.AD

    @staticmethod
    def to_arrays(samples: Sequence['ScoredSample']) -> Tuple[np.ndarray, np.ndarray]:
        """转换为 (scores, labels) 数组，labels 为布尔阳性标记"""
        scores = np.array([sample.score for sample in samples], dtype=np.float64)
        labels = np.array([sample.positive for sample in samples], dtype=bool)
        return scores, labels


class RocCurve(BaseModel):
    """ROC 曲线"""

    model_config = ConfigDict(frozen=True)

    fpr: List[float] = Field(..., description="假阳性率序列")
    tpr: List[float] = Field(..., description="真阳性率序列")

    @model_validator(mode='after')
    def validate_points(self) -> 'RocCurve':
        """曲线从 (0,0) 单调到 (1,1)"""
        if len(self.fpr) != len(self.tpr) or len(self.fpr) < 2:
            raise ValueError("ROC 曲线至少需要两个点且坐标长度一致")
        fpr = np.asarray(self.fpr)
        tpr = np.asarray(self.tpr)
        if (fpr[0], tpr[0]) != (0.0, 0.0) or (fpr[-1], tpr[-1]) != (1.0, 1.0):
            raise ValueError("ROC 曲线必须从 (0,0) 开始并在 (1,1) 结束")
        if np.any(np.diff(fpr) < 0) or np.any(np.diff(tpr) < 0):
            raise ValueError("ROC 曲线坐标必须单调不减")
        return self

    @property
    def points(self) -> List[Tuple[float, float]]:
        return list(zip(self.fpr, self.tpr))

    def to_frame(self) -> pd.DataFrame:
        """转换为 fpr,tpr 表"""
        return pd.DataFrame({'fpr': self.fpr, 'tpr': self.tpr})


class EvaluationMetrics(BaseModel):
    """一组样本的评估指标"""

    split: str = Field(..., description="数据划分或检查编号")
    n_samples: int = Field(..., ge=0, description="样本数")
    n_positive: int = Field(..., ge=0, description="阳性样本数")
    auc: Optional[float] = Field(None, description="梯形法 AUC，ROC 未定义时为空")
    auc_pairwise: Optional[float] = Field(None, description="成对枚举 AUC")
    accuracy: float = Field(..., ge=0, le=1, description="阈值准确率")
    threshold: float = Field(default=0.5, description="判定阈值（分数 >= 阈值判为 AD）")
