"""
数据模型模块
提供流水线使用的 pydantic 数据模型
"""

from .image import ensure_gray_image, AdMark, ExamImage
from .dataset import RoiLabel, SplitName, SplitMode, RoiRecord, SplitRatios
from .network import (
    NetworkConfig, TrainingParams, TrainingConfig, EpochRecord, TrainingHistory,
    CheckpointMeta, stage_count
)
from .evaluation import ScoredSample, RocCurve, EvaluationMetrics
from .scan import ScanGrid, ScoredRoi, ScanResult

__all__ = [
    # 图像
    'ensure_gray_image',
    'AdMark',
    'ExamImage',

    # 数据集
    'RoiLabel',
    'SplitName',
    'SplitMode',
    'RoiRecord',
    'SplitRatios',

    # 网络与训练
    'NetworkConfig',
    'TrainingParams',
    'TrainingConfig',
    'EpochRecord',
    'TrainingHistory',
    'CheckpointMeta',
    'stage_count',

    # 评估
    'ScoredSample',
    'RocCurve',
    'EvaluationMetrics',

    # 扫描
    'ScanGrid',
    'ScoredRoi',
    'ScanResult',
]
