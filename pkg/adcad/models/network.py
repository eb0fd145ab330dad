"""
网络与训练模型
定义网络结构配置、训练参数、训练历史与检查点元数据
"""

from typing import List, Optional

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..config.constants import ProtocolConstants


class NetworkConfig(BaseModel):
    """网络结构配置"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    input_size: int = Field(default=ProtocolConstants.ROI_SIZE, gt=0, description="输入边长（正方形）")
    kernel_size: int = Field(default=ProtocolConstants.KERNEL_SIZE, gt=0, description="卷积核边长")
    base_filters: int = Field(default=8, ge=1, description="第一阶段滤波器数量")
    target_map: int = Field(default=ProtocolConstants.TARGET_MAP, ge=1, description="最终特征图边长")
    classes: int = Field(default=ProtocolConstants.CLASSES, ge=2, le=2, description="输出类别数")

    @field_validator('kernel_size')
    @classmethod
    def validate_kernel_size(cls, v: int) -> int:
        """same 填充要求奇数卷积核"""
        if v % 2 == 0:
            raise ValueError(f"卷积核尺寸必须为奇数，实际为 {v}")
        return v

    @model_validator(mode='after')
    def validate_reachable(self) -> 'NetworkConfig':
        """输入尺寸必须能经若干次减半到达目标特征图"""
        if stage_count(self.input_size, self.target_map) is None:
            raise ValueError(
                f"输入尺寸 {self.input_size} 无法通过 2 倍下采样得到 "
                f"{self.target_map}x{self.target_map} 特征图"
            )
        return self

    @property
    def stages(self) -> int:
        return stage_count(self.input_size, self.target_map)

    @property
    def filters(self) -> List[int]:
        """各阶段滤波器数量"""
        return [self.base_filters * 2 ** i for i in range(self.stages)]

    @property
    def dense_inputs(self) -> int:
        """全连接层输入维度"""
        return self.target_map * self.target_map * self.filters[-1]


def stage_count(input_size: int, target_map: int) -> Optional[int]:
    """返回满足 input_size / 2^k == target_map 的正整数 k，不存在时返回 None"""
    if input_size % target_map != 0:
        return None
    ratio = input_size // target_map
    if ratio < 2 or ratio & (ratio - 1):
        return None
    return ratio.bit_length() - 1


class TrainingParams(BaseModel):
    """训练超参数"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    batch_size: int = Field(default=ProtocolConstants.BATCH_SIZE, ge=1, description="批大小")
    learning_rate: float = Field(default=0.01, gt=0, description="学习率")
    momentum: float = Field(default=0.9, ge=0, lt=1, description="动量系数")
    max_epochs: int = Field(default=30, ge=1, description="最大训练轮数")
    patience: int = Field(default=5, ge=1, description="验证损失未改善时的容忍轮数")


class TrainingConfig(TrainingParams):
    """训练配置（含随机种子）"""

    seed: int = Field(default=0, ge=0, description="随机种子")


class EpochRecord(BaseModel):
    """单轮训练记录"""

    epoch: int = Field(..., ge=1, description="轮次")
    train_cost: float = Field(..., description="训练集平均损失")
    val_cost: float = Field(..., description="验证集平均损失")
    val_acc: float = Field(..., ge=0, le=1, description="验证集准确率")


class TrainingHistory(BaseModel):
    """训练历史"""

    epochs: List[EpochRecord] = Field(default_factory=list, description="每轮记录")

    @property
    def best(self) -> Optional[EpochRecord]:
        """验证损失最小的轮次（并列取最早）"""
        if not self.epochs:
            return None
        return min(self.epochs, key=lambda record: (record.val_cost, record.epoch))

    def to_frame(self) -> pd.DataFrame:
        """转换为 epoch,train_cost,val_cost,val_acc 表"""
        columns = ['epoch', 'train_cost', 'val_cost', 'val_acc']
        return pd.DataFrame([record.model_dump() for record in self.epochs], columns=columns)


class CheckpointMeta(BaseModel):
    """检查点训练元数据"""

    model_config = ConfigDict(frozen=True)

    epoch: int = Field(default=0, ge=0, description="最佳轮次（0 表示未训练）")
    val_cost: Optional[float] = Field(default=None, description="最佳验证损失")
