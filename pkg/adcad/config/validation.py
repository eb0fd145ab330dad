"""
运行配置验证模块
定义单次运行的配置树（RunConfig），负责 TOML 配置文件加载、命令行覆盖与校验
"""

import copy
import logging
import tomllib
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Type, TypeVar, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from ..models.dataset import SplitMode, SplitName, SplitRatios
from ..models.network import NetworkConfig, TrainingConfig, TrainingParams
from ..models.scan import ScanGrid
from ..utils.exceptions import ConfigurationError

logger = logging.getLogger(__name__)

ModelT = TypeVar('ModelT', bound=BaseModel)


class NetworkSection(NetworkConfig):
    """network 配置段（默认 64x64 输入，桌面规模训练）"""

    input_size: int = Field(default=64, gt=0, description="输入边长（正方形）")

    def to_network_config(self) -> NetworkConfig:
        return NetworkConfig(**self.model_dump())


class SplitSection(SplitRatios):
    """split 配置段"""

    mode: SplitMode = Field(default=SplitMode.ROI_LEVEL, description="划分模式")

    def to_ratios(self) -> SplitRatios:
        return SplitRatios(train=self.train, validation=self.validation, test=self.test)


class AugmentSection(BaseModel):
    """augment 配置段（噪声方差固定为 0/0.02/0.04/0.06）"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    seed_offset: int = Field(default=0, ge=0, description="噪声种子相对运行种子的偏移")


class SynthSection(BaseModel):
    """synth 配置段"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    count: int = Field(default=600, ge=2, description="合成 ROI 总数（两类各半）")
    roi_size: int = Field(default=64, ge=8, description="合成/提取 ROI 边长")
    exam_size: int = Field(default=1024, ge=64, description="合成全片边长")
    exam_count: int = Field(default=1, ge=1, description="扫描缺省时合成的检查数")


class EvalSection(BaseModel):
    """eval 配置段"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    split: SplitName = Field(default=SplitName.TEST, description="评估的数据划分")
    threshold: float = Field(default=0.5, ge=0, le=1, description="判定阈值")


class ScanSection(ScanGrid):
    """scan 配置段"""

    threshold: float = Field(default=0.5, ge=0, le=1, description="判定阈值")

    def to_grid(self) -> ScanGrid:
        return ScanGrid(roi_size=self.roi_size, stride=self.stride, coverage_min=self.coverage_min)


class GradcheckSection(BaseModel):
    """gradcheck 配置段"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    epsilon: float = Field(default=1e-5, gt=0, description="中心差分步长")
    floor: float = Field(default=1e-4, gt=0, description="相对误差分母下限（1e-4 配合 1e-6 阈值即小梯度坐标绝对误差 < 1e-10）")
    coordinates: int = Field(default=600, ge=500, description="抽样检查的参数坐标数")
    input_size: int = Field(default=64, gt=0, description="检查用网络输入边长")
    base_filters: int = Field(default=8, ge=1, description="检查用网络基础滤波器数")
    batch: int = Field(default=2, ge=1, description="检查用批大小")
    tolerance: float = Field(default=1e-6, gt=0, description="最大相对误差告警阈值")


class PathsSection(BaseModel):
    """paths 配置段（相对路径位于 workdir 下）"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    workdir: str = Field(default="work", description="工作目录")
    rois_dir: str = Field(default="rois", description="ROI 图像目录")
    manifest: str = Field(default="manifest.csv", description="数据清单")
    checkpoint: str = Field(default="model.ckpt", description="模型检查点")
    history: str = Field(default="history.csv", description="训练历史")
    exams_dir: str = Field(default="exams", description="全片检查目录")
    scan_dir: str = Field(default="scan", description="扫描结果目录")
    scan_summary: str = Field(default="scan_summary.csv", description="扫描汇总表")
    log_dir: str = Field(default="logs", description="运行日志目录")

    def resolve(self, name: str) -> Path:
        """解析为工作目录下的路径"""
        path = Path(getattr(self, name))
        if name == 'workdir' or path.is_absolute():
            return path
        return Path(self.workdir) / path


class RunConfig(BaseModel):
    """单次运行的完整配置"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    seed: int = Field(default=0, ge=0, description="全局随机种子")
    network: NetworkSection = Field(default_factory=NetworkSection)
    train: TrainingParams = Field(default_factory=TrainingParams)
    split: SplitSection = Field(default_factory=SplitSection)
    augment: AugmentSection = Field(default_factory=AugmentSection)
    synth: SynthSection = Field(default_factory=SynthSection)
    eval: EvalSection = Field(default_factory=EvalSection)
    scan: ScanSection = Field(default_factory=ScanSection)
    gradcheck: GradcheckSection = Field(default_factory=GradcheckSection)
    paths: PathsSection = Field(default_factory=PathsSection)

    def training_config(self) -> TrainingConfig:
        """合并训练参数与全局种子"""
        return TrainingConfig(**self.train.model_dump(), seed=self.seed)

    @property
    def noise_seed(self) -> int:
        return self.seed + self.augment.seed_offset


def deep_merge(base: Dict[str, Any], overrides: Mapping[str, Any]) -> Dict[str, Any]:
    """递归合并字典，overrides 优先"""
    merged = copy.deepcopy(base)
    for key, value in overrides.items():
        if isinstance(value, Mapping) and isinstance(merged.get(key), dict):
            merged[key] = deep_merge(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def validate_model(model_cls: Type[ModelT], data: Mapping[str, Any], prefix: str = "") -> ModelT:
    """
    校验配置数据，错误转换为 ConfigurationError

    Args:
        model_cls: pydantic 模型类
        data: 原始配置
        prefix: 错误键的前缀（如 "network"）

    Returns:
        校验后的模型实例
    """
    try:
        return model_cls.model_validate(dict(data))
    except ValidationError as e:
        first = e.errors()[0]
        parts = [prefix] if prefix else []
        parts.extend(str(part) for part in first['loc'])
        config_key = ".".join(parts) or None
        raise ConfigurationError(
            f"配置项 {config_key or '(根)'} 无效: {first['msg']}",
            config_key=config_key,
            config_value=first.get('input'),
            detail=str(e)
        ) from e


def load_config(
    path: Optional[Union[str, Path]] = None,
    overrides: Optional[Mapping[str, Any]] = None
) -> RunConfig:
    """
    加载运行配置：默认值 < 配置文件 < 命令行参数

    Args:
        path: TOML 配置文件路径，None 表示只用默认值
        overrides: 命令行参数转换得到的嵌套字典

    Returns:
        RunConfig
    """
    data: Dict[str, Any] = {}
    if path is not None:
        try:
            with open(path, 'rb') as handle:
                data = tomllib.load(handle)
        except OSError as e:
            raise ConfigurationError(f"无法读取配置文件 {path}: {e}", config_value=str(path)) from e
        except tomllib.TOMLDecodeError as e:
            raise ConfigurationError(f"配置文件格式错误 {path}: {e}", config_value=str(path)) from e

    if overrides:
        data = deep_merge(data, overrides)

    config = validate_model(RunConfig, data)
    logger.debug(f"配置加载完成: {path or '默认值'}")
    return config


__all__ = [
    'RunConfig',
    'NetworkSection',
    'SplitSection',
    'AugmentSection',
    'SynthSection',
    'EvalSection',
    'ScanSection',
    'GradcheckSection',
    'PathsSection',
    'deep_merge',
    'validate_model',
    'load_config',
]
