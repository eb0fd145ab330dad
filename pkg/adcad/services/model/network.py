"""
卷积网络
k 个 [5x5 same 卷积 -> ReLU -> 2x2 最大池化] 阶段 + 单层全连接（2 输出）
"""

import logging
from dataclasses import dataclass
from typing import Any, List, Mapping, Optional, Tuple, Union

import numpy as np

from ...algorithms.tensor import (
    FilterBank, PoolIndices, conv2d_backward, conv2d_forward, dense_backward,
    dense_forward, maxpool_backward, maxpool_forward, relu, relu_backward,
    softmax_cross_entropy, softmax_probabilities
)
from ...config.validation import validate_model
from ...models.network import CheckpointMeta, NetworkConfig
from ...utils.exceptions import ShapeError

logger = logging.getLogger(__name__)


def parameter_shapes(config: NetworkConfig) -> List[Tuple[int, ...]]:
    """参数形状，按阶段顺序：各阶段卷积权重、偏置，最后全连接权重、偏置"""
    shapes: List[Tuple[int, ...]] = []
    in_channels = 1
    for filters in config.filters:
        shapes.append((filters, in_channels, config.kernel_size, config.kernel_size))
        shapes.append((filters,))
        in_channels = filters
    shapes.append((config.classes, config.dense_inputs))
    shapes.append((config.classes,))
    return shapes


@dataclass
class StageCache:
    """单个阶段的前向中间量"""

    conv_input: np.ndarray
    pre_activation: np.ndarray
    pool: PoolIndices


@dataclass
class ForwardCache:
    """整个网络的前向中间量"""

    stages: List[StageCache]
    features: np.ndarray
    logits: np.ndarray

    def activation_pattern(self) -> Tuple[np.ndarray, ...]:
        """ReLU 符号与池化胜出位置"""
        pattern: List[np.ndarray] = []
        for stage in self.stages:
            pattern.append(stage.pre_activation > 0)
            pattern.append(stage.pool.indices)
        return tuple(pattern)


class ConvNet:
    """从零实现的卷积网络"""

    def __init__(
        self,
        config: NetworkConfig,
        parameters: List[np.ndarray],
        metadata: Optional[CheckpointMeta] = None
    ):
        """
        Args:
            config: 网络结构
            parameters: 参数张量（按 parameter_shapes 顺序）
            metadata: 训练元数据
        """
        expected = parameter_shapes(config)
        actual = [tuple(p.shape) for p in parameters]
        if actual != expected:
            raise ShapeError(f"参数形状与网络结构不符: {actual} != {expected}")
        self.config = config
        self._params = [np.ascontiguousarray(p, dtype=np.float64) for p in parameters]
        self.metadata = metadata or CheckpointMeta()

    def parameters(self) -> List[np.ndarray]:
        """参数数组本身"""
        return self._params

    def set_parameters(self, parameters: List[np.ndarray]) -> None:
        shapes = [tuple(p.shape) for p in parameters]
        if shapes != [tuple(p.shape) for p in self._params]:
            raise ShapeError("新参数形状与网络结构不符")
        self._params = [np.ascontiguousarray(p, dtype=np.float64) for p in parameters]

    def copy(self) -> 'ConvNet':
        return ConvNet(self.config, [p.copy() for p in self._params], self.metadata)

    def _filter_banks(self) -> List[FilterBank]:
        return [
            FilterBank(self._params[2 * i], self._params[2 * i + 1])
            for i in range(self.config.stages)
        ]

    def _prepare(self, batch: np.ndarray) -> np.ndarray:
        """[N,H,W] 或 [N,1,H,W] -> [N,1,H,W]，并检查输入尺寸"""
        batch = np.asarray(batch, dtype=np.float64)
        if batch.ndim == 3:
            batch = batch[:, np.newaxis]
        size = self.config.input_size
        if batch.ndim != 4 or batch.shape[1] != 1 or batch.shape[2:] != (size, size):
            raise ShapeError(
                f"输入形状 {batch.shape} 与网络输入 {size}x{size} 不符",
                expected=(size, size), actual=batch.shape
            )
        return batch

    def _forward(self, batch: np.ndarray) -> ForwardCache:
        x = self._prepare(batch)
        stages: List[StageCache] = []
        for bank in self._filter_banks():
            pre = conv2d_forward(x, bank)
            pooled, pool = maxpool_forward(relu(pre))
            stages.append(StageCache(conv_input=x, pre_activation=pre, pool=pool))
            x = pooled
        features = x.reshape(x.shape[0], -1)
        logits = dense_forward(features, self._params[-2], self._params[-1])
        return ForwardCache(stages=stages, features=features, logits=logits)

    def logits(self, batch: np.ndarray) -> np.ndarray:
        return self._forward(batch).logits

    def forward(self, batch: np.ndarray) -> np.ndarray:
        """
        类别概率

        Args:
            batch: 标准化图像 [N,H,W]

        Returns:
            [N,2] 概率，列 1 为结构扭曲
        """
        return softmax_probabilities(self.logits(batch))

    def predict_scores(self, batch: np.ndarray) -> np.ndarray:
        """结构扭曲类别概率 [N]"""
        return self.forward(batch)[:, 1]

    def predict_score(self, image: np.ndarray) -> float:
        """单张标准化图像的结构扭曲概率"""
        return float(self.predict_scores(np.asarray(image)[np.newaxis])[0])

    def loss(self, batch: np.ndarray, labels: np.ndarray) -> float:
        loss, _ = softmax_cross_entropy(self.logits(batch), labels)
        return loss

    def loss_with_pattern(self, batch: np.ndarray, labels: np.ndarray) -> Tuple[float, Tuple[Any, ...]]:
        cache = self._forward(batch)
        loss, _ = softmax_cross_entropy(cache.logits, labels)
        return loss, cache.activation_pattern()

    def loss_and_gradients(self, batch: np.ndarray, labels: np.ndarray) -> Tuple[float, List[np.ndarray]]:
        """
        批均值交叉熵及其对全部参数的梯度

        Args:
            batch: 标准化图像 [N,H,W]
            labels: 类别下标 [N]

        Returns:
            (loss, 与 parameters() 同序的梯度列表)
        """
        cache = self._forward(batch)
        loss, grad_logits = softmax_cross_entropy(cache.logits, labels)

        dense = dense_backward(cache.features, self._params[-2], grad_logits)
        last = cache.stages[-1]
        grad = dense.input.reshape((cache.features.shape[0],) + last.pool.output_shape[1:])

        stage_grads: List[np.ndarray] = []
        for bank, stage in zip(reversed(self._filter_banks()), reversed(cache.stages)):
            grad = maxpool_backward(stage.pool, grad)
            grad = relu_backward(stage.pre_activation, grad)
            conv = conv2d_backward(stage.conv_input, bank, grad)
            stage_grads = [conv.weights, conv.bias] + stage_grads
            grad = conv.input

        return loss, stage_grads + [dense.weights, dense.bias]


def build_network(config: Union[NetworkConfig, Mapping[str, Any]], seed: int) -> ConvNet:
    """
    按配置构建网络并做 He 初始化

    Args:
        config: 网络结构（或待校验的字段字典）
        seed: 初始化种子

    Returns:
        ConvNet；权重 ~ normal(0, sqrt(2/fan_in))，偏置为 0
    """
    if not isinstance(config, NetworkConfig):
        config = validate_model(NetworkConfig, config, prefix="network")

    rng = np.random.default_rng(seed)
    parameters: List[np.ndarray] = []
    for shape in parameter_shapes(config):
        if len(shape) == 1:
            parameters.append(np.zeros(shape))
        else:
            fan_in = int(np.prod(shape[1:]))
            parameters.append(rng.normal(0.0, np.sqrt(2.0 / fan_in), size=shape))

    logger.info(
        f"构建网络: 输入 {config.input_size}，阶段 {config.stages}，"
        f"滤波器 {config.filters}，全连接输入 {config.dense_inputs}"
    )
    return ConvNet(config, parameters)
