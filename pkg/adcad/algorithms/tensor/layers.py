"""
网络层原语
卷积、最大池化、全连接、ReLU 与 softmax 交叉熵的前向/反向计算（float64）
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.special import log_softmax, softmax

from ...utils.exceptions import ConfigurationError, ShapeError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FilterBank:
    """卷积滤波器组：weights [out, in, k, k]，bias [out]"""

    weights: np.ndarray
    bias: np.ndarray

    def __post_init__(self):
        if self.weights.ndim != 4 or self.weights.shape[2] != self.weights.shape[3]:
            raise ShapeError(
                f"卷积权重必须为 [out, in, k, k]，实际为 {self.weights.shape}",
                actual=self.weights.shape
            )
        if self.weights.shape[2] % 2 == 0:
            raise ConfigurationError(
                f"卷积核尺寸必须为奇数，实际为 {self.weights.shape[2]}",
                config_key="kernel_size", config_value=int(self.weights.shape[2])
            )
        if self.bias.shape != (self.weights.shape[0],):
            raise ShapeError(
                f"偏置形状 {self.bias.shape} 与输出通道数 {self.weights.shape[0]} 不符",
                expected=(self.weights.shape[0],), actual=self.bias.shape
            )

    @property
    def kernel_size(self) -> int:
        return int(self.weights.shape[2])

    @property
    def in_channels(self) -> int:
        return int(self.weights.shape[1])

    @property
    def out_channels(self) -> int:
        return int(self.weights.shape[0])


@dataclass(frozen=True)
class LayerGradients:
    """层梯度：与参数同形，另含输入梯度"""

    input: np.ndarray
    weights: Optional[np.ndarray] = None
    bias: Optional[np.ndarray] = None


@dataclass(frozen=True)
class PoolIndices:
    """最大池化胜出位置：窗口内行优先下标 0..3，并记录输入形状"""

    indices: np.ndarray
    input_shape: Tuple[int, ...]

    @property
    def output_shape(self) -> Tuple[int, ...]:
        return tuple(self.indices.shape)


def _as_batch(x: np.ndarray, name: str) -> Tuple[np.ndarray, bool]:
    """[C,H,W] 补批维为 [1,C,H,W]；返回 (批数组, 是否需要去掉批维)"""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 3:
        return x[np.newaxis], True
    if x.ndim == 4:
        return x, False
    raise ShapeError(f"{name} 必须为 [C,H,W] 或 [N,C,H,W]，实际维度 {x.ndim}", actual=x.shape)


def _pad(x: np.ndarray, p: int) -> np.ndarray:
    return np.pad(x, ((0, 0), (0, 0), (p, p), (p, p)))


def conv2d_forward(x: np.ndarray, filters: FilterBank) -> np.ndarray:
    """
    same 填充的二维互相关

    Args:
        x: 输入 [C,H,W] 或 [N,C,H,W]
        filters: 滤波器组

    Returns:
        输出 [F,H,W] 或 [N,F,H,W]
    """
    batch, squeeze = _as_batch(x, "卷积输入")
    if batch.shape[1] != filters.in_channels:
        raise ShapeError(
            f"输入通道数 {batch.shape[1]} 与滤波器输入通道数 {filters.in_channels} 不符",
            expected=(filters.in_channels,), actual=(batch.shape[1],)
        )
    k = filters.kernel_size
    windows = sliding_window_view(_pad(batch, (k - 1) // 2), (k, k), axis=(2, 3))
    out = np.tensordot(windows, filters.weights, axes=((1, 4, 5), (1, 2, 3)))
    out = out.transpose(0, 3, 1, 2) + filters.bias[np.newaxis, :, np.newaxis, np.newaxis]
    return out[0] if squeeze else out


def conv2d_backward(x: np.ndarray, filters: FilterBank, upstream: np.ndarray) -> LayerGradients:
    """
    卷积反向传播

    Args:
        x: 前向输入
        filters: 前向使用的滤波器组
        upstream: 损失对输出的梯度，形状与前向输出一致

    Returns:
        LayerGradients(input, weights, bias)
    """
    batch, squeeze = _as_batch(x, "卷积输入")
    grad = np.asarray(upstream, dtype=np.float64)
    if squeeze:
        grad = grad[np.newaxis]
    expected = (batch.shape[0], filters.out_channels) + batch.shape[2:]
    if grad.shape != expected:
        raise ShapeError(
            f"上游梯度形状 {grad.shape} 与卷积输出形状 {expected} 不符",
            expected=expected, actual=grad.shape
        )
    if batch.shape[1] != filters.in_channels:
        raise ShapeError(
            f"输入通道数 {batch.shape[1]} 与滤波器输入通道数 {filters.in_channels} 不符",
            expected=(filters.in_channels,), actual=(batch.shape[1],)
        )

    k = filters.kernel_size
    p = (k - 1) // 2
    windows = sliding_window_view(_pad(batch, p), (k, k), axis=(2, 3))
    grad_weights = np.tensordot(grad, windows, axes=((0, 2, 3), (0, 2, 3)))
    grad_bias = grad.sum(axis=(0, 2, 3))

    # 输入梯度：上游梯度与翻转核的 same 互相关
    grad_windows = sliding_window_view(_pad(grad, p), (k, k), axis=(2, 3))
    flipped = filters.weights[:, :, ::-1, ::-1]
    grad_input = np.tensordot(grad_windows, flipped, axes=((1, 4, 5), (0, 2, 3)))
    grad_input = grad_input.transpose(0, 3, 1, 2)

    return LayerGradients(
        input=grad_input[0] if squeeze else grad_input,
        weights=grad_weights,
        bias=grad_bias
    )


def maxpool_forward(x: np.ndarray) -> Tuple[np.ndarray, PoolIndices]:
    """
    2x2 不重叠最大池化

    Args:
        x: 输入 [C,H,W] 或 [N,C,H,W]，H、W 为偶数

    Returns:
        (输出, 胜出位置)；并列时取窗口内行优先的第一个
    """
    batch, squeeze = _as_batch(x, "池化输入")
    n, c, h, w = batch.shape
    if h % 2 or w % 2:
        raise ShapeError(f"池化输入的高宽必须为偶数，实际为 {h}x{w}", actual=batch.shape)

    blocks = batch.reshape(n, c, h // 2, 2, w // 2, 2).transpose(0, 1, 2, 4, 3, 5)
    blocks = blocks.reshape(n, c, h // 2, w // 2, 4)
    winners = blocks.argmax(axis=-1)
    out = np.take_along_axis(blocks, winners[..., np.newaxis], axis=-1)[..., 0]

    if squeeze:
        return out[0], PoolIndices(winners[0], tuple(batch.shape[1:]))
    return out, PoolIndices(winners, tuple(batch.shape))


def maxpool_backward(pool: PoolIndices, upstream: np.ndarray) -> np.ndarray:
    """
    最大池化反向传播：梯度只路由到胜出位置

    Args:
        pool: 前向记录的胜出位置
        upstream: 损失对池化输出的梯度

    Returns:
        输入梯度
    """
    grad = np.asarray(upstream, dtype=np.float64)
    expected_out = pool.input_shape[:-2] + (pool.input_shape[-2] // 2, pool.input_shape[-1] // 2)
    if grad.shape != pool.output_shape or grad.shape != expected_out:
        raise ShapeError(
            f"上游梯度形状 {grad.shape} 与池化记录 {pool.output_shape} 不符",
            expected=pool.output_shape, actual=grad.shape
        )

    squeeze = grad.ndim == 3
    indices = pool.indices[np.newaxis] if squeeze else pool.indices
    grad = grad[np.newaxis] if squeeze else grad
    n, c, h2, w2 = grad.shape

    blocks = np.zeros((n, c, h2, w2, 4))
    np.put_along_axis(blocks, indices[..., np.newaxis], grad[..., np.newaxis], axis=-1)
    grad_input = blocks.reshape(n, c, h2, w2, 2, 2).transpose(0, 1, 2, 4, 3, 5)
    grad_input = grad_input.reshape(n, c, 2 * h2, 2 * w2)
    return grad_input[0] if squeeze else grad_input


def _check_dense(x: np.ndarray, weights: np.ndarray, bias: Optional[np.ndarray] = None):
    if weights.ndim != 2 or x.shape[-1] != weights.shape[1]:
        raise ShapeError(
            f"全连接输入维度 {x.shape} 与权重形状 {weights.shape} 不匹配",
            expected=(weights.shape[1],) if weights.ndim == 2 else None, actual=x.shape
        )
    if bias is not None and bias.shape != (weights.shape[0],):
        raise ShapeError(
            f"全连接偏置形状 {bias.shape} 与输出维度 {weights.shape[0]} 不符",
            expected=(weights.shape[0],), actual=bias.shape
        )


def dense_forward(x: np.ndarray, weights: np.ndarray, bias: np.ndarray) -> np.ndarray:
    """全连接层 w·x + b，x 为 [n] 或 [N,n]"""
    x = np.asarray(x, dtype=np.float64)
    _check_dense(x, weights, bias)
    return x @ weights.T + bias


def dense_backward(x: np.ndarray, weights: np.ndarray, upstream: np.ndarray) -> LayerGradients:
    """全连接层反向传播"""
    x = np.asarray(x, dtype=np.float64)
    grad = np.asarray(upstream, dtype=np.float64)
    _check_dense(x, weights)
    if grad.shape != x.shape[:-1] + (weights.shape[0],):
        raise ShapeError(
            f"上游梯度形状 {grad.shape} 与全连接输出不符",
            expected=x.shape[:-1] + (weights.shape[0],), actual=grad.shape
        )
    if x.ndim == 1:
        return LayerGradients(input=weights.T @ grad, weights=np.outer(grad, x), bias=grad.copy())
    return LayerGradients(input=grad @ weights, weights=grad.T @ x, bias=grad.sum(axis=0))


def relu(x: np.ndarray) -> np.ndarray:
    return np.maximum(np.asarray(x, dtype=np.float64), 0.0)


def relu_backward(x: np.ndarray, upstream: np.ndarray) -> np.ndarray:
    """x > 0 处梯度通过，x <= 0 处为 0"""
    x = np.asarray(x, dtype=np.float64)
    upstream = np.asarray(upstream, dtype=np.float64)
    if x.shape != upstream.shape:
        raise ShapeError(
            f"ReLU 上游梯度形状 {upstream.shape} 与输入 {x.shape} 不符",
            expected=x.shape, actual=upstream.shape
        )
    return np.where(x > 0, upstream, 0.0)


def softmax_probabilities(logits: np.ndarray) -> np.ndarray:
    """按最后一维的 softmax"""
    return softmax(np.asarray(logits, dtype=np.float64), axis=-1)


def softmax_cross_entropy(
    logits: np.ndarray,
    true_class: Union[int, np.ndarray]
) -> Tuple[float, np.ndarray]:
    """
    softmax 交叉熵（减最大值稳定化）

    Args:
        logits: [K] 或 [N,K]
        true_class: 类别下标；批输入时为长度 N 的数组

    Returns:
        (loss, grad)；批输入时 loss 为批均值，grad 已除以 N
    """
    logits = np.asarray(logits, dtype=np.float64)
    if logits.ndim == 1:
        log_probs = log_softmax(logits)
        grad = np.exp(log_probs)
        grad[int(true_class)] -= 1.0
        return float(-log_probs[int(true_class)]), grad

    if logits.ndim != 2:
        raise ShapeError(f"logits 必须为 [K] 或 [N,K]，实际维度 {logits.ndim}", actual=logits.shape)
    classes = np.asarray(true_class, dtype=np.int64)
    if classes.shape != (logits.shape[0],):
        raise ShapeError(
            f"标签数 {classes.shape} 与批大小 {logits.shape[0]} 不符",
            expected=(logits.shape[0],), actual=classes.shape
        )
    n = logits.shape[0]
    rows = np.arange(n)
    log_probs = log_softmax(logits, axis=1)
    grad = np.exp(log_probs)
    grad[rows, classes] -= 1.0
    return float(-log_probs[rows, classes].mean()), grad / n
