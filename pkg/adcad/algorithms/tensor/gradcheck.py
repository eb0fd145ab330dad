"""
梯度检查
用中心差分验证解析梯度，并跳过扰动导致 ReLU/池化激活模式变化的坐标
"""

import logging
from dataclasses import dataclass
from typing import Any, List, Optional, Protocol, Sequence, Tuple

import numpy as np

from ...utils.exceptions import ConfigurationError, DataValidationError

logger = logging.getLogger(__name__)

# 抽样时最少检查的坐标数
MIN_SAMPLED_COORDINATES = 500


class DifferentiableModel(Protocol):
    """可做梯度检查的模型"""

    def parameters(self) -> List[np.ndarray]:
        """返回参数数组本身（原地扰动后立即恢复）"""

    def loss_and_gradients(self, batch: np.ndarray, labels: np.ndarray) -> Tuple[float, List[np.ndarray]]:
        """批均值损失与各参数梯度"""

    def loss_with_pattern(self, batch: np.ndarray, labels: np.ndarray) -> Tuple[float, Tuple[Any, ...]]:
        """批均值损失与激活模式（ReLU 符号与池化胜出位置）"""


@dataclass(frozen=True)
class GradientCheckResult:
    """梯度检查结果"""

    max_relative_error: float
    checked: int
    skipped: int
    worst_tensor: int = -1
    worst_index: int = -1


def _same_pattern(left: Tuple[Any, ...], right: Tuple[Any, ...]) -> bool:
    return len(left) == len(right) and all(np.array_equal(a, b) for a, b in zip(left, right))


def _select_coordinates(sizes: Sequence[int], budget: Optional[int], seed: int) -> List[np.ndarray]:
    """按张量确定性抽样；小张量先分配，剩余配额均分给较大的张量"""
    if budget is None or budget >= sum(sizes):
        return [np.arange(size) for size in sizes]

    selected: List[np.ndarray] = [np.empty(0, dtype=np.int64)] * len(sizes)
    remaining = budget
    order = sorted(range(len(sizes)), key=lambda i: (sizes[i], i))
    for position, tensor_index in enumerate(order):
        quota = remaining // (len(order) - position)
        take = min(sizes[tensor_index], quota)
        rng = np.random.default_rng(np.random.SeedSequence([seed, tensor_index]))
        selected[tensor_index] = np.sort(rng.choice(sizes[tensor_index], size=take, replace=False))
        remaining -= take
    return selected


def gradient_check(
    model: DifferentiableModel,
    batch: np.ndarray,
    labels: np.ndarray,
    epsilon: float = 1e-5,
    floor: float = 1e-12,
    max_coordinates: Optional[int] = None,
    seed: int = 0,
    analytic: Optional[Sequence[np.ndarray]] = None
) -> GradientCheckResult:
    """
    解析梯度与中心差分 (L(p+ε) - L(p-ε)) / 2ε 的比较

    Args:
        model: 待检查模型
        batch: 输入批
        labels: 类别标签
        epsilon: 差分步长
        floor: 相对误差分母下限 |a-n| / max(|a|, |n|, floor)
        max_coordinates: 抽样坐标总数上限（None 表示检查全部）
        seed: 抽样种子
        analytic: 替代解析梯度（用于验证检查器本身的灵敏度）

    Returns:
        GradientCheckResult
    """
    if np.asarray(batch).shape[0] == 0:
        raise DataValidationError("梯度检查需要非空的输入批")
    if max_coordinates is not None and max_coordinates < MIN_SAMPLED_COORDINATES:
        raise ConfigurationError(
            f"抽样坐标数至少为 {MIN_SAMPLED_COORDINATES}，实际为 {max_coordinates}",
            config_key="gradcheck.coordinates", config_value=max_coordinates
        )

    try:
        params = model.parameters()
        if analytic is None:
            _, analytic = model.loss_and_gradients(batch, labels)
        _, base_pattern = model.loss_with_pattern(batch, labels)

        selected = _select_coordinates([p.size for p in params], max_coordinates, seed)
        worst = (0.0, -1, -1)
        checked = skipped = 0

        for tensor_index, (param, grad) in enumerate(zip(params, analytic)):
            flat_param = param.reshape(-1)
            flat_grad = np.asarray(grad).reshape(-1)
            for index in selected[tensor_index]:
                original = flat_param[index]
                flat_param[index] = original + epsilon
                loss_plus, pattern_plus = model.loss_with_pattern(batch, labels)
                flat_param[index] = original - epsilon
                loss_minus, pattern_minus = model.loss_with_pattern(batch, labels)
                flat_param[index] = original

                if not (_same_pattern(base_pattern, pattern_plus)
                        and _same_pattern(base_pattern, pattern_minus)):
                    skipped += 1
                    continue

                numeric = (loss_plus - loss_minus) / (2 * epsilon)
                a = float(flat_grad[index])
                error = abs(a - numeric) / max(abs(a), abs(numeric), floor)
                checked += 1
                if error > worst[0]:
                    worst = (error, tensor_index, int(index))

        result = GradientCheckResult(
            max_relative_error=worst[0], checked=checked, skipped=skipped,
            worst_tensor=worst[1], worst_index=worst[2]
        )
        logger.info(
            f"梯度检查完成，最大相对误差: {result.max_relative_error:.3e}，"
            f"检查坐标: {checked}，跳过（激活模式变化）: {skipped}"
        )
        return result

    except Exception as e:
        logger.error(f"梯度检查失败: {str(e)}")
        raise
