"""
优化器
带动量的随机梯度下降
"""

from typing import List, Sequence, Tuple

import numpy as np

from ...utils.exceptions import ConfigurationError, ShapeError


def sgd_update(
    params: Sequence[np.ndarray],
    grads: Sequence[np.ndarray],
    velocity: Sequence[np.ndarray],
    learning_rate: float,
    momentum: float
) -> Tuple[List[np.ndarray], List[np.ndarray]]:
    """
    动量 SGD 一步：v <- momentum·v - lr·g；p <- p + v

    Args:
        params: 参数张量列表
        grads: 对应梯度
        velocity: 对应速度
        learning_rate: 学习率，> 0
        momentum: 动量，[0, 1)

    Returns:
        (新参数列表, 新速度列表)，输入不被修改
    """
    if learning_rate <= 0:
        raise ConfigurationError(f"学习率必须为正，实际为 {learning_rate}",
                                 config_key="learning_rate", config_value=learning_rate)
    if not 0 <= momentum < 1:
        raise ConfigurationError(f"动量必须位于 [0,1)，实际为 {momentum}",
                                 config_key="momentum", config_value=momentum)
    if not len(params) == len(grads) == len(velocity):
        raise ShapeError(
            f"参数/梯度/速度数量不一致: {len(params)}/{len(grads)}/{len(velocity)}"
        )

    new_params: List[np.ndarray] = []
    new_velocity: List[np.ndarray] = []
    for index, (p, g, v) in enumerate(zip(params, grads, velocity)):
        if not p.shape == g.shape == v.shape:
            raise ShapeError(
                f"第 {index} 个参数形状不一致: {p.shape}/{g.shape}/{v.shape}",
                expected=p.shape, actual=g.shape if g.shape != p.shape else v.shape
            )
        v_next = momentum * v - learning_rate * g
        new_velocity.append(v_next)
        new_params.append(p + v_next)
    return new_params, new_velocity
