"""
张量计算模块
网络层原语、优化器与梯度检查
"""

from .layers import (
    FilterBank, LayerGradients, PoolIndices,
    conv2d_forward, conv2d_backward, maxpool_forward, maxpool_backward,
    dense_forward, dense_backward, relu, relu_backward,
    softmax_probabilities, softmax_cross_entropy
)
from .optim import sgd_update
from .gradcheck import (
    DifferentiableModel, GradientCheckResult, gradient_check, MIN_SAMPLED_COORDINATES
)

__all__ = [
    'FilterBank',
    'LayerGradients',
    'PoolIndices',
    'conv2d_forward',
    'conv2d_backward',
    'maxpool_forward',
    'maxpool_backward',
    'dense_forward',
    'dense_backward',
    'relu',
    'relu_backward',
    'softmax_probabilities',
    'softmax_cross_entropy',
    'sgd_update',
    'DifferentiableModel',
    'GradientCheckResult',
    'gradient_check',
    'MIN_SAMPLED_COORDINATES',
]
