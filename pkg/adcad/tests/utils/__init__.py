"""
测试工具模块
提供独立于库实现的参考算法（暴力循环、阈值扫描等）
"""

from .oracles import (
    naive_conv2d, naive_maxpool, numeric_gradient, relative_error,
    threshold_sweep_points, brute_force_grid, brute_force_heatmap, radial_statistic
)

__all__ = [
    'naive_conv2d',
    'naive_maxpool',
    'numeric_gradient',
    'relative_error',
    'threshold_sweep_points',
    'brute_force_grid',
    'brute_force_heatmap',
    'radial_statistic',
]
