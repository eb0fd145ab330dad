"""
数据增强模块
"""

from .transforms import (
    GeometricTransform, NoiseSpec, PlanEntry, enumerate_plan, apply_geometric,
    gaussian_noise_field, add_gaussian_noise, apply_plan_entry, augment_roi,
    zscore_standardize, area_mean_downscale
)

__all__ = [
    'GeometricTransform',
    'NoiseSpec',
    'PlanEntry',
    'enumerate_plan',
    'apply_geometric',
    'gaussian_noise_field',
    'add_gaussian_noise',
    'apply_plan_entry',
    'augment_roi',
    'zscore_standardize',
    'area_mean_downscale',
]
