"""
测试数据构造
"""

from .images import (
    two_region_image, blob_image, synthetic_array_dataset, PeakScorer, write_roi_workspace
)

__all__ = [
    'two_region_image',
    'blob_image',
    'synthetic_array_dataset',
    'PeakScorer',
    'write_roi_workspace',
]
