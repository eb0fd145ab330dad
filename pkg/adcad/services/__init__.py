"""
服务层
数据集、模型、全片扫描与流水线编排
"""

from .pipeline import Pipeline

__all__ = ['Pipeline']
