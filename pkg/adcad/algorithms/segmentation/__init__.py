"""
分割模块
"""

from .breast import segment_breast

__all__ = ['segment_breast']
