"""
adcad - 乳腺X线结构扭曲检测流水线
纯 numpy 实现的卷积网络、确定性数据增强、ROC/AUC 评估与全片滑窗扫描
"""

from .config.version import PROJECT_VERSION

__version__ = PROJECT_VERSION

__all__ = ['__version__']
