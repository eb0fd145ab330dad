"""
模型服务
网络构建、训练与检查点
"""

from .network import ConvNet, ForwardCache, build_network, parameter_shapes
from .trainer import Trainer
from .checkpoint import (
    MAGIC, encode_checkpoint, decode_checkpoint, save_checkpoint, load_checkpoint
)

__all__ = [
    'ConvNet',
    'ForwardCache',
    'build_network',
    'parameter_shapes',
    'Trainer',
    'MAGIC',
    'encode_checkpoint',
    'decode_checkpoint',
    'save_checkpoint',
    'load_checkpoint',
]
