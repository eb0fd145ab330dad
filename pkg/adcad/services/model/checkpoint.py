"""
模型检查点
8 字节魔数 ADCNN\0v1 + UTF-8 JSON 头部行 + 小端 float64 参数
"""

import json
import logging
from pathlib import Path
from typing import Union

import numpy as np
from pydantic import ValidationError

from ...config.version import CHECKPOINT_FORMAT_VERSION
from ...models.network import CheckpointMeta, NetworkConfig
from ...utils.exceptions import CheckpointFormatError
from .network import ConvNet, parameter_shapes

logger = logging.getLogger(__name__)

MAGIC_PREFIX = b"ADCNN\0"
MAGIC = MAGIC_PREFIX + CHECKPOINT_FORMAT_VERSION.encode("ascii")


def encode_checkpoint(network: ConvNet) -> bytes:
    """序列化为检查点字节串"""
    header = {
        'config': network.config.model_dump(),
        'epoch': network.metadata.epoch,
        'val_cost': network.metadata.val_cost,
    }
    header_line = json.dumps(header, sort_keys=True, separators=(",", ":")) + "\n"
    payload = np.concatenate([p.reshape(-1) for p in network.parameters()]).astype('<f8')
    return MAGIC + header_line.encode("utf-8") + payload.tobytes()


def decode_checkpoint(data: bytes) -> ConvNet:
    """从检查点字节串恢复网络"""
    if len(data) < len(MAGIC) or data[:len(MAGIC_PREFIX)] != MAGIC_PREFIX:
        raise CheckpointFormatError("检查点魔数错误", byte_offset=0)
    if data[:len(MAGIC)] != MAGIC:
        raise CheckpointFormatError(
            f"不支持的检查点版本: {data[len(MAGIC_PREFIX):len(MAGIC)]!r}",
            byte_offset=len(MAGIC_PREFIX)
        )

    header_end = data.find(b"\n", len(MAGIC))
    if header_end < 0:
        raise CheckpointFormatError("检查点头部缺少换行", byte_offset=len(data))
    try:
        header = json.loads(data[len(MAGIC):header_end].decode("utf-8"))
        config = NetworkConfig.model_validate(header['config'])
        metadata = CheckpointMeta(epoch=header['epoch'], val_cost=header['val_cost'])
    except (UnicodeDecodeError, ValueError, KeyError, TypeError, ValidationError) as e:
        raise CheckpointFormatError(f"检查点头部无效: {e}", byte_offset=len(MAGIC)) from e

    shapes = parameter_shapes(config)
    count = sum(int(np.prod(shape)) for shape in shapes)
    payload_start = header_end + 1
    payload_length = len(data) - payload_start
    if payload_length != count * 8:
        raise CheckpointFormatError(
            f"检查点参数长度错误: 需要 {count * 8} 字节，实际 {payload_length} 字节",
            byte_offset=payload_start + min(payload_length, count * 8)
        )

    flat = np.frombuffer(data, dtype='<f8', count=count, offset=payload_start).astype(np.float64)
    parameters = []
    offset = 0
    for shape in shapes:
        size = int(np.prod(shape))
        parameters.append(flat[offset:offset + size].reshape(shape).copy())
        offset += size
    return ConvNet(config, parameters, metadata)


def save_checkpoint(network: ConvNet, path: Union[str, Path]) -> Path:
    """保存检查点"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(encode_checkpoint(network))
    logger.info(f"检查点已保存: {path}")
    return path


def load_checkpoint(path: Union[str, Path]) -> ConvNet:
    """加载检查点"""
    try:
        network = decode_checkpoint(Path(path).read_bytes())
    except CheckpointFormatError as e:
        logger.error(f"加载检查点失败 {path}: {e.message}")
        raise
    logger.info(f"检查点已加载: {path}（轮次 {network.metadata.epoch}）")
    return network
