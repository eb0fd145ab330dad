"""
PGM 图像读写
二进制 P5 灰度图，maxval 为 255 或 65535（16 位样本大端序），强度线性映射到 [0,1]
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np

from ...models.image import ensure_gray_image
from ...utils.exceptions import ImageFormatError

logger = logging.getLogger(__name__)

SUPPORTED_MAXVALS = (255, 65535)
DEFAULT_MAXVAL = 65535
_WHITESPACE = b" \t\n\r\x0b\x0c"


@dataclass(frozen=True)
class PgmImage:
    """解码后的 PGM：[0,1] 像素与文件的 maxval"""

    pixels: np.ndarray
    maxval: int


def _unwrap(image: Union[np.ndarray, PgmImage], maxval: Optional[int]) -> Tuple[np.ndarray, int]:
    """PgmImage 默认沿用自身 maxval，裸数组默认 16 位"""
    if isinstance(image, PgmImage):
        return image.pixels, image.maxval if maxval is None else maxval
    return image, DEFAULT_MAXVAL if maxval is None else maxval


def _next_token(data: bytes, offset: int) -> Tuple[bytes, int, int]:
    """跳过空白与注释，返回 (token, token 起点, token 之后的位置)"""
    while offset < len(data):
        byte = data[offset:offset + 1]
        if byte == b"#":
            end = data.find(b"\n", offset)
            offset = len(data) if end < 0 else end + 1
        elif byte in _WHITESPACE:
            offset += 1
        else:
            break
    start = offset
    while offset < len(data) and data[offset:offset + 1] not in _WHITESPACE and data[offset:offset + 1] != b"#":
        offset += 1
    if start == offset:
        raise ImageFormatError("PGM 头部不完整", byte_offset=start)
    return data[start:offset], start, offset


def _header_int(data: bytes, offset: int, field: str) -> Tuple[int, int, int]:
    token, start, end = _next_token(data, offset)
    if not token.isdigit():
        raise ImageFormatError(f"PGM 头部字段 {field} 不是十进制整数: {token!r}", byte_offset=start)
    return int(token), start, end


def decode_pgm(data: bytes) -> np.ndarray:
    """解码 P5 字节串，返回 [0,1] 范围的 float64 图像"""
    return decode_pgm_image(data).pixels


def decode_pgm_image(data: bytes) -> PgmImage:
    """
    解码 P5 字节串并保留 maxval

    Args:
        data: 文件内容

    Returns:
        PgmImage
    """
    if data[:2] != b"P5":
        raise ImageFormatError(f"PGM 魔数错误: {data[:2]!r}", byte_offset=0)

    width, start, offset = _header_int(data, 2, "width")
    if width < 1:
        raise ImageFormatError("PGM 宽度必须 >= 1", byte_offset=start)
    height, start, offset = _header_int(data, offset, "height")
    if height < 1:
        raise ImageFormatError("PGM 高度必须 >= 1", byte_offset=start)
    maxval, start, offset = _header_int(data, offset, "maxval")
    if maxval not in SUPPORTED_MAXVALS:
        raise ImageFormatError(f"不支持的 maxval: {maxval}（仅支持 255 或 65535）", byte_offset=start)

    # maxval 之后恰好一个空白字节
    if offset >= len(data) or data[offset:offset + 1] not in _WHITESPACE:
        raise ImageFormatError("PGM 头部之后缺少分隔空白", byte_offset=offset)
    offset += 1

    dtype = np.dtype(np.uint8) if maxval == 255 else np.dtype('>u2')
    expected = width * height * dtype.itemsize
    if len(data) - offset < expected:
        raise ImageFormatError(
            f"PGM 像素数据截断: 需要 {expected} 字节，实际 {len(data) - offset} 字节",
            byte_offset=len(data)
        )

    samples = np.frombuffer(data, dtype=dtype, count=width * height, offset=offset)
    return PgmImage(pixels=samples.reshape(height, width).astype(np.float64) / maxval, maxval=maxval)


def encode_pgm(image: Union[np.ndarray, PgmImage], maxval: Optional[int] = None) -> bytes:
    """
    编码为规范 P5 字节串（头部 `P5\\n{w} {h}\\n{maxval}\\n`）

    Args:
        image: [0,1] 图像或 PgmImage
        maxval: 255 或 65535；None 时 PgmImage 沿用自身 maxval，数组使用 65535
    """
    pixels, maxval = _unwrap(image, maxval)
    if maxval not in SUPPORTED_MAXVALS:
        raise ImageFormatError(f"不支持的 maxval: {maxval}（仅支持 255 或 65535）")
    pixels = ensure_gray_image(pixels)
    height, width = pixels.shape
    dtype = np.dtype(np.uint8) if maxval == 255 else np.dtype('>u2')
    samples = np.rint(pixels * maxval).astype(dtype)
    header = f"P5\n{width} {height}\n{maxval}\n".encode("ascii")
    return header + samples.tobytes()


def read_pgm_image(path: Union[str, Path]) -> PgmImage:
    """读取 PGM 文件并保留 maxval"""
    data = Path(path).read_bytes()
    try:
        return decode_pgm_image(data)
    except ImageFormatError as e:
        logger.error(f"读取 PGM 失败 {path}: {e.message}（字节偏移 {e.byte_offset}）")
        raise


def read_pgm(path: Union[str, Path]) -> np.ndarray:
    """读取 PGM 文件，返回 [0,1] 像素"""
    return read_pgm_image(path).pixels


def write_pgm(image: Union[np.ndarray, PgmImage], path: Union[str, Path], maxval: Optional[int] = None) -> Path:
    """写入 PGM 文件；规范文件经 read_pgm_image 读入后原样写回逐字节相同"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(encode_pgm(image, maxval))
    return path
