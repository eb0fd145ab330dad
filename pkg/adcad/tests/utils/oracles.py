"""
参考实现
全部用朴素循环写成，只用于与库实现对照
"""

from typing import Callable, List, Sequence, Tuple

import numpy as np


def naive_conv2d(x: np.ndarray, weights: np.ndarray, bias: np.ndarray) -> np.ndarray:
    """五重循环的 same 填充互相关，x 为 [C,H,W]"""
    channels, height, width = x.shape
    filters, _, k, _ = weights.shape
    p = (k - 1) // 2
    out = np.zeros((filters, height, width))
    for f in range(filters):
        for i in range(height):
            for j in range(width):
                total = bias[f]
                for c in range(channels):
                    for u in range(k):
                        for v in range(k):
                            r, s = i + u - p, j + v - p
                            if 0 <= r < height and 0 <= s < width:
                                total += weights[f, c, u, v] * x[c, r, s]
                out[f, i, j] = total
    return out


def naive_maxpool(x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """逐窗口扫描的 2x2 最大池化，返回 (输出, 行优先首个胜出下标)"""
    channels, height, width = x.shape
    out = np.zeros((channels, height // 2, width // 2))
    winners = np.zeros((channels, height // 2, width // 2), dtype=np.int64)
    for c in range(channels):
        for i in range(height // 2):
            for j in range(width // 2):
                best, best_index = -np.inf, 0
                for index, (u, v) in enumerate([(0, 0), (0, 1), (1, 0), (1, 1)]):
                    value = x[c, 2 * i + u, 2 * j + v]
                    if value > best:
                        best, best_index = value, index
                out[c, i, j] = best
                winners[c, i, j] = best_index
    return out, winners


def numeric_gradient(fn: Callable[[np.ndarray], float], x: np.ndarray, epsilon: float = 1e-5) -> np.ndarray:
    """中心差分梯度（原地扰动后恢复）"""
    x = np.array(x, dtype=np.float64)
    grad = np.zeros_like(x)
    flat, flat_grad = x.reshape(-1), grad.reshape(-1)
    for index in range(flat.size):
        original = flat[index]
        flat[index] = original + epsilon
        plus = fn(x)
        flat[index] = original - epsilon
        minus = fn(x)
        flat[index] = original
        flat_grad[index] = (plus - minus) / (2 * epsilon)
    return grad


def relative_error(analytic: np.ndarray, numeric: np.ndarray, floor: float = 1e-12) -> float:
    """max |a-n| / max(|a|, |n|, floor)"""
    a, n = np.asarray(analytic).reshape(-1), np.asarray(numeric).reshape(-1)
    return float(np.max(np.abs(a - n) / np.maximum(np.maximum(np.abs(a), np.abs(n)), floor)))


def threshold_sweep_points(scores: Sequence[float], labels: Sequence[bool]) -> List[Tuple[float, float]]:
    """对每个不同分数值作阈值（score >= t 判阳）计算 (FPR, TPR)，加上 (0,0)"""
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels, dtype=bool)
    positives, negatives = labels.sum(), (~labels).sum()
    points = [(0.0, 0.0)]
    for threshold in sorted(set(scores.tolist()), reverse=True):
        predicted = scores >= threshold
        tp = int(np.sum(predicted & labels))
        fp = int(np.sum(predicted & ~labels))
        points.append((fp / negatives, tp / positives))
    return points


def brute_force_grid(mask: np.ndarray, roi_size: int, stride: int, coverage_min: float) -> List[Tuple[int, int]]:
    """双重循环枚举窗口并直接统计覆盖率"""
    height, width = mask.shape
    centers = []
    for top in range(0, height - roi_size + 1, stride):
        for left in range(0, width - roi_size + 1, stride):
            coverage = mask[top:top + roi_size, left:left + roi_size].mean()
            if coverage >= coverage_min:
                centers.append((top + roi_size // 2, left + roi_size // 2))
    return centers


def brute_force_heatmap(shape: Tuple[int, int], centers, roi_size: int, scores) -> np.ndarray:
    """逐像素枚举覆盖它的窗口取最大分数"""
    heatmap = np.zeros(shape)
    half = roi_size // 2
    for i in range(shape[0]):
        for j in range(shape[1]):
            covering = [
                score for (row, col), score in zip(centers, scores)
                if row - half <= i < row - half + roi_size and col - half <= j < col - half + roi_size
            ]
            if covering:
                heatmap[i, j] = max(covering)
    return heatmap


def radial_statistic(image: np.ndarray, center: Tuple[int, int]) -> float:
    """
    绕中心的平均绝对角向强度差

    在半径 R/16..R/5（R 为图像边长，毛刺长度为 R/4）的圆环上按最近像素取样，
    相邻角度样本之差的绝对值取平均；放射状线条使该值升高
    """
    size = image.shape[0]
    values = []
    for radius in range(max(size // 16, 2), size // 5 + 1):
        samples = max(int(round(2 * np.pi * radius)), 8)
        angles = np.linspace(0.0, 2 * np.pi, samples, endpoint=False)
        rows = np.clip(np.rint(center[0] + radius * np.sin(angles)).astype(int), 0, size - 1)
        cols = np.clip(np.rint(center[1] + radius * np.cos(angles)).astype(int), 0, size - 1)
        ring = image[rows, cols]
        values.append(np.mean(np.abs(np.diff(np.r_[ring, ring[:1]]))))
    return float(np.mean(values))
