"""
ROC/AUC 单元测试
"""

import numpy as np
import pytest

from adcad.algorithms.metrics import (
    accuracy_at_threshold, auc_pairwise_oracle, auc_trapezoid, from_samples, roc_curve
)
from adcad.models.dataset import RoiLabel
from adcad.models.evaluation import ScoredSample
from adcad.tests.utils import threshold_sweep_points
from adcad.utils.exceptions import DataValidationError, DegenerateInputError


class TestRocCurve:
    """ROC 曲线测试类"""

    def setup_method(self):
        """测试前准备"""
        self.rng = np.random.default_rng(42)

    def test_perfect_separation(self):
        """完全分开时 AUC 为 1"""
        curve = roc_curve([0.9, 0.8, 0.2, 0.1], [1, 1, 0, 0])
        assert curve.points == [(0.0, 0.0), (0.0, 0.5), (0.0, 1.0), (0.5, 1.0), (1.0, 1.0)]
        assert auc_trapezoid(curve) == 1.0

    def test_all_tied(self):
        """全部并列时只有对角线"""
        curve = roc_curve([0.5] * 6, [1, 0, 1, 0, 0, 1])
        assert curve.points == [(0.0, 0.0), (1.0, 1.0)]
        assert auc_trapezoid(curve) == 0.5

    def test_known_example(self):
        """经典四样本例子 AUC 为 0.75"""
        scores, labels = [0.1, 0.4, 0.35, 0.8], [0, 0, 1, 1]
        assert auc_trapezoid(roc_curve(scores, labels)) == pytest.approx(0.75, abs=1e-15)
        assert auc_pairwise_oracle(scores, labels) == pytest.approx(0.75, abs=1e-15)

    def test_matches_threshold_sweep(self):
        """与逐阈值扫描得到的点一致"""
        scores = np.round(self.rng.random(80), 1)
        labels = self.rng.random(80) < 0.4
        curve = roc_curve(scores, labels)
        expected = threshold_sweep_points(scores, labels)
        assert len(curve.points) == len(expected)
        np.testing.assert_allclose(curve.points, expected, atol=1e-15)

    def test_trapezoid_equals_pairwise(self):
        """500 组随机数据上两种 AUC 定义一致"""
        for _ in range(500):
            n = int(self.rng.integers(2, 60))
            scores = np.round(self.rng.random(n), int(self.rng.integers(1, 4)))
            labels = self.rng.random(n) < 0.5
            labels[0], labels[1] = True, False
            auc = auc_trapezoid(roc_curve(scores, labels))
            assert abs(auc - auc_pairwise_oracle(scores, labels)) < 1e-12

    def test_monotone_transform_invariance(self):
        """严格单调变换不改变 AUC"""
        scores = self.rng.random(200)
        labels = self.rng.random(200) < 0.5
        assert auc_trapezoid(roc_curve(scores ** 3, labels)) == pytest.approx(
            auc_trapezoid(roc_curve(scores, labels)), abs=1e-12
        )

    def test_label_swap(self):
        """交换类别后 AUC 变为 1 - AUC"""
        scores = np.round(self.rng.random(100), 2)
        labels = self.rng.random(100) < 0.3
        auc = auc_trapezoid(roc_curve(scores, labels))
        swapped = auc_trapezoid(roc_curve(scores, ~labels))
        assert swapped == pytest.approx(1.0 - auc, abs=1e-12)

    def test_single_class(self):
        """只有一个类别时 ROC 未定义"""
        with pytest.raises(DegenerateInputError):
            roc_curve([0.2, 0.4], [1, 1])
        with pytest.raises(DegenerateInputError):
            auc_pairwise_oracle([0.2, 0.4], [0, 0])

    def test_invalid_inputs(self):
        """长度不一致、空输入、非有限分数"""
        with pytest.raises(DataValidationError):
            roc_curve([0.1, 0.2], [1])
        with pytest.raises(DataValidationError):
            roc_curve([], [])
        with pytest.raises(DataValidationError):
            roc_curve([np.nan, 0.2], [1, 0])

    def test_from_samples(self):
        """ScoredSample 转换"""
        samples = [
            ScoredSample(score=0.9, label=RoiLabel.AD),
            ScoredSample(score=0.3, label=RoiLabel.NORMAL),
        ]
        scores, labels = from_samples(samples)
        np.testing.assert_array_equal(scores, [0.9, 0.3])
        np.testing.assert_array_equal(labels, [True, False])


class TestAccuracy:
    """阈值准确率测试类"""

    def test_threshold_inclusive(self):
        """分数等于阈值判为阳性"""
        assert accuracy_at_threshold([0.5, 0.49, 0.7, 0.2], [1, 0, 0, 0], 0.5) == 0.75

    def test_single_class_allowed(self):
        """准确率在单一类别下仍有定义"""
        assert accuracy_at_threshold([0.1, 0.9], [0, 0]) == 0.5
