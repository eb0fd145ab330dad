"""
清单与样本加载单元测试
"""

import numpy as np
import pandas as pd
import pytest

from adcad.algorithms.augment import GeometricTransform, apply_geometric, area_mean_downscale, enumerate_plan
from adcad.services.dataset import (
    ArrayDataset, expand_manifest, load_split, plan_position, read_manifest, read_pgm,
    validate_manifest, write_manifest
)
from adcad.tests.fixtures.images import write_roi_workspace
from adcad.utils.exceptions import DataValidationError, ShapeError


class TestManifest:
    """清单测试类"""

    def test_read_written(self, temp_dir):
        """读取合成工作区的原始清单"""
        path = write_roi_workspace(temp_dir, 2, 16, seed=0)
        frame = read_manifest(path)
        assert list(frame.columns) == ['path', 'label', 'split', 'roi_id', 'plan_index']
        assert frame['label'].tolist() == ['ad', 'ad', 'normal', 'normal']
        assert frame['roi_id'].tolist() == [0, 1, 2, 3]
        assert (frame['plan_index'] == 'original').all()
        assert (frame['split'] == "").all()

    def test_plan_position(self):
        """original 与计划下标"""
        assert plan_position('original') is None
        assert plan_position('17') == 17

    def test_bad_header(self):
        """表头错误"""
        with pytest.raises(DataValidationError):
            validate_manifest(pd.DataFrame({'path': ['a'], 'label': ['ad']}))

    def test_bad_values(self):
        """非法类别、划分、编号与计划下标"""
        frame = pd.DataFrame({
            'path': ['a.pgm', 'b.pgm', 'c.pgm', 'd.pgm'],
            'label': ['ad', 'tumor', 'normal', 'ad'],
            'split': ['', 'train', 'holdout', 'test'],
            'roi_id': ['0', '1', '2', '-3'],
            'plan_index': ['original', '36', '0', '5'],
        })
        with pytest.raises(DataValidationError) as excinfo:
            validate_manifest(frame)
        fields = {error['field'] for error in excinfo.value.validation_errors}
        assert fields == {'label', 'split', 'roi_id', 'plan_index'}

    def test_expand(self, temp_dir):
        """每个原始 ROI 展开为 36 行"""
        frame = read_manifest(write_roi_workspace(temp_dir, 2, 16, seed=0))
        expanded = expand_manifest(frame, enumerate_plan())
        assert len(expanded) == 144
        assert expanded['plan_index'].tolist()[:36] == [str(i) for i in range(36)]
        assert expanded['roi_id'].tolist()[35:37] == [0, 1]
        assert expanded['label'].value_counts().to_dict() == {'ad': 72, 'normal': 72}

    def test_expand_twice(self, temp_dir):
        """已展开的清单不能再次展开"""
        frame = read_manifest(write_roi_workspace(temp_dir, 1, 16, seed=0))
        expanded = expand_manifest(frame, enumerate_plan())
        with pytest.raises(DataValidationError):
            expand_manifest(expanded, enumerate_plan())

    def test_write_read_identity(self, temp_dir):
        """写出后再读取内容不变"""
        frame = read_manifest(write_roi_workspace(temp_dir, 1, 16, seed=0))
        expanded = expand_manifest(frame, enumerate_plan())
        path = write_manifest(expanded, temp_dir / "expanded.csv")
        pd.testing.assert_frame_equal(read_manifest(path), expanded, check_dtype=False)


class TestLoader:
    """样本加载测试类"""

    def test_batch_standardized(self, temp_dir):
        """批次形状、标签与标准化"""
        path = write_roi_workspace(temp_dir, 2, 16, seed=0)
        samples = load_split(read_manifest(path), None, temp_dir, 16, seed=0)
        images, labels = samples.batch([0, 1, 2, 3])
        assert images.shape == (4, 16, 16)
        np.testing.assert_array_equal(labels, [1, 1, 0, 0])
        np.testing.assert_allclose(images.mean(axis=(1, 2)), 0.0, atol=1e-12)
        np.testing.assert_allclose(images.std(axis=(1, 2)), 1.0, atol=1e-12)

    def test_downscale_on_load(self, temp_dir):
        """ROI 大于网络输入时面积均值下采样"""
        path = write_roi_workspace(temp_dir, 1, 32, seed=0)
        frame = read_manifest(path)
        samples = load_split(frame, None, temp_dir, 16, seed=0)
        expected = area_mean_downscale(read_pgm(temp_dir / frame.loc[0, 'path']), 16)
        np.testing.assert_array_equal(samples.raw_image(0), expected)

    def test_plan_applied_lazily(self, temp_dir):
        """读取时按计划项变换"""
        frame = read_manifest(write_roi_workspace(temp_dir, 1, 16, seed=0))
        expanded = expand_manifest(frame, enumerate_plan())
        samples = load_split(expanded, None, temp_dir, 16, seed=0)
        source = samples.raw_image(0)
        # 下标 4 为 (flipH, 方差 0)
        np.testing.assert_array_equal(samples.raw_image(4), apply_geometric(source, GeometricTransform.FLIP_H))
        noisy = samples.raw_image(1)
        assert not np.array_equal(noisy, source)
        np.testing.assert_array_equal(noisy, samples.raw_image(1))

    def test_empty_split(self, temp_dir):
        """划分为空"""
        frame = read_manifest(write_roi_workspace(temp_dir, 1, 16, seed=0))
        with pytest.raises(DataValidationError):
            load_split(frame, 'train', temp_dir, 16, seed=0)

    def test_not_multiple_of_input(self, temp_dir):
        """ROI 不是网络输入的整数倍"""
        frame = read_manifest(write_roi_workspace(temp_dir, 1, 24, seed=0))
        samples = load_split(frame, None, temp_dir, 16, seed=0)
        with pytest.raises(ShapeError):
            samples.batch([0])

    def test_array_dataset(self):
        """内存样本集合"""
        dataset = ArrayDataset(np.zeros((3, 4, 4)), np.array([1, 0, 1]))
        images, labels = dataset.batch([2, 0])
        assert len(dataset) == 3
        assert images.shape == (2, 4, 4)
        np.testing.assert_array_equal(labels, [1, 1])
        with pytest.raises(ShapeError):
            ArrayDataset(np.zeros((3, 4, 4)), np.array([1, 0]))
