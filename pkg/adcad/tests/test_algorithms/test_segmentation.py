"""
乳腺分割单元测试
"""

import numpy as np
import pytest

from adcad.algorithms.segmentation import segment_breast
from adcad.tests.fixtures.images import blob_image, two_region_image
from adcad.utils.exceptions import DataValidationError, SegmentationError


class TestSegmentBreast:
    """乳腺分割测试类"""

    def test_two_halves(self):
        """亮的右半部分为前景"""
        mask = segment_breast(two_region_image())
        assert mask.dtype == bool
        assert mask[:, 64:].all()
        assert not mask[:, :64].any()

    def test_keeps_largest_component(self):
        """只保留面积最大的分量"""
        mask = segment_breast(blob_image())
        assert mask.sum() == 128
        assert mask[40:56, 40:48].all()
        assert not mask[4:12, 4:12].any()

    def test_diagonal_not_connected(self):
        """对角相邻不算连通"""
        image = np.zeros((8, 8))
        image[2, 2] = image[3, 3] = 1.0
        image[5:7, 5:7] = 1.0
        mask = segment_breast(image)
        assert mask.sum() == 4
        assert mask[5:7, 5:7].all()

    def test_constant_image(self):
        """常数图像无法分割"""
        with pytest.raises(SegmentationError):
            segment_breast(np.full((16, 16), 0.4))

    def test_out_of_range(self):
        """像素超出 [0,1]"""
        with pytest.raises(DataValidationError):
            segment_breast(np.full((4, 4), 2.0))
