"""
全片扫描单元测试
"""

import numpy as np
import pandas as pd
import pytest

from adcad.algorithms.augment import area_mean_downscale, zscore_standardize
from adcad.algorithms.segmentation import segment_breast
from adcad.models.dataset import RoiLabel
from adcad.models.image import AdMark, ExamImage
from adcad.models.scan import ScanGrid
from adcad.services.dataset import breast_mask, crop_roi, read_pgm, synth_exam
from adcad.services.scanner import (
    SCORING_CHUNK, best_exam, extract_grid, label_roi, max_heatmap, scan_exam,
    summary_frame, write_scan_artifacts, write_summary
)
from adcad.tests.fixtures.images import PeakScorer, two_region_image
from adcad.tests.utils import brute_force_grid, brute_force_heatmap
from adcad.utils.exceptions import RoiSizeError, ShapeError


class TestGrid:
    """扫描网格测试类"""

    def test_full_mask_count(self):
        """512x512 全前景、窗口 256、步长 128 得到 9 个窗口"""
        centers = extract_grid(np.ones((512, 512), dtype=bool), ScanGrid(roi_size=256, stride=128))
        assert len(centers) == 9
        assert centers[0].tolist() == [128, 128]
        assert centers[1].tolist() == [128, 256]
        assert centers[-1].tolist() == [384, 384]

    def test_matches_brute_force(self):
        """与逐窗口统计一致"""
        rng = np.random.default_rng(0)
        for _ in range(20):
            mask = rng.random((int(rng.integers(20, 60)), int(rng.integers(20, 60)))) < rng.random()
            size = int(rng.integers(4, 20))
            grid = ScanGrid(roi_size=size, stride=int(rng.integers(1, size + 1)),
                            coverage_min=float(rng.uniform(0.05, 1.0)))
            expected = brute_force_grid(mask, grid.roi_size, grid.stride, grid.coverage_min)
            assert [tuple(c) for c in extract_grid(mask, grid).tolist()] == expected

    def test_window_larger_than_image(self):
        """窗口大于图像"""
        with pytest.raises(RoiSizeError):
            extract_grid(np.ones((16, 16), dtype=bool), ScanGrid(roi_size=32, stride=16))

    def test_stride_larger_than_window(self):
        """步长不能大于窗口"""
        with pytest.raises(ValueError):
            ScanGrid(roi_size=16, stride=32)

    @pytest.mark.slow
    def test_full_size_exam_count(self):
        """全尺寸检查（步长 64、乳腺掩膜）的窗口数量级"""
        centers = extract_grid(breast_mask((4096, 3328)), ScanGrid(roi_size=256, stride=64))
        assert 1500 <= len(centers) <= 6000


class TestLabelAndHeatmap:
    """标注与热力图测试类"""

    def test_boundary_sweep(self):
        """逐像素扫过窗口边界，闭区间包含"""
        top, left, size = 10, 20, 8
        bounds = (top, left, top + size - 1, left + size - 1)
        for row in range(0, 30):
            for col in range(10, 40):
                inside = top <= row <= top + size - 1 and left <= col <= left + size - 1
                expected = RoiLabel.AD if inside else RoiLabel.NORMAL
                assert label_roi(bounds, [AdMark(row=row, col=col)]) is expected

    def test_any_mark(self):
        """任一标记在窗口内即为 AD"""
        marks = [AdMark(row=0, col=0), AdMark(row=5, col=5)]
        assert label_roi((4, 4, 7, 7), marks) is RoiLabel.AD
        assert label_roi((4, 4, 7, 7), []) is RoiLabel.NORMAL

    def test_heatmap_matches_brute_force(self):
        """与逐像素枚举一致"""
        centers = np.array([[5, 5], [10, 12], [14, 18]])
        scores = np.array([0.2, 0.9, 0.5])
        heatmap = max_heatmap((20, 24), centers, 8, scores)
        np.testing.assert_array_equal(heatmap, brute_force_heatmap((20, 24), centers.tolist(), 8, scores))
        assert heatmap[0, 0] == 0.0
        assert heatmap[1, 1] == 0.2
        assert heatmap[10, 14] == 0.9


class TestScanExam:
    """单次检查扫描测试类"""

    def setup_method(self):
        """测试前准备"""
        self.exam = synth_exam(128, seed=0, roi_size=32, input_size=16)
        self.grid = ScanGrid(roi_size=32, stride=16, coverage_min=0.5)

    def test_windows_scores_and_labels(self):
        """窗口位置、分数、标签与热力图"""
        scorer = PeakScorer(16)
        result = scan_exam(scorer, self.exam, self.grid)

        mask = segment_breast(self.exam.pixels)
        expected_centers = brute_force_grid(mask, 32, 16, 0.5)
        assert [(roi.row, roi.col) for roi in result.rois] == expected_centers
        assert result.n_rois > 0
        assert sum(scorer.calls) == result.n_rois

        first = result.rois[0]
        window = zscore_standardize(area_mean_downscale(crop_roi(self.exam.pixels, (first.row, first.col), 32), 16))
        assert first.score == pytest.approx(1.0 / (1.0 + np.exp(-window.max())), abs=1e-15)

        mark = self.exam.marks[0]
        for roi in result.rois:
            inside = roi.row - 16 <= mark.row <= roi.row + 15 and roi.col - 16 <= mark.col <= roi.col + 15
            assert (roi.label is RoiLabel.AD) == inside

        scores = [roi.score for roi in result.rois]
        np.testing.assert_array_equal(
            result.heatmap, brute_force_heatmap((128, 128), expected_centers, 32, scores)
        )
        single_class = result.n_positive in (0, result.n_rois)
        assert (result.auc is None) == single_class

    def test_chunked_scoring(self):
        """按块打分，每块不超过上限"""
        scorer = PeakScorer(16)
        result = scan_exam(scorer, self.exam, ScanGrid(roi_size=32, stride=4, coverage_min=0.5))
        assert result.n_rois > SCORING_CHUNK
        assert all(calls <= SCORING_CHUNK for calls in scorer.calls)
        assert len(scorer.calls) == -(-result.n_rois // SCORING_CHUNK)

    def test_no_marks(self):
        """没有标记时 ROC 未定义"""
        exam = ExamImage(exam_id="plain", pixels=two_region_image((64, 64)))
        result = scan_exam(PeakScorer(16), exam, ScanGrid(roi_size=16, stride=16, coverage_min=0.5))
        assert result.n_rois == 8
        assert result.n_positive == 0
        assert result.roc is None and result.auc is None

    def test_roi_not_multiple_of_input(self):
        """窗口不是网络输入的整数倍"""
        with pytest.raises(ShapeError):
            scan_exam(PeakScorer(16), self.exam, ScanGrid(roi_size=24, stride=8))


class TestReport:
    """扫描结果输出测试类"""

    def setup_method(self):
        """测试前准备"""
        exam = synth_exam(128, seed=1, roi_size=32, input_size=16)
        self.result = scan_exam(PeakScorer(16), exam, ScanGrid(roi_size=32, stride=16, coverage_min=0.5))
        plain = ExamImage(exam_id="plain", pixels=two_region_image((64, 64)))
        self.plain = scan_exam(PeakScorer(16), plain, ScanGrid(roi_size=16, stride=16, coverage_min=0.5))

    def test_artifacts(self, temp_dir):
        """ROI 表与热力图"""
        paths = write_scan_artifacts(self.result, temp_dir)
        frame = pd.read_csv(paths['rois'])
        assert list(frame.columns) == ['row', 'col', 'score', 'label']
        assert len(frame) == self.result.n_rois
        np.testing.assert_array_equal(frame['score'].to_numpy(), [roi.score for roi in self.result.rois])
        heatmap = read_pgm(paths['heatmap'])
        np.testing.assert_allclose(heatmap, self.result.heatmap, atol=0.5 / 65535)
        assert (temp_dir / "exam_0_roc.csv").exists() == (self.result.roc is not None)

    def test_summary(self, temp_dir):
        """汇总表中未定义的 AUC 写为 NA"""
        frame = summary_frame([self.result, self.plain])
        assert frame['exam_id'].tolist() == ['exam_0', 'plain']
        assert frame.loc[1, 'auc'] == 'NA'
        path = write_summary([self.result, self.plain], temp_dir / "summary.csv")
        assert path.read_text(encoding="utf-8").splitlines()[0] == "exam_id,n_rois,n_positive,auc,accuracy"

    def test_best_exam(self):
        """只在 ROC 有定义的检查中取最大 AUC"""
        assert best_exam([self.plain]) is None
        best = best_exam([self.plain, self.result])
        assert best is (self.result if self.result.auc is not None else None)
