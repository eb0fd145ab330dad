"""
流水线服务 - 命令编排
合成 → 增强 → 划分 → 训练 → 评估 → 扫描，以及梯度检查；所有随机性由 RunConfig.seed 决定
"""

import logging
from pathlib import Path
from typing import List, Optional, Sequence, Union

import numpy as np
import pandas as pd

from ..algorithms.augment import enumerate_plan, zscore_standardize
from ..algorithms.metrics import accuracy_at_threshold, auc_pairwise_oracle, auc_trapezoid, roc_curve
from ..algorithms.tensor import GradientCheckResult, gradient_check
from ..config.constants import DatasetConstants
from ..config.validation import RunConfig
from ..models.dataset import RoiLabel
from ..models.evaluation import EvaluationMetrics
from ..models.image import ExamImage
from ..models.network import NetworkConfig
from ..models.scan import ScanResult
from ..utils.decorators import performance_monitor
from ..utils.exceptions import DataValidationError
from .dataset import (
    assign_splits, expand_manifest, extract_roi_pairs, load_split, read_exam,
    read_manifest, synth_exam, synth_generate, synth_samples, write_exam,
    write_manifest, write_pgm
)
from .model import ConvNet, Trainer, build_network, load_checkpoint, save_checkpoint
from .scanner import best_exam, scan_exam, write_scan_artifacts, write_summary

logger = logging.getLogger(__name__)

CSV_OPTIONS = {'index': False, 'encoding': 'utf-8', 'lineterminator': '\n'}


class Pipeline:
    """按 RunConfig 执行各个子命令，文件均位于工作目录下"""

    def __init__(self, config: RunConfig):
        """
        Args:
            config: 已校验的运行配置
        """
        self.config = config
        self.paths = config.paths
        self.workdir = self.paths.resolve('workdir')

    @property
    def manifest_path(self) -> Path:
        return self.paths.resolve('manifest')

    @property
    def checkpoint_path(self) -> Path:
        return self.paths.resolve('checkpoint')

    def _relative(self, path: Path) -> str:
        """清单中记录相对清单所在目录的路径"""
        return path.relative_to(self.manifest_path.parent).as_posix()

    def _write_rois(self, rois: Sequence[tuple]) -> pd.DataFrame:
        """写出 (标签, 像素) 序列并生成原始清单，roi_id 按顺序编号"""
        rois_dir = self.paths.resolve('rois_dir')
        rows = []
        for roi_id, (label, pixels) in enumerate(rois):
            path = write_pgm(pixels, rois_dir / f"{label.value}_{roi_id:05d}.pgm")
            rows.append({
                'path': self._relative(path),
                'label': label.value,
                'split': "",
                'roi_id': roi_id,
                'plan_index': DatasetConstants.PROVENANCE_ORIGINAL,
            })
        return pd.DataFrame(rows, columns=list(DatasetConstants.MANIFEST_COLUMNS))

    def synth(self) -> Path:
        """
        生成合成 ROI 数据集与清单

        Returns:
            清单路径
        """
        synth = self.config.synth
        n_normal = synth.count // 2
        n_ad = synth.count - n_normal
        rois = [(RoiLabel.AD, image) for image in synth_generate(n_ad, RoiLabel.AD, synth.roi_size, self.config.seed)]
        rois += [
            (RoiLabel.NORMAL, image)
            for image in synth_generate(n_normal, RoiLabel.NORMAL, synth.roi_size, self.config.seed)
        ]
        frame = self._write_rois(rois)
        path = write_manifest(frame, self.manifest_path)
        logger.info(f"合成数据集完成: 结构扭曲 {n_ad}，正常 {n_normal}，清单 {path}")
        return path

    def ingest(self, exam_paths: Sequence[Union[str, Path]]) -> Path:
        """
        从带标记的检查中裁剪 ROI（每个标记一对 AD/正常）并生成清单

        Args:
            exam_paths: PGM 检查文件

        Returns:
            清单路径
        """
        if not exam_paths:
            raise DataValidationError("ingest 需要至少一个检查文件")
        rois = []
        for path in exam_paths:
            exam = read_exam(path)
            if not exam.marks:
                logger.warning(f"检查 {exam.exam_id} 没有标记，跳过")
                continue
            pairs = extract_roi_pairs(exam, self.config.synth.roi_size, self.config.seed)
            rois.extend((record.label, pixels) for record, pixels in pairs)
        if not rois:
            raise DataValidationError("所有检查均无标记，没有可提取的 ROI")
        path = write_manifest(self._write_rois(rois), self.manifest_path)
        logger.info(f"导入完成: {len(exam_paths)} 个检查，ROI {len(rois)} 个，清单 {path}")
        return path

    @performance_monitor
    def augment(self) -> Path:
        """把清单中每个原始 ROI 展开为 36 个增强样本（惰性，图像在读取时生成）"""
        frame = read_manifest(self.manifest_path)
        expanded = expand_manifest(frame, enumerate_plan())
        return write_manifest(expanded, self.manifest_path)

    def split(self) -> Path:
        """为清单分配 train/val/test"""
        frame = read_manifest(self.manifest_path)
        split = self.config.split
        assigned = assign_splits(frame, split.to_ratios(), self.config.seed, split.mode)
        return write_manifest(assigned, self.manifest_path)

    def _load(self, frame: pd.DataFrame, split: Optional[str], input_size: int):
        return load_split(frame, split, self.manifest_path.parent, input_size, self.config.noise_seed)

    @performance_monitor
    def train(self) -> Path:
        """
        训练网络并保存检查点与训练历史

        Returns:
            检查点路径
        """
        frame = read_manifest(self.manifest_path)
        if (frame['split'] == "").any():
            raise DataValidationError("清单尚未划分，请先运行 split")

        network_config = self.config.network.to_network_config()
        train_set = self._load(frame, DatasetConstants.SPLIT_TRAIN, network_config.input_size)
        val_set = self._load(frame, DatasetConstants.SPLIT_VAL, network_config.input_size)

        network = build_network(network_config, self.config.seed)
        trained, history = Trainer(self.config.training_config()).train(network, train_set, val_set)

        checkpoint = save_checkpoint(trained, self.checkpoint_path)
        history_path = self.paths.resolve('history')
        history_path.parent.mkdir(parents=True, exist_ok=True)
        history.to_frame().to_csv(history_path, float_format='%.17g', **CSV_OPTIONS)
        logger.info(
            f"训练完成: 最佳轮次 {trained.metadata.epoch}，验证损失 {trained.metadata.val_cost}，"
            f"训练历史 {history_path}"
        )
        return checkpoint

    @staticmethod
    def _score(network: ConvNet, samples, batch_size: int) -> np.ndarray:
        scores = []
        for start in range(0, len(samples), batch_size):
            images, _ = samples.batch(np.arange(start, min(start + batch_size, len(samples))))
            scores.append(network.predict_scores(images))
        return np.concatenate(scores)

    def evaluate(self, split: Optional[str] = None) -> EvaluationMetrics:
        """
        在某个划分上计算 ROC、AUC 与准确率

        Args:
            split: 划分名称，默认使用 eval.split

        Returns:
            EvaluationMetrics
        """
        split = split or self.config.eval.split.value
        threshold = self.config.eval.threshold
        network = load_checkpoint(self.checkpoint_path)
        frame = read_manifest(self.manifest_path)
        samples = self._load(frame, split, network.config.input_size)

        scores = self._score(network, samples, self.config.train.batch_size)
        labels = samples.labels
        curve = roc_curve(scores, labels)
        auc = auc_trapezoid(curve)
        auc_pairwise = auc_pairwise_oracle(scores, labels)
        accuracy = accuracy_at_threshold(scores, labels, threshold)
        if abs(auc - auc_pairwise) > 1e-9:
            logger.warning(f"两种 AUC 定义不一致: 梯形 {auc:.12f}，成对 {auc_pairwise:.12f}")
        else:
            logger.info(f"AUC 一致性检查通过: 梯形 {auc:.12f}，成对 {auc_pairwise:.12f}")

        roc_path = self.workdir / f"roc_{split}.csv"
        curve.to_frame().to_csv(roc_path, float_format='%.17g', **CSV_OPTIONS)
        scores_path = self.workdir / f"scores_{split}.csv"
        scored = samples.frame[['path', 'plan_index', 'label']].copy()
        scored['score'] = scores
        scored.to_csv(scores_path, float_format='%.17g', **CSV_OPTIONS)
        logger.info(f"评估结果已写出: {roc_path}, {scores_path}")

        return EvaluationMetrics(
            split=split,
            n_samples=len(samples),
            n_positive=int(labels.sum()),
            auc=auc,
            auc_pairwise=auc_pairwise,
            accuracy=accuracy,
            threshold=threshold,
        )

    def _synthetic_exams(self, input_size: int) -> List[ExamImage]:
        """未给出检查文件时合成检查，写入 exams_dir 后重新读取，与直接扫描文件的结果一致"""
        synth = self.config.synth
        exams_dir = self.paths.resolve('exams_dir')
        exams = []
        for index in range(synth.exam_count):
            exam = synth_exam(
                synth.exam_size, self.config.seed, self.config.scan.roi_size, input_size,
                exam_id=f"exam_{index}", index=index
            )
            path = write_exam(exam, exams_dir)
            logger.info(f"合成检查已写出: {path}")
            exams.append(read_exam(path))
        return exams

    @performance_monitor
    def scan(self, exam_paths: Sequence[Union[str, Path]] = ()) -> List[ScanResult]:
        """
        全片扫描：逐检查输出 ROI 分数表、热力图，并写出汇总

        Args:
            exam_paths: 检查文件；为空时按 synth 配置合成

        Returns:
            各检查的扫描结果
        """
        network = load_checkpoint(self.checkpoint_path)
        input_size = network.config.input_size
        exams = [read_exam(path) for path in exam_paths] or self._synthetic_exams(input_size)

        grid = self.config.scan.to_grid()
        scan_dir = self.paths.resolve('scan_dir')
        results = []
        for exam in exams:
            result = scan_exam(network, exam, grid, self.config.scan.threshold, input_size)
            write_scan_artifacts(result, scan_dir)
            best = result.best_roi()
            if best is not None:
                logger.info(f"检查 {exam.exam_id} 最高分窗口: ({best.row}, {best.col}) 分数 {best.score:.6f}")
            results.append(result)

        write_summary(results, self.paths.resolve('scan_summary'))
        top = best_exam(results)
        if top is None:
            logger.warning("所有检查的 ROC 均未定义")
        else:
            logger.info(f"最佳检查: {top.exam_id}，AUC {top.auc:.6f}，准确率 {top.accuracy:.6f}")
        return results

    @performance_monitor
    def gradcheck(self) -> GradientCheckResult:
        """
        在合成小批上对整网做有限差分梯度检查

        Returns:
            GradientCheckResult
        """
        cfg = self.config.gradcheck
        network_config = NetworkConfig(
            input_size=cfg.input_size,
            kernel_size=self.config.network.kernel_size,
            base_filters=cfg.base_filters,
            target_map=self.config.network.target_map,
        )
        network = build_network(network_config, self.config.seed)

        n_ad = (cfg.batch + 1) // 2
        images = [image for image, _ in synth_samples(n_ad, RoiLabel.AD, cfg.input_size, self.config.seed)]
        images += [
            image for image, _ in synth_samples(cfg.batch - n_ad, RoiLabel.NORMAL, cfg.input_size, self.config.seed)
        ]
        batch = np.stack([zscore_standardize(image) for image in images])
        labels = np.array([1] * n_ad + [0] * (cfg.batch - n_ad), dtype=np.int64)

        total = sum(p.size for p in network.parameters())
        coordinates = cfg.coordinates if cfg.coordinates < total else None
        result = gradient_check(
            network, batch, labels,
            epsilon=cfg.epsilon, floor=cfg.floor, max_coordinates=coordinates, seed=self.config.seed
        )
        message = (
            f"梯度检查: 最大相对误差 {result.max_relative_error:.3e}，检查 {result.checked} 个坐标，"
            f"跳过 {result.skipped} 个（参数总数 {total}）"
        )
        if result.max_relative_error > cfg.tolerance:
            logger.warning(f"{message}，超过阈值 {cfg.tolerance}")
        else:
            logger.info(message)
        return result

