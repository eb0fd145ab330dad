"""
训练器
小批量动量 SGD、逐轮验证与基于验证损失的早停
"""

import logging
import math
from typing import List, Optional, Tuple

import numpy as np

from ...algorithms.metrics import accuracy_at_threshold
from ...algorithms.tensor import sgd_update, softmax_cross_entropy, softmax_probabilities
from ...models.network import CheckpointMeta, EpochRecord, TrainingConfig, TrainingHistory
from ...utils.decorators import performance_monitor
from ...utils.exceptions import DataValidationError, TrainingDivergenceError
from ...utils.performance import ResourceMonitor
from ..dataset.loader import SampleSet
from .network import ConvNet

logger = logging.getLogger(__name__)


class Trainer:
    """网络训练器"""

    def __init__(self, config: TrainingConfig, monitor: Optional[ResourceMonitor] = None):
        """
        Args:
            config: 训练配置
            monitor: 资源监控器（每轮记录内存占用）
        """
        self.config = config
        self.monitor = monitor or ResourceMonitor()

    def evaluate(self, network: ConvNet, samples: SampleSet) -> Tuple[float, float]:
        """
        计算样本集的平均交叉熵与 0.5 阈值准确率

        Returns:
            (cost, accuracy)
        """
        total = 0.0
        scores: List[np.ndarray] = []
        for start in range(0, len(samples), self.config.batch_size):
            indices = np.arange(start, min(start + self.config.batch_size, len(samples)))
            images, labels = samples.batch(indices)
            logits = network.logits(images)
            loss, _ = softmax_cross_entropy(logits, labels)
            total += loss * len(indices)
            scores.append(softmax_probabilities(logits)[:, 1])
        cost = total / len(samples)
        accuracy = accuracy_at_threshold(np.concatenate(scores), samples.labels)
        return cost, accuracy

    @performance_monitor
    def train(
        self,
        network: ConvNet,
        train_set: SampleSet,
        val_set: SampleSet
    ) -> Tuple[ConvNet, TrainingHistory]:
        """
        训练网络

        Args:
            network: 初始网络（不被修改）
            train_set: 训练样本
            val_set: 验证样本

        Returns:
            (验证损失最小轮次的网络, 训练历史)
        """
        if len(train_set) == 0 or len(val_set) == 0:
            raise DataValidationError(
                f"训练集与验证集不能为空（训练 {len(train_set)}，验证 {len(val_set)}）"
            )

        cfg = self.config
        rng = np.random.default_rng(cfg.seed)
        model = network.copy()
        velocity = [np.zeros_like(p) for p in model.parameters()]
        history = TrainingHistory()
        best_params: Optional[List[np.ndarray]] = None
        best_cost = math.inf
        best_epoch = 0
        stale = 0

        logger.info(
            f"开始训练: 训练 {len(train_set)}，验证 {len(val_set)}，批大小 {cfg.batch_size}，"
            f"学习率 {cfg.learning_rate}，动量 {cfg.momentum}，最多 {cfg.max_epochs} 轮"
        )

        for epoch in range(1, cfg.max_epochs + 1):
            order = rng.permutation(len(train_set))
            total = 0.0
            for batch_index, start in enumerate(range(0, len(order), cfg.batch_size)):
                indices = order[start:start + cfg.batch_size]
                images, labels = train_set.batch(indices)
                loss, grads = model.loss_and_gradients(images, labels)
                if not math.isfinite(loss):
                    logger.error(f"训练发散: 第 {epoch} 轮第 {batch_index} 批损失为 {loss}")
                    raise TrainingDivergenceError(
                        f"第 {epoch} 轮第 {batch_index} 批损失非有限值: {loss}",
                        epoch=epoch, batch=batch_index
                    )
                params, velocity = sgd_update(
                    model.parameters(), grads, velocity, cfg.learning_rate, cfg.momentum
                )
                model.set_parameters(params)
                total += loss * len(indices)

            train_cost = total / len(train_set)
            val_cost, val_acc = self.evaluate(model, val_set)
            history.epochs.append(EpochRecord(
                epoch=epoch, train_cost=train_cost, val_cost=val_cost, val_acc=val_acc
            ))
            usage = self.monitor.snapshot()
            logger.info(
                f"第 {epoch} 轮: 训练损失 {train_cost:.6f}，验证损失 {val_cost:.6f}，"
                f"验证准确率 {val_acc:.4f}，内存 {usage['rss_mb']:.1f}MB"
            )

            if val_cost < best_cost:
                best_cost, best_epoch, stale = val_cost, epoch, 0
                best_params = [p.copy() for p in model.parameters()]
            else:
                stale += 1
                if stale >= cfg.patience:
                    logger.info(f"验证损失连续 {stale} 轮未改善，第 {epoch} 轮早停")
                    break

        # 首轮验证损失非有限时保留最后一轮参数
        if best_params is None:
            best_params = [p.copy() for p in model.parameters()]
            best_epoch = len(history.epochs)
            best_cost = history.epochs[-1].val_cost

        trained = ConvNet(
            network.config, best_params,
            CheckpointMeta(epoch=best_epoch, val_cost=best_cost)
        )
        logger.info(f"训练结束: 最佳轮次 {best_epoch}，验证损失 {best_cost:.6f}")
        return trained, history
