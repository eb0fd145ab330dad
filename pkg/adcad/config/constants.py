"""
系统常量定义
定义流水线中使用的协议参数、错误码和日志常量
"""

from typing import Tuple


class ProtocolConstants:
    """采集与训练协议固定的超参数"""

    # 卷积核尺寸 5x5
    KERNEL_SIZE = 5
    # 最后一层卷积输出 4x4 特征图
    TARGET_MAP = 4
    # 每个训练步的批大小
    BATCH_SIZE = 60
    # 训练/验证/测试划分比例
    SPLIT_RATIOS: Tuple[float, float, float] = (0.70, 0.15, 0.15)
    # 高斯噪声方差（0 表示不加噪声）
    NOISE_VARIANCES: Tuple[float, ...] = (0.0, 0.02, 0.04, 0.06)
    # 临床扫描使用的 ROI 尺寸
    ROI_SIZE = 256
    # 每个 ROI 的增强变体数
    PLAN_LENGTH = 36
    # 二分类
    CLASSES = 2


class DatasetConstants:
    """数据集相关常量"""

    LABEL_AD = 'ad'
    LABEL_NORMAL = 'normal'
    LABELS = (LABEL_AD, LABEL_NORMAL)

    SPLIT_TRAIN = 'train'
    SPLIT_VAL = 'val'
    SPLIT_TEST = 'test'
    SPLITS = (SPLIT_TRAIN, SPLIT_VAL, SPLIT_TEST)

    # 未增强样本的来源标记
    PROVENANCE_ORIGINAL = 'original'

    MANIFEST_COLUMNS = ('path', 'label', 'split', 'roi_id', 'plan_index')

    # 正常 ROI 采样的抽样次数上限与背景亮度阈值
    NORMAL_SAMPLING_MAX_DRAWS = 10_000
    BACKGROUND_MEAN_THRESHOLD = 0.05

    # 合成纹理参数
    SYNTH_BOX_FILTER = 11
    SYNTH_FIELD_RANGE = (0.2, 0.8)
    SYNTH_SPICULE_COUNT = (12, 24)
    SYNTH_SPICULE_GAIN = 0.15


class ScanConstants:
    """全片扫描常量"""

    DEFAULT_STRIDE = 64
    DEFAULT_COVERAGE_MIN = 0.75
    HISTOGRAM_BINS = 256


class ErrorConstants:
    """错误码常量"""

    # 成功
    SUCCESS = 0

    # 通用错误
    UNKNOWN_ERROR = 1000
    INVALID_PARAMETER = 1001
    USAGE_ERROR = 1002

    # 数据相关错误
    DATA_VALIDATION_ERROR = 2001
    ROI_SIZE_ERROR = 2002
    PLACEMENT_ERROR = 2003
    IMAGE_FORMAT_ERROR = 2004

    # 算法相关错误
    SHAPE_ERROR = 3001
    TRAINING_DIVERGENCE = 3002
    SEGMENTATION_ERROR = 3003
    DEGENERATE_INPUT = 3004

    # 模型文件相关错误
    CHECKPOINT_FORMAT_ERROR = 4001

    # 配置相关错误
    CONFIGURATION_ERROR = 5001


class ExitCodes:
    """命令行退出码"""

    SUCCESS = 0
    VALIDATION_ERROR = 1
    RUNTIME_ERROR = 2


class LogConstants:
    """日志常量"""

    STANDARD_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    DETAILED_FORMAT = (
        '%(asctime)s - %(name)s - %(levelname)s - '
        '%(module)s:%(funcName)s:%(lineno)d - %(message)s'
    )
    RUN_LOG_FILE = 'run.log'
    STRUCTURED_LOG_FILE = 'structured.log'
    MAX_BYTES = 10 * 1024 * 1024  # 10MB
    BACKUP_COUNT = 5
    VALID_LEVELS = ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL')
