"""
工具函数模块
提供异常体系、日志配置、装饰器与资源监控
"""

from .exceptions import (
    ADCADException, DataValidationError, ShapeError, ConfigurationError,
    RoiSizeError, PlacementError, ImageFormatError, CheckpointFormatError,
    TrainingDivergenceError, SegmentationError, DegenerateInputError,
    UsageError, ExceptionHandler
)

from .decorators import performance_monitor

from .performance import ResourceMonitor

from .logging_config import (
    LogManager, StructuredLogger, JSONFormatter, log_manager,
    get_logger, configure_logging
)

__all__ = [
    # 异常处理
    'ADCADException',
    'DataValidationError',
    'ShapeError',
    'ConfigurationError',
    'RoiSizeError',
    'PlacementError',
    'ImageFormatError',
    'CheckpointFormatError',
    'TrainingDivergenceError',
    'SegmentationError',
    'DegenerateInputError',
    'UsageError',
    'ExceptionHandler',

    # 装饰器
    'performance_monitor',

    # 性能监控
    'ResourceMonitor',

    # 日志配置
    'LogManager',
    'StructuredLogger',
    'JSONFormatter',
    'log_manager',
    'get_logger',
    'configure_logging',
]
