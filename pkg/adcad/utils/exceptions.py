"""
自定义异常体系
定义结构扭曲检测流水线的异常类和错误处理机制
"""

from typing import Optional, Dict, Any, List, Sequence
from ..config.constants import ErrorConstants, ExitCodes


class ADCADException(Exception):
    """流水线基础异常"""

    def __init__(
        self,
        message: str,
        error_code: int = ErrorConstants.UNKNOWN_ERROR,
        detail: Optional[str] = None,
        context: Optional[Dict[str, Any]] = None
    ):
        super().__init__(message)
        self.error_code = error_code
        self.message = message
        self.detail = detail
        self.context = context or {}

    def to_dict(self) -> Dict[str, Any]:
        """转换为字典格式"""
        return {
            'error_code': self.error_code,
            'message': self.message,
            'detail': self.detail,
            'context': self.context
        }


class DataValidationError(ADCADException):
    """数据验证异常（空类别、空划分、像素越界等）"""

    def __init__(
        self,
        message: str,
        validation_errors: Optional[List[Dict[str, Any]]] = None,
        **kwargs
    ):
        super().__init__(
            message,
            error_code=ErrorConstants.DATA_VALIDATION_ERROR,
            **kwargs
        )
        self.validation_errors = validation_errors or []

    def to_dict(self) -> Dict[str, Any]:
        """转换为字典格式"""
        result = super().to_dict()
        result['validation_errors'] = self.validation_errors
        return result


class ShapeError(ADCADException):
    """张量形状不匹配异常"""

    def __init__(
        self,
        message: str,
        expected: Optional[Sequence[int]] = None,
        actual: Optional[Sequence[int]] = None,
        **kwargs
    ):
        super().__init__(message, error_code=ErrorConstants.SHAPE_ERROR, **kwargs)
        self.expected = tuple(expected) if expected is not None else None
        self.actual = tuple(actual) if actual is not None else None


class ConfigurationError(ADCADException):
    """配置异常"""

    def __init__(
        self,
        message: str,
        config_key: Optional[str] = None,
        config_value: Optional[Any] = None,
        **kwargs
    ):
        super().__init__(
            message,
            error_code=ErrorConstants.CONFIGURATION_ERROR,
            **kwargs
        )
        self.config_key = config_key
        self.config_value = config_value

    def to_dict(self) -> Dict[str, Any]:
        """转换为字典格式"""
        result = super().to_dict()
        result['config_key'] = self.config_key
        return result


class RoiSizeError(ADCADException):
    """ROI 尺寸超出图像范围异常"""

    def __init__(self, message: str, size: Optional[int] = None, **kwargs):
        super().__init__(message, error_code=ErrorConstants.ROI_SIZE_ERROR, **kwargs)
        self.size = size


class PlacementError(ADCADException):
    """正常 ROI 无法在抽样预算内放置"""

    def __init__(self, message: str, draws: Optional[int] = None, **kwargs):
        super().__init__(message, error_code=ErrorConstants.PLACEMENT_ERROR, **kwargs)
        self.draws = draws


class ImageFormatError(ADCADException):
    """PGM 图像格式异常"""

    def __init__(self, message: str, byte_offset: Optional[int] = None, **kwargs):
        super().__init__(message, error_code=ErrorConstants.IMAGE_FORMAT_ERROR, **kwargs)
        self.byte_offset = byte_offset


class CheckpointFormatError(ADCADException):
    """模型检查点格式异常"""

    def __init__(self, message: str, byte_offset: Optional[int] = None, **kwargs):
        super().__init__(message, error_code=ErrorConstants.CHECKPOINT_FORMAT_ERROR, **kwargs)
        self.byte_offset = byte_offset


class TrainingDivergenceError(ADCADException):
    """训练发散（损失非有限值）异常"""

    def __init__(self, message: str, epoch: int, batch: int, **kwargs):
        super().__init__(message, error_code=ErrorConstants.TRAINING_DIVERGENCE, **kwargs)
        self.epoch = epoch
        self.batch = batch


class SegmentationError(ADCADException):
    """乳腺区域分割失败异常"""

    def __init__(self, message: str, **kwargs):
        super().__init__(message, error_code=ErrorConstants.SEGMENTATION_ERROR, **kwargs)


class DegenerateInputError(ADCADException):
    """单一类别输入导致 ROC 未定义"""

    def __init__(self, message: str, positives: int = 0, negatives: int = 0, **kwargs):
        super().__init__(message, error_code=ErrorConstants.DEGENERATE_INPUT, **kwargs)
        self.positives = positives
        self.negatives = negatives


class UsageError(ADCADException):
    """命令行用法错误"""

    def __init__(self, message: str, **kwargs):
        super().__init__(message, error_code=ErrorConstants.USAGE_ERROR, **kwargs)


class ExceptionHandler:
    """异常处理器"""

    # 视为"校验错误"的异常类型，退出码 1
    VALIDATION_TYPES = (ConfigurationError, DataValidationError, UsageError)

    @staticmethod
    def handle_exception(exception: Exception) -> Dict[str, Any]:
        """处理异常并返回标准格式"""
        if isinstance(exception, ADCADException):
            return exception.to_dict()
        return {
            'error_code': ErrorConstants.UNKNOWN_ERROR,
            'message': str(exception),
            'detail': '系统内部错误',
            'context': {
                'exception_type': type(exception).__name__
            }
        }

    @staticmethod
    def exit_code(exception: Exception) -> int:
        """根据异常类型确定命令行退出码"""
        if isinstance(exception, ExceptionHandler.VALIDATION_TYPES):
            return ExitCodes.VALIDATION_ERROR
        return ExitCodes.RUNTIME_ERROR
