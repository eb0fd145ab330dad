"""
日志配置模块
提供统一的日志配置和管理功能
"""

import json
import logging
import logging.config
import sys
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Optional, Union

from ..config import get_settings
from ..config.constants import LogConstants


class JSONFormatter(logging.Formatter):
    """JSON日志格式化器"""

    def format(self, record: logging.LogRecord) -> str:
        """格式化日志记录为JSON"""
        log_entry = {
            'timestamp': datetime.fromtimestamp(record.created).isoformat(),
            'level': record.levelname,
            'logger': record.name,
            'module': record.module,
            'function': record.funcName,
            'line': record.lineno,
            'message': record.getMessage(),
            'process': record.process,
        }

        # 添加异常信息
        if record.exc_info:
            log_entry['exception'] = self.formatException(record.exc_info)

        # 添加额外字段
        if hasattr(record, 'extra_fields'):
            log_entry.update(record.extra_fields)

        return json.dumps(log_entry, ensure_ascii=False, default=str)


class StructuredLogger:
    """结构化日志记录器"""

    def __init__(self, name: str):
        self.logger = logging.getLogger(name)
        self.extra_fields: Dict[str, Any] = {}

    def add_field(self, key: str, value: Any) -> 'StructuredLogger':
        """添加额外字段"""
        self.extra_fields[key] = value
        return self

    def _log_with_extra(self, level: int, msg: str, *args, **kwargs):
        """带额外字段的日志记录"""
        if self.extra_fields:
            kwargs.setdefault('extra', {})
            kwargs['extra']['extra_fields'] = self.extra_fields.copy()

        self.logger.log(level, msg, *args, **kwargs)
        self.extra_fields.clear()  # 清除临时字段

    def info(self, msg: str, *args, **kwargs):
        self._log_with_extra(logging.INFO, msg, *args, **kwargs)

    def error(self, msg: str, *args, **kwargs):
        self._log_with_extra(logging.ERROR, msg, *args, **kwargs)


class LogManager:
    """日志管理器"""

    def __init__(self):
        self.settings = get_settings()
        self._configured = False
        self.log_dir: Optional[Path] = None

    def configure_logging(
        self,
        log_dir: Optional[Union[str, Path]] = None,
        level: Optional[str] = None,
        force: bool = False
    ):
        """
        配置日志系统

        Args:
            log_dir: 日志目录，默认使用 Settings.log_dir
            level: 日志级别，默认使用 Settings.log_level
            force: 已配置时是否重新配置（每次命令行运行写入各自的工作目录）
        """
        if self._configured and not force:
            return

        log_dir = Path(log_dir or self.settings.log_dir)
        log_dir.mkdir(parents=True, exist_ok=True)
        level = (level or self.settings.log_level).upper()

        handlers: Dict[str, Dict[str, Any]] = {
            'file': {
                'class': 'logging.handlers.RotatingFileHandler',
                'level': level,
                'formatter': 'detailed',
                'filename': str(log_dir / LogConstants.RUN_LOG_FILE),
                'maxBytes': LogConstants.MAX_BYTES,
                'backupCount': LogConstants.BACKUP_COUNT,
                'encoding': 'utf-8'
            }
        }
        if self.settings.log_console:
            handlers['console'] = {
                'class': 'logging.StreamHandler',
                'level': level,
                'formatter': 'standard',
                'stream': sys.stderr
            }
        if self.settings.log_json:
            handlers['json_file'] = {
                'class': 'logging.handlers.RotatingFileHandler',
                'level': level,
                'formatter': 'json',
                'filename': str(log_dir / LogConstants.STRUCTURED_LOG_FILE),
                'maxBytes': LogConstants.MAX_BYTES,
                'backupCount': LogConstants.BACKUP_COUNT,
                'encoding': 'utf-8'
            }

        log_config = {
            'version': 1,
            'disable_existing_loggers': False,
            'formatters': {
                'standard': {'format': LogConstants.STANDARD_FORMAT},
                'detailed': {'format': LogConstants.DETAILED_FORMAT},
                'json': {'()': JSONFormatter},
            },
            'handlers': handlers,
            'loggers': {
                'adcad': {
                    'level': level,
                    'handlers': list(handlers),
                    'propagate': False
                },
            }
        }

        logging.config.dictConfig(log_config)
        self._configured = True
        self.log_dir = log_dir

    def get_logger(self, name: str) -> StructuredLogger:
        """获取结构化日志记录器"""
        return StructuredLogger(name)

    def shutdown(self):
        """关闭并移除本包的日志处理器（释放文件句柄）"""
        package_logger = logging.getLogger('adcad')
        for handler in list(package_logger.handlers):
            handler.close()
            package_logger.removeHandler(handler)
        package_logger.propagate = True
        self._configured = False


# 全局日志管理器实例
log_manager = LogManager()


def get_logger(name: str) -> StructuredLogger:
    """获取日志记录器（快捷函数）"""
    return log_manager.get_logger(name)


def configure_logging(log_dir: Optional[Union[str, Path]] = None,
                      level: Optional[str] = None, force: bool = False):
    """配置日志系统（快捷函数）"""
    log_manager.configure_logging(log_dir, level, force)


__all__ = [
    'LogManager',
    'StructuredLogger',
    'JSONFormatter',
    'log_manager',
    'get_logger',
    'configure_logging',
]
