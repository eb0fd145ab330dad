"""
配置管理模块
提供统一的配置管理和环境配置支持
"""

from .settings import Settings, DevelopmentSettings, TestingSettings, get_settings
from .constants import (
    ProtocolConstants, DatasetConstants, ScanConstants, ErrorConstants,
    ExitCodes, LogConstants
)
from .version import (
    PROJECT_VERSION, CHECKPOINT_FORMAT_VERSION, MANIFEST_FORMAT_VERSION,
    get_version_info
)

__all__ = [
    # 配置类
    'Settings',
    'DevelopmentSettings',
    'TestingSettings',
    'get_settings',

    # 常量类
    'ProtocolConstants',
    'DatasetConstants',
    'ScanConstants',
    'ErrorConstants',
    'ExitCodes',
    'LogConstants',

    # 版本信息
    'PROJECT_VERSION',
    'CHECKPOINT_FORMAT_VERSION',
    'MANIFEST_FORMAT_VERSION',
    'get_version_info'
]
