"""
应用配置管理
定义运行环境相关的系统设置（日志、调试等），与单次运行的 RunConfig 分离
"""

import os

from dotenv import load_dotenv
from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from .constants import LogConstants

# 加载环境变量
load_dotenv()


class Settings(BaseSettings):
    """应用主配置类"""

    model_config = SettingsConfigDict(
        env_prefix="ADCAD_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        validate_assignment=True,
        extra="ignore",
    )

    environment: str = Field(default="development", description="运行环境")
    debug: bool = Field(default=False, description="调试模式")
    log_level: str = Field(default="INFO", description="日志级别")
    log_dir: str = Field(default="logs", description="日志目录（相对路径时位于工作目录下）")
    log_json: bool = Field(default=True, description="是否额外输出JSON结构化日志")
    log_console: bool = Field(default=True, description="是否输出到控制台")

    @field_validator('log_level')
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """验证日志级别"""
        if v.upper() not in LogConstants.VALID_LEVELS:
            raise ValueError(f'日志级别必须是: {", ".join(LogConstants.VALID_LEVELS)}')
        return v.upper()


class DevelopmentSettings(Settings):
    """开发环境配置"""

    debug: bool = True
    log_level: str = "DEBUG"


class TestingSettings(Settings):
    """测试环境配置"""

    debug: bool = True
    log_level: str = "DEBUG"
    log_json: bool = False
    log_console: bool = False


def get_settings() -> Settings:
    """根据环境获取配置实例"""
    env = os.getenv("ADCAD_ENVIRONMENT", "production").lower()

    if env == "development":
        return DevelopmentSettings()
    elif env == "testing":
        return TestingSettings()
    else:
        return Settings()
