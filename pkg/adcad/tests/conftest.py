"""
pytest配置文件
定义测试配置、fixture和插件
"""

import os

# 必须在导入 adcad 之前设置，日志管理器在导入时读取环境配置
os.environ["ADCAD_ENVIRONMENT"] = "testing"

import shutil
import tempfile
from pathlib import Path
from typing import Generator

import numpy as np
import pytest

from adcad.config import TestingSettings, get_settings
from adcad.models.network import NetworkConfig
from adcad.services.model import ConvNet, build_network
from adcad.utils.logging_config import log_manager


@pytest.fixture(scope="session")
def test_settings() -> TestingSettings:
    """测试环境配置"""
    return get_settings()


@pytest.fixture
def temp_dir() -> Generator[Path, None, None]:
    """临时目录fixture"""
    temp_dir = tempfile.mkdtemp()
    yield Path(temp_dir)
    # 释放日志文件句柄后再清理
    log_manager.shutdown()
    if os.path.exists(temp_dir):
        shutil.rmtree(temp_dir)


@pytest.fixture
def rng() -> np.random.Generator:
    """固定种子的随机数生成器"""
    return np.random.default_rng(42)


@pytest.fixture
def tiny_config() -> NetworkConfig:
    """两阶段 16x16 网络"""
    return NetworkConfig(input_size=16, kernel_size=5, base_filters=2)


@pytest.fixture
def tiny_network(tiny_config) -> ConvNet:
    """两阶段 16x16 网络（种子 0）"""
    return build_network(tiny_config, seed=0)


def pytest_configure(config):
    """pytest配置钩子"""
    # 注册自定义标记
    config.addinivalue_line(
        "markers", "slow: 标记为慢速测试（验收规模的训练、梯度检查与全片扫描）"
    )
    config.addinivalue_line(
        "markers", "integration: 标记为集成测试（多个子命令串联）"
    )
    config.addinivalue_line(
        "markers", "unit: 标记为单元测试"
    )


def pytest_collection_modifyitems(config, items):
    """修改测试项集合"""
    # 如果没有指定标记，默认跳过慢速/集成测试
    if not any(marker in config.option.markexpr for marker in ['slow', 'integration']):
        for item in items:
            if 'slow' in item.keywords or 'integration' in item.keywords:
                item.add_marker(pytest.mark.skip(reason="默认跳过慢速/集成测试，使用 -m slow 或 -m integration 运行"))
