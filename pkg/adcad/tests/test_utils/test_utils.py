"""
工具模块单元测试
"""

import json
import logging

import pytest

from adcad.config.constants import ErrorConstants, ExitCodes
from adcad.utils import (
    ConfigurationError, DataValidationError, ExceptionHandler, JSONFormatter,
    ResourceMonitor, ShapeError, StructuredLogger, performance_monitor
)
from adcad.utils.logging_config import LogManager


class TestExceptions:
    """异常体系测试类"""

    def test_to_dict(self):
        """异常转换为字典"""
        error = DataValidationError("坏数据", validation_errors=[{'field': 'label'}])
        result = error.to_dict()
        assert result['error_code'] == ErrorConstants.DATA_VALIDATION_ERROR
        assert result['message'] == "坏数据"
        assert result['validation_errors'] == [{'field': 'label'}]

    def test_configuration_key(self):
        """配置异常带键名"""
        result = ConfigurationError("坏配置", config_key="train.batch_size").to_dict()
        assert result['config_key'] == "train.batch_size"

    def test_exit_codes(self):
        """校验类异常退出码 1，其余为 2"""
        assert ExceptionHandler.exit_code(ConfigurationError("x")) == ExitCodes.VALIDATION_ERROR
        assert ExceptionHandler.exit_code(ShapeError("x")) == ExitCodes.RUNTIME_ERROR
        assert ExceptionHandler.exit_code(RuntimeError("x")) == ExitCodes.RUNTIME_ERROR

    def test_handle_unknown(self):
        """非本包异常"""
        result = ExceptionHandler.handle_exception(RuntimeError("boom"))
        assert result['error_code'] == ErrorConstants.UNKNOWN_ERROR


class TestLogging:
    """日志测试类"""

    def test_json_formatter_extra_fields(self):
        """JSON 格式化包含额外字段"""
        record = logging.LogRecord("adcad.test", logging.INFO, __file__, 1, "消息", None, None)
        record.extra_fields = {'seed': 3}
        entry = json.loads(JSONFormatter().format(record))
        assert entry['message'] == "消息"
        assert entry['level'] == "INFO"
        assert entry['seed'] == 3

    def test_structured_logger_clears_fields(self, caplog):
        """额外字段只作用于一条日志"""
        structured = StructuredLogger("adcad.test")
        with caplog.at_level(logging.INFO, logger="adcad.test"):
            structured.add_field('command', 'train').info("第一条")
            structured.info("第二条")
        assert caplog.records[0].extra_fields == {'command': 'train'}
        assert not hasattr(caplog.records[1], 'extra_fields')

    def test_structured_error_carries_fields(self, caplog):
        """错误日志携带命令与错误码字段"""
        structured = StructuredLogger("adcad.test")
        with caplog.at_level(logging.INFO, logger="adcad.test"):
            structured.add_field('command', 'eval').add_field('error_code', 5001).error("命令 eval 失败")
        assert caplog.records[0].levelno == logging.ERROR
        assert caplog.records[0].extra_fields == {'command': 'eval', 'error_code': 5001}

    def test_configure_and_shutdown(self, temp_dir):
        """日志写入指定目录，关闭后移除处理器"""
        manager = LogManager()
        manager.configure_logging(temp_dir / "logs", "INFO", force=True)
        logging.getLogger("adcad.test").info("写入文件")
        assert (temp_dir / "logs" / "run.log").exists()
        manager.shutdown()
        assert not logging.getLogger("adcad").handlers
        assert "写入文件" in (temp_dir / "logs" / "run.log").read_text(encoding="utf-8")


class TestMonitoring:
    """性能监控测试类"""

    def test_decorator_passes_result(self):
        """返回值不变"""
        @performance_monitor
        def add(a, b):
            return a + b
        assert add(2, 3) == 5
        assert add.__name__ == "add"

    def test_decorator_reraises(self):
        """异常原样抛出"""
        @performance_monitor
        def fail():
            raise ValueError("失败")
        with pytest.raises(ValueError):
            fail()

    def test_resource_snapshot(self):
        """资源快照字段"""
        snapshot = ResourceMonitor().snapshot()
        assert set(snapshot) == {'rss_mb', 'cpu_percent', 'elapsed_s'}
        assert snapshot['rss_mb'] > 0
