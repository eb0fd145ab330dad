"""
装饰器工具
提供性能监控装饰器
"""

import functools
import logging
import time
from typing import Any, Callable


def performance_monitor(func: Callable) -> Callable:
    """
    性能监控装饰器
    记录函数执行时间，失败时记录耗时与错误后重新抛出
    """
    @functools.wraps(func)
    def wrapper(*args, **kwargs) -> Any:
        logger = logging.getLogger(func.__module__)
        start_time = time.perf_counter()
        try:
            result = func(*args, **kwargs)
        except Exception as e:
            execution_time = time.perf_counter() - start_time
            logger.error(
                f"性能监控 - {func.__name__}: "
                f"执行失败, 耗时: {execution_time:.4f}s, "
                f"错误: {e}"
            )
            raise
        execution_time = time.perf_counter() - start_time
        logger.info(
            f"性能监控 - {func.__name__}: 执行时间: {execution_time:.4f}s"
        )
        return result

    return wrapper
