"""
性能监控工具
记录训练过程中的进程资源占用
"""

import logging
import time
from typing import Dict

import psutil

logger = logging.getLogger(__name__)


class ResourceMonitor:
    """资源监控器"""

    def __init__(self):
        self.process = psutil.Process()
        self.start_time = time.perf_counter()

    def snapshot(self) -> Dict[str, float]:
        """获取当前进程的资源快照"""
        try:
            memory = self.process.memory_info()
            return {
                'rss_mb': memory.rss / (1024 * 1024),
                'cpu_percent': self.process.cpu_percent(interval=None),
                'elapsed_s': time.perf_counter() - self.start_time,
            }
        except psutil.Error as e:
            logger.warning(f"收集资源指标失败: {e}")
            return {'rss_mb': 0.0, 'cpu_percent': 0.0,
                    'elapsed_s': time.perf_counter() - self.start_time}
