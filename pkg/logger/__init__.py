# 日志系统模块
from .structured_logger import (
    StructuredLogger, StructuredFormatter, PerformanceTimer, LoggerManager,
    get_logger, performance_timer
)
from .config import LoggingConfig

__all__ = [
    'StructuredLogger',
    'StructuredFormatter',
    'PerformanceTimer',
    'LoggerManager',
    'get_logger',
    'performance_timer',
    'LoggingConfig'
]
