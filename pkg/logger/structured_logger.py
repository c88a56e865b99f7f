"""
结构化日志系统模块

提供多级别 JSON 日志记录、日志轮转和性能计时功能。
"""

import logging
import logging.handlers
import json
import sys
import time
import traceback
from datetime import datetime, timezone
from typing import Dict, Any, Optional
from pathlib import Path
import threading
import uuid

from .config import LoggingConfig


class StructuredLogger:
    """结构化日志记录器"""

    def __init__(self, name: str, config: Dict[str, Any]):
        """
        初始化结构化日志记录器

        Args:
            name: 日志记录器名称
            config: 日志配置字典
        """
        self.name = name
        self.config = LoggingConfig.from_dict(config)
        self.logger = logging.getLogger(f"fermi.{name}")
        self.logger.propagate = False
        self._run_local = threading.local()
        self._setup_logger()

    def _setup_logger(self):
        """设置日志记录器"""
        # 清除现有处理器
        for handler in list(self.logger.handlers):
            handler.close()
        self.logger.handlers.clear()

        level = getattr(logging, str(self.config.get('level', 'INFO')).upper())
        self.logger.setLevel(level)

        formatter = StructuredFormatter()

        # 空字符串表示不写文件
        log_file = self.config.get('file') or ''
        if log_file:
            log_path = Path(log_file)
            log_path.parent.mkdir(parents=True, exist_ok=True)

            file_handler = logging.handlers.RotatingFileHandler(
                log_file,
                maxBytes=self._parse_size(self.config.get('max_size', '10MB')),
                backupCount=self.config.get('backup_count', 5),
                encoding='utf-8'
            )
            # 文件里保留完整 JSON
            file_handler.setFormatter(logging.Formatter('%(message)s'))
            self.logger.addHandler(file_handler)

        if self.config.get('console', True):
            # 结果文档可能写到 stdout，日志一律走 stderr
            console_handler = logging.StreamHandler(sys.stderr)
            console_handler.setFormatter(formatter)
            self.logger.addHandler(console_handler)

    def _parse_size(self, size_str: str) -> int:
        """解析大小字符串为字节数"""
        size_str = str(size_str).upper()
        if size_str.endswith('KB'):
            return int(size_str[:-2]) * 1024
        elif size_str.endswith('MB'):
            return int(size_str[:-2]) * 1024 * 1024
        elif size_str.endswith('GB'):
            return int(size_str[:-2]) * 1024 * 1024 * 1024
        else:
            return int(size_str)

    def _get_run_id(self) -> str:
        """获取或生成运行ID"""
        if not hasattr(self._run_local, 'run_id'):
            self._run_local.run_id = str(uuid.uuid4())[:8]
        return self._run_local.run_id

    def set_run_id(self, run_id: str):
        """设置当前线程的运行ID（扫描时为网格序号）"""
        self._run_local.run_id = run_id

    def _create_log_record(self, level: str, message: str, **kwargs) -> Dict[str, Any]:
        """创建结构化日志记录"""
        record = {
            'timestamp': datetime.now(timezone.utc).isoformat(),
            'level': level,
            'module': self.name,
            'message': message,
            'run_id': self._get_run_id()
        }
        record.update(kwargs)
        return record

    def _emit(self, level: int, record: Dict[str, Any]):
        if self.logger.isEnabledFor(level):
            self.logger.log(level, json.dumps(record, ensure_ascii=False, default=str))

    def debug(self, message: str, **kwargs):
        """记录调试日志"""
        self._emit(logging.DEBUG, self._create_log_record('DEBUG', message, **kwargs))

    def info(self, message: str, **kwargs):
        """记录信息日志"""
        self._emit(logging.INFO, self._create_log_record('INFO', message, **kwargs))

    def warning(self, message: str, **kwargs):
        """记录警告日志"""
        self._emit(logging.WARNING, self._create_log_record('WARNING', message, **kwargs))

    def error(self, message: str, error: Optional[Exception] = None, **kwargs):
        """记录错误日志"""
        record = self._create_log_record('ERROR', message, **kwargs)

        if error:
            record['error_type'] = type(error).__name__
            record['error_message'] = str(error)
            record['traceback'] = traceback.format_exc()

        self._emit(logging.ERROR, record)

    def performance(self, operation: str, duration: float, **kwargs):
        """记录性能监控日志"""
        record = self._create_log_record('INFO', f'Performance: {operation}', **kwargs)
        record['operation'] = operation
        record['duration_ms'] = round(duration * 1000, 2)
        record['log_type'] = 'performance'

        self._emit(logging.INFO, record)


class StructuredFormatter(logging.Formatter):
    """控制台用的可读格式化器"""

    # 这些字段已经体现在行首
    _BASE_KEYS = {'timestamp', 'level', 'module', 'message', 'run_id', 'traceback', 'log_type'}

    def format(self, record):
        """格式化日志记录"""
        try:
            log_data = json.loads(record.getMessage())
        except (json.JSONDecodeError, ValueError):
            return super().format(record)

        timestamp = log_data.get('timestamp', '')
        if timestamp:
            try:
                timestamp = datetime.fromisoformat(timestamp).strftime('%H:%M:%S')
            except ValueError:
                timestamp = timestamp[-8:]

        level = log_data.get('level', 'INFO')
        module = log_data.get('module', 'unknown')
        base_log = f"[{timestamp}] {level:<7} [{module:<12}] {log_data.get('message', '')}"

        run_id = log_data.get('run_id')
        if run_id:
            base_log += f" [run:{run_id}]"

        extra_info = []
        if 'duration_ms' in log_data:
            duration = log_data['duration_ms']
            # 高亮慢操作
            if duration > 10000:
                extra_info.append(f"duration:{duration}ms [SLOW]")
            else:
                extra_info.append(f"duration:{duration}ms")
        for key, value in log_data.items():
            if key in self._BASE_KEYS or key == 'duration_ms' or key == 'operation':
                continue
            extra_info.append(f"{key}:{value}")

        if extra_info:
            base_log += f" | {' | '.join(extra_info)}"
        return base_log


class PerformanceTimer:
    """性能计时器上下文管理器"""

    def __init__(self, logger: StructuredLogger, operation: str, **kwargs):
        self.logger = logger
        self.operation = operation
        self.kwargs = kwargs
        self.start_time = None
        self.duration = 0.0

    def __enter__(self):
        self.start_time = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        if self.start_time is not None:
            self.duration = time.perf_counter() - self.start_time
            self.logger.performance(self.operation, self.duration, **self.kwargs)


# 全局日志管理器
class LoggerManager:
    """日志管理器"""

    _instance = None
    _lock = threading.Lock()

    def __new__(cls):
        if cls._instance is None:
            with cls._lock:
                if cls._instance is None:
                    cls._instance = super().__new__(cls)
        return cls._instance

    def __init__(self):
        if not hasattr(self, 'initialized'):
            self.loggers = {}
            self.default_config = LoggingConfig.from_env()
            self.initialized = True

    def get_logger(self, name: str, config: Optional[Dict[str, Any]] = None) -> StructuredLogger:
        """获取或创建日志记录器"""
        with self._lock:
            if name not in self.loggers:
                logger_config = config or self.default_config
                self.loggers[name] = StructuredLogger(name, logger_config)
            return self.loggers[name]

    def update_config(self, config: Dict[str, Any]):
        """更新默认配置并重新配置所有现有的日志记录器"""
        with self._lock:
            self.default_config.update(config)
            for logger in self.loggers.values():
                logger.config.update(config)
                logger._setup_logger()


# 便捷函数
def get_logger(name: str, config: Optional[Dict[str, Any]] = None) -> StructuredLogger:
    """获取结构化日志记录器"""
    manager = LoggerManager()
    return manager.get_logger(name, config)


def performance_timer(logger: StructuredLogger, operation: str, **kwargs) -> PerformanceTimer:
    """创建性能计时器"""
    return PerformanceTimer(logger, operation, **kwargs)
