"""
统一错误处理器

把引擎异常映射为进程退出码，并为参数扫描提供逐点容错执行。
"""

from typing import Any, Callable, Dict, Optional, Tuple

from logger import get_logger, StructuredLogger
from .exceptions import (
    FermiError, ValidationError, ConfigurationError,
    DomainError, OnLightConeError, ConvergenceError
)


# 退出码约定
EXIT_OK = 0
EXIT_FAILED_CHECKS = 1
EXIT_INVALID_INPUT = 2
EXIT_NOT_CONVERGED = 3


class ErrorHandler:
    """统一错误处理器

    提供错误日志记录、退出码映射和逐点容错执行。
    """

    def __init__(self, logger: Optional[StructuredLogger] = None):
        """初始化错误处理器

        Args:
            logger: 结构化日志记录器实例
        """
        self.logger = logger or get_logger('error_handler')

    def handle_error(self, error: Exception, context: Optional[Dict[str, Any]] = None) -> int:
        """统一错误处理入口

        Args:
            error: 异常对象
            context: 错误上下文信息

        Returns:
            进程退出码
        """
        context = context or {}
        self._log_error(error, context)

        if isinstance(error, FermiError):
            return self._get_exit_code_for_error(error)
        # 未包装的 ValueError 视为输入问题
        if isinstance(error, ValueError):
            return EXIT_INVALID_INPUT
        return EXIT_FAILED_CHECKS

    def _get_exit_code_for_error(self, error: FermiError) -> int:
        """根据错误码获取退出码"""
        exit_code_map = {
            'VAL_001': EXIT_INVALID_INPUT,
            'CFG_001': EXIT_INVALID_INPUT,
            'DOM_001': EXIT_INVALID_INPUT,
            'KER_001': EXIT_INVALID_INPUT,
            'QUAD_001': EXIT_NOT_CONVERGED,
        }
        return exit_code_map.get(error.error_code, EXIT_FAILED_CHECKS)

    def _log_error(self, error: Exception, context: Dict[str, Any]) -> None:
        """记录错误日志"""
        log_data: Dict[str, Any] = {'context': context}
        if isinstance(error, FermiError):
            log_data.update({
                'error_code': error.error_code,
                'error_details': error.details
            })
        self.logger.error(f"处理错误: {error}", error=error, **log_data)

    def guarded(self, func: Callable, *args, **kwargs) -> Tuple[Any, str]:
        """执行函数并把引擎异常转换为状态字符串

        参数扫描用它记录逐点失败而不终止整个扫描。

        Args:
            func: 要执行的函数
            *args: 函数位置参数
            **kwargs: 函数关键字参数

        Returns:
            (结果或 None, 状态)；状态为 "ok" 或错误码
        """
        try:
            return func(*args, **kwargs), 'ok'
        except FermiError as e:
            self.logger.warning(
                f"扫描点执行失败: {e}",
                error_code=e.error_code,
                func=getattr(func, '__name__', str(func))
            )
            return None, e.error_code


__all__ = [
    'ErrorHandler', 'EXIT_OK', 'EXIT_FAILED_CHECKS', 'EXIT_INVALID_INPUT', 'EXIT_NOT_CONVERGED',
    'ValidationError', 'ConfigurationError', 'DomainError', 'OnLightConeError', 'ConvergenceError',
]
