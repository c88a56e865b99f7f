# 错误处理模块
from .error_handler import (
    ErrorHandler, EXIT_OK, EXIT_FAILED_CHECKS, EXIT_INVALID_INPUT, EXIT_NOT_CONVERGED
)
from .exceptions import (
    FermiError, ValidationError, ConfigurationError,
    DomainError, OnLightConeError, ConvergenceError
)

__all__ = [
    'ErrorHandler', 'EXIT_OK', 'EXIT_FAILED_CHECKS', 'EXIT_INVALID_INPUT', 'EXIT_NOT_CONVERGED',
    'FermiError', 'ValidationError', 'ConfigurationError',
    'DomainError', 'OnLightConeError', 'ConvergenceError'
]
