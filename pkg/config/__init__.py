# 配置管理模块
from .config_manager import (
    ConfigManager, RegularizationConfig, QuadratureConfig,
    ScenarioConfig, SweepDefaults, LoggingConfig, config_manager
)

__all__ = [
    'ConfigManager', 'RegularizationConfig', 'QuadratureConfig',
    'ScenarioConfig', 'SweepDefaults', 'LoggingConfig', 'config_manager'
]
