"""
配置管理器 - 集中管理引擎默认参数
支持 JSON 配置文件、.env 文件和环境变量覆盖
"""

import json
import os
import threading
from typing import Any, Dict, List
from dataclasses import dataclass, asdict, field
from pathlib import Path
import logging

from dotenv import load_dotenv


@dataclass
class RegularizationConfig:
    """iε 正则化默认值"""
    eps: float = 1e-3
    schedule: List[float] = field(default_factory=lambda: [8e-3, 4e-3, 2e-3, 1e-3])
    extrapolation_order: int = 3


@dataclass
class QuadratureConfig:
    """数值积分默认值"""
    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_subdivisions: int = 200
    gauss_nodes: int = 16
    max_gauss_nodes: int = 32


@dataclass
class ScenarioConfig:
    """场景装配选项"""
    i_plus_reading: str = "continued"  # continued | restricted
    include_r_independent: bool = False
    wave_zone_threshold: float = 50.0
    exponent_grid: List[float] = field(default_factory=lambda: [30.0, 100.0, 300.0])


@dataclass
class SweepDefaults:
    """参数扫描默认值"""
    max_points: int = 100000
    threads: int = 0  # 0 表示按硬件自动选择


@dataclass
class LoggingConfig:
    """日志相关配置"""
    level: str = "WARNING"
    file: str = "logs/fermi.log"
    max_size: str = "10MB"
    backup_count: int = 5
    console: bool = True


class ConfigManager:
    """配置管理器 - 提供集中的配置管理功能"""

    SECTIONS = ("regularization", "quadrature", "scenario", "sweep", "logging")

    def __init__(self, config_file: str = None, create_if_missing: bool = False):
        load_dotenv()
        self.config_file = Path(config_file or os.getenv("FERMI_CONFIG", "fermi_config.json"))
        self._lock = threading.RLock()
        self._config_data: Dict[str, Any] = {}

        self.regularization = RegularizationConfig()
        self.quadrature = QuadratureConfig()
        self.scenario = ScenarioConfig()
        self.sweep = SweepDefaults()
        self.logging = LoggingConfig()

        self._load_config(create_if_missing)
        self._load_env_variables()

    def _load_config(self, create_if_missing: bool = False) -> None:
        """从配置文件加载配置"""
        try:
            if self.config_file.exists():
                with open(self.config_file, 'r', encoding='utf-8') as f:
                    self._config_data = json.load(f)
                self._apply_config()
            elif create_if_missing:
                self._create_default_config()
            else:
                self._config_data = self.get_config_dict()
        except (OSError, json.JSONDecodeError) as e:
            logging.getLogger("fermi.config").error(f"加载配置文件失败: {e}")
            self._config_data = self.get_config_dict()

    def _create_default_config(self) -> None:
        """创建默认配置文件"""
        default_config = self.get_config_dict()

        self.config_file.parent.mkdir(parents=True, exist_ok=True)
        with open(self.config_file, 'w', encoding='utf-8') as f:
            json.dump(default_config, f, indent=2, ensure_ascii=False)

        self._config_data = default_config

    def _apply_config(self) -> None:
        """应用配置数据到配置对象"""
        for section in self.SECTIONS:
            target = getattr(self, section)
            for key, value in self._config_data.get(section, {}).items():
                if hasattr(target, key):
                    setattr(target, key, value)

    def _load_env_variables(self) -> None:
        """从环境变量加载配置（优先级高于配置文件）"""
        if os.getenv("FERMI_EPS"):
            self.regularization.eps = float(os.getenv("FERMI_EPS"))
        if os.getenv("FERMI_REL_TOL"):
            self.quadrature.rel_tol = float(os.getenv("FERMI_REL_TOL"))
        if os.getenv("FERMI_GAUSS_NODES"):
            self.quadrature.gauss_nodes = int(os.getenv("FERMI_GAUSS_NODES"))
        if os.getenv("FERMI_I_PLUS_READING"):
            self.scenario.i_plus_reading = os.getenv("FERMI_I_PLUS_READING")
        if os.getenv("FERMI_THREADS"):
            self.sweep.threads = int(os.getenv("FERMI_THREADS"))

        # 日志配置
        if os.getenv("FERMI_LOG_LEVEL"):
            self.logging.level = os.getenv("FERMI_LOG_LEVEL")
        if os.getenv("FERMI_LOG_FILE") is not None:
            self.logging.file = os.getenv("FERMI_LOG_FILE")

    def get(self, key: str, default: Any = None) -> Any:
        """获取配置值，支持点号分隔的嵌套键"""
        with self._lock:
            keys = key.split('.')
            value: Any = self.get_config_dict()

            try:
                for k in keys:
                    value = value[k]
                return value
            except (KeyError, TypeError):
                return default

    def set(self, key: str, value: Any) -> None:
        """设置配置值，支持点号分隔的嵌套键"""
        with self._lock:
            keys = key.split('.')
            config = self._config_data

            for k in keys[:-1]:
                if k not in config:
                    config[k] = {}
                config = config[k]

            config[keys[-1]] = value
            self._apply_config()

    def reload(self) -> None:
        """重新加载配置文件"""
        with self._lock:
            self._load_config()
            self._load_env_variables()
            logging.getLogger("fermi.config").info("配置已重新加载")

    def save(self) -> None:
        """保存当前配置到文件"""
        with self._lock:
            self._config_data.update(self.get_config_dict())
            self.config_file.parent.mkdir(parents=True, exist_ok=True)
            with open(self.config_file, 'w', encoding='utf-8') as f:
                json.dump(self._config_data, f, indent=2, ensure_ascii=False)

    def validate(self) -> bool:
        """验证配置的有效性"""
        try:
            reg = self.regularization
            if not reg.eps > 0:
                raise ValueError("eps 必须为正数")
            if len(reg.schedule) < 3:
                raise ValueError("外推序列至少需要 3 个 eps 值")
            if any(b >= a for a, b in zip(reg.schedule, reg.schedule[1:])) or min(reg.schedule) <= 0:
                raise ValueError("外推序列必须严格递减且全为正")
            if not 1 <= reg.extrapolation_order < len(reg.schedule):
                raise ValueError("外推阶数必须介于 1 和序列长度减一之间")

            quad = self.quadrature
            if not (quad.rel_tol > 0 and quad.abs_tol > 0):
                raise ValueError("积分容差必须为正数")
            if not isinstance(quad.max_subdivisions, int) or quad.max_subdivisions <= 0:
                raise ValueError("最大细分次数必须是正整数")
            if not isinstance(quad.gauss_nodes, int) or quad.gauss_nodes < 8:
                raise ValueError("Gauss 节点数必须是不小于 8 的整数")
            if quad.max_gauss_nodes < quad.gauss_nodes:
                raise ValueError("max_gauss_nodes 不能小于 gauss_nodes")

            if self.scenario.i_plus_reading not in ("restricted", "continued"):
                raise ValueError("i_plus_reading 必须是 restricted 或 continued")
            if self.scenario.wave_zone_threshold <= 0:
                raise ValueError("波区阈值必须为正数")

            if not isinstance(self.sweep.max_points, int) or self.sweep.max_points <= 0:
                raise ValueError("扫描点数上限必须是正整数")
            if not isinstance(self.sweep.threads, int) or self.sweep.threads < 0:
                raise ValueError("线程数必须是非负整数")

            valid_log_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
            if self.logging.level.upper() not in valid_log_levels:
                raise ValueError(f"日志级别必须是: {valid_log_levels}")

            return True

        except ValueError as e:
            logging.getLogger("fermi.config").error(f"配置验证失败: {e}")
            return False

    def get_config_dict(self) -> Dict[str, Any]:
        """获取完整的配置字典"""
        with self._lock:
            return {section: asdict(getattr(self, section)) for section in self.SECTIONS}


# 全局配置管理器实例
config_manager = ConfigManager()
