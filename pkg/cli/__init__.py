# 命令行接口模块
from .run_config import (
    AXIS_ORDER, RunConfig, SweepConfig,
    parse_run_config, parse_sweep_config, load_run_config, load_sweep_config, load_engine, resolve_threads
)
from .commands import (
    ENGINE_NAME, ENGINE_VERSION, CSV_COLUMNS, run_single, run_sweep, evaluate_grid_point
)
from .verify_suite import VerifySuite, CriterionResult, SuiteReport
from .main import main, build_parser

__all__ = [
    'AXIS_ORDER', 'RunConfig', 'SweepConfig',
    'parse_run_config', 'parse_sweep_config', 'load_run_config', 'load_sweep_config', 'load_engine',
    'resolve_threads',
    'ENGINE_NAME', 'ENGINE_VERSION', 'CSV_COLUMNS', 'run_single', 'run_sweep', 'evaluate_grid_point',
    'VerifySuite', 'CriterionResult', 'SuiteReport',
    'main', 'build_parser'
]
