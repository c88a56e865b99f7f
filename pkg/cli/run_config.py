"""
运行配置（TOML）

单点运行：

    [params]
    omega0 = 1.0
    r = 3.0
    lambda = 0.1
    tau0 = 0.0
    tau = 1.5          # 或 dtau = 1.5
    sigma2 = 0.1

    [regularization]   # 缺省项取引擎默认配置
    eps = 1e-3
    schedule = [8e-3, 4e-3, 2e-3, 1e-3]

    [quadrature]
    gauss_nodes = 16

    [run]
    scenarios = [1, 2, 3]
    disorder = true
    include_r_independent = false
    diagnostics = false

参数扫描额外需要 [sweep] 表：

    [sweep]
    max_points = 100000
    threads = 4
    [sweep.axes]
    r = [30.0, 100.0, 300.0]
    sigma2 = { start = 0.01, stop = 1.0, num = 5, geometric = true }
"""

import itertools
import math
import os
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Dict, Iterator, Optional, Tuple

import numpy as np
import psutil

from config import ConfigManager, config_manager as default_config_manager
from error_handler.exceptions import ConfigurationError, ValidationError
from greens.kernels import Regularization
from quadrature import QuadratureSpec
from scenarios import EngineOptions, Scenario, ScenarioEngine, SystemParams


# 扫描网格的规范轴顺序，同时决定输出行的字典序
AXIS_ORDER = ('omega0', 'r', 'sigma2', 'dtau', 'lambda', 'tau0')

_PARAM_KEYS = {'omega0', 'r', 'lambda', 'tau0', 'tau', 'dtau', 'sigma2'}
_REG_KEYS = {'eps', 'schedule', 'extrapolation_order'}
_QUAD_KEYS = {'rel_tol', 'abs_tol', 'max_subdivisions', 'gauss_nodes', 'max_gauss_nodes'}
_RUN_KEYS = {'scenarios', 'disorder', 'include_r_independent', 'i_plus_reading',
             'wave_zone_threshold', 'exponent_grid', 'diagnostics'}
_SWEEP_KEYS = {'axes', 'max_points', 'threads'}
_TOP_KEYS = {'params', 'regularization', 'quadrature', 'run', 'output', 'sweep'}


@dataclass(frozen=True)
class RunConfig:
    """单点运行配置"""
    params: SystemParams
    reg: Regularization
    spec: QuadratureSpec
    options: EngineOptions
    scenarios: Tuple[Scenario, ...] = (Scenario.PHI_F,)
    disorder: bool = False
    diagnostics: bool = False
    output_path: Optional[str] = None
    output_format: str = 'json'

    def engine(self) -> ScenarioEngine:
        return ScenarioEngine(self.reg, self.spec, self.options)

    def metadata(self) -> Dict[str, Any]:
        """写入结果文件的正则化与积分设置"""
        return {
            'regularization': {
                'eps': self.reg.eps,
                'schedule': list(self.reg.schedule),
                'extrapolation_order': self.reg.extrapolation_order,
            },
            'quadrature': asdict(self.spec),
            'options': {
                'i_plus_reading': self.options.i_plus_reading,
                'include_r_independent': self.options.include_r_independent,
                'wave_zone_threshold': self.options.wave_zone_threshold,
                'exponent_grid': list(self.options.exponent_grid),
            },
            'scenarios': [s.value for s in self.scenarios],
            'disorder': self.disorder,
        }


@dataclass(frozen=True)
class SweepConfig:
    """参数扫描配置

    Attributes:
        base: 固定参数与引擎设置
        axes: 轴名 → 取值元组，按 AXIS_ORDER 排列
        max_points: 网格点数上限
        threads: 配置文件给出的线程数（0 表示未指定）
    """
    base: RunConfig
    axes: Tuple[Tuple[str, Tuple[float, ...]], ...]
    max_points: int = 100000
    threads: int = 0

    @property
    def size(self) -> int:
        return math.prod(len(values) for _, values in self.axes)

    def grid(self) -> Iterator[Tuple[int, SystemParams]]:
        """按字典序生成 (网格序号, 参数)"""
        names = [name for name, _ in self.axes]
        for index, combo in enumerate(itertools.product(*(values for _, values in self.axes))):
            changes = dict(zip(names, combo))
            if 'lambda' in changes:
                changes['lam'] = changes.pop('lambda')
            if 'tau0' in changes and 'dtau' not in changes:
                changes['dtau'] = self.base.params.dtau
            yield index, self.base.params.replace(**changes)


def _load_toml(path: str) -> Dict[str, Any]:
    file = Path(path)
    if not file.exists():
        raise ConfigurationError('config', f"配置文件不存在: {path}")
    try:
        with open(file, 'rb') as f:
            return tomllib.load(f)
    except tomllib.TOMLDecodeError as e:
        raise ConfigurationError('config', f"TOML 解析失败: {e}")


def _table(data: Dict[str, Any], name: str, allowed: set) -> Dict[str, Any]:
    table = data.get(name, {})
    if not isinstance(table, dict):
        raise ConfigurationError(name, f"[{name}] 必须是表")
    unknown = set(table) - allowed
    if unknown:
        raise ConfigurationError(name, f"[{name}] 中有未知的键: {sorted(unknown)}")
    return table


def _number(table: Dict[str, Any], key: str, section: str) -> float:
    value = table[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(key, f"[{section}].{key} 必须是数值，收到 {value!r}")
    return float(value)


def _build_params(table: Dict[str, Any], axes: Tuple[str, ...] = ()) -> SystemParams:
    """[params] 表 → SystemParams；扫描轴上的参数可以缺省，占位值由网格点覆盖"""
    if 'tau' in table and 'dtau' in table:
        raise ValidationError('tau', "[params] 中 tau 与 dtau 只能给出一个")
    for key in ('omega0', 'r'):
        if key not in table and key not in axes:
            raise ValidationError(key, f"[params] 缺少必需参数 {key}")
    if 'tau' not in table and 'dtau' not in table and 'dtau' not in axes:
        raise ValidationError('tau', "[params] 缺少 tau 或 dtau")

    values = {key: _number(table, key, 'params') for key in table}
    tau0 = values.get('tau0', 0.0)
    dtau = values['tau'] - tau0 if 'tau' in values else values.get('dtau', 1.0)
    return SystemParams(
        omega0=values.get('omega0', 1.0),
        r=values.get('r', 1.0),
        lam=values.get('lambda', 1.0),
        tau0=tau0,
        tau=tau0 + dtau,
        sigma2=values.get('sigma2', 0.0),
    )


def _build_reg(table: Dict[str, Any], manager: ConfigManager) -> Regularization:
    defaults = manager.regularization
    return Regularization(
        eps=float(table.get('eps', defaults.eps)),
        schedule=tuple(float(e) for e in table.get('schedule', defaults.schedule)),
        extrapolation_order=int(table.get('extrapolation_order', defaults.extrapolation_order)),
    )


def _build_spec(table: Dict[str, Any], manager: ConfigManager) -> QuadratureSpec:
    values = asdict(manager.quadrature)
    values.update(table)
    return QuadratureSpec(**values)


def _build_options(table: Dict[str, Any], manager: ConfigManager) -> EngineOptions:
    defaults = manager.scenario
    return EngineOptions(
        i_plus_reading=table.get('i_plus_reading', defaults.i_plus_reading),
        include_r_independent=bool(table.get('include_r_independent', defaults.include_r_independent)),
        wave_zone_threshold=float(table.get('wave_zone_threshold', defaults.wave_zone_threshold)),
        exponent_grid=tuple(table.get('exponent_grid', defaults.exponent_grid)),
    )


def parse_run_config(data: Dict[str, Any], manager: Optional[ConfigManager] = None,
                     axes: Tuple[str, ...] = ()) -> RunConfig:
    """把已解析的 TOML 数据转换为 RunConfig

    Raises:
        ConfigurationError: 结构错误（未知表或键）
        ValidationError: 参数值不满足类型不变量
    """
    manager = manager or default_config_manager
    unknown = set(data) - _TOP_KEYS
    if unknown:
        raise ConfigurationError('config', f"未知的配置表: {sorted(unknown)}")
    if 'params' not in data and not axes:
        raise ValidationError('params', "缺少 [params] 表")

    run = _table(data, 'run', _RUN_KEYS)
    scenarios = run.get('scenarios', [1])
    if not isinstance(scenarios, list) or not scenarios:
        raise ValidationError('scenarios', "[run].scenarios 必须是非空列表")
    parsed = tuple(sorted({Scenario.parse(s) for s in scenarios}, key=lambda s: s.value))

    output = _table(data, 'output', {'path'})
    return RunConfig(
        params=_build_params(_table(data, 'params', _PARAM_KEYS), axes),
        reg=_build_reg(_table(data, 'regularization', _REG_KEYS), manager),
        spec=_build_spec(_table(data, 'quadrature', _QUAD_KEYS), manager),
        options=_build_options(run, manager),
        scenarios=parsed,
        disorder=bool(run.get('disorder', False)),
        diagnostics=bool(run.get('diagnostics', False)),
        output_path=output.get('path'),
    )


def _axis_values(name: str, spec: Any) -> Tuple[float, ...]:
    if isinstance(spec, list):
        if not spec:
            raise ValidationError(name, f"扫描轴 {name} 不能为空")
        if any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in spec):
            raise ValidationError(name, f"扫描轴 {name} 的取值必须是数值")
        return tuple(float(v) for v in spec)
    if isinstance(spec, dict):
        missing = {'start', 'stop', 'num'} - set(spec)
        if missing:
            raise ValidationError(name, f"扫描轴 {name} 缺少 {sorted(missing)}")
        num = spec['num']
        if not isinstance(num, int) or num < 1:
            raise ValidationError(name, f"扫描轴 {name} 的 num 必须是正整数")
        start, stop = float(spec['start']), float(spec['stop'])
        if spec.get('geometric', False):
            if start <= 0.0 or stop <= 0.0:
                raise ValidationError(name, f"几何扫描轴 {name} 的端点必须为正")
            return tuple(float(v) for v in np.geomspace(start, stop, num))
        return tuple(float(v) for v in np.linspace(start, stop, num))
    raise ValidationError(name, f"扫描轴 {name} 必须是列表或 {{start, stop, num}} 表")


def parse_sweep_config(data: Dict[str, Any], manager: Optional[ConfigManager] = None) -> SweepConfig:
    """把已解析的 TOML 数据转换为 SweepConfig

    Raises:
        ConfigurationError: 缺少 [sweep] 表或结构错误
        ValidationError: 轴为空、未知轴名或网格超过上限
    """
    manager = manager or default_config_manager
    sweep = _table(data, 'sweep', _SWEEP_KEYS)
    axes_table = sweep.get('axes')
    if not isinstance(axes_table, dict) or not axes_table:
        raise ValidationError('axes', "[sweep.axes] 至少需要一个扫描轴")
    unknown = set(axes_table) - set(AXIS_ORDER)
    if unknown:
        raise ValidationError('axes', f"未知的扫描轴: {sorted(unknown)}，可选 {list(AXIS_ORDER)}")
    axes = tuple((name, _axis_values(name, axes_table[name])) for name in AXIS_ORDER if name in axes_table)

    base = parse_run_config({k: v for k, v in data.items() if k != 'sweep'}, manager,
                            axes=tuple(name for name, _ in axes))
    max_points = sweep.get('max_points', manager.sweep.max_points)
    threads = sweep.get('threads', manager.sweep.threads)
    if not isinstance(max_points, int) or max_points < 1:
        raise ValidationError('max_points', "max_points 必须是正整数")
    if not isinstance(threads, int) or threads < 0:
        raise ValidationError('threads', "threads 必须是非负整数")

    config = SweepConfig(base=base, axes=axes, max_points=max_points, threads=threads)
    if config.size > max_points:
        raise ValidationError('axes', f"扫描网格共 {config.size} 个点，超过上限 {max_points}")
    # 每个网格点都必须是合法参数
    for _ in config.grid():
        continue
    return config


def load_run_config(path: str, manager: Optional[ConfigManager] = None) -> RunConfig:
    return parse_run_config(_load_toml(path), manager)


def load_sweep_config(path: str, manager: Optional[ConfigManager] = None) -> SweepConfig:
    return parse_sweep_config(_load_toml(path), manager)


def load_engine(path: Optional[str] = None, manager: Optional[ConfigManager] = None) -> ScenarioEngine:
    """只读取 [regularization]、[quadrature]、[run] 构建引擎；path 为 None 时用默认配置"""
    manager = manager or default_config_manager
    data = _load_toml(path) if path else {}
    return ScenarioEngine(
        _build_reg(_table(data, 'regularization', _REG_KEYS), manager),
        _build_spec(_table(data, 'quadrature', _QUAD_KEYS), manager),
        _build_options(_table(data, 'run', _RUN_KEYS), manager),
    )


def resolve_threads(flag: Optional[int], configured: int = 0) -> int:
    """线程数：--threads > FERMI_THREADS > 配置文件 > 硬件逻辑核数

    Raises:
        ValidationError: 显式给出的线程数不是正整数
    """
    if flag is not None:
        if flag < 1:
            raise ValidationError('threads', f"--threads 必须是正整数，收到 {flag}")
        return flag
    env = os.getenv('FERMI_THREADS')
    if env:
        try:
            value = int(env)
        except ValueError:
            raise ValidationError('threads', f"FERMI_THREADS 必须是整数，收到 {env!r}")
        if value < 1:
            raise ValidationError('threads', f"FERMI_THREADS 必须是正整数，收到 {value}")
        return value
    if configured > 0:
        return configured
    return psutil.cpu_count(logical=True) or 1


__all__ = [
    'AXIS_ORDER', 'RunConfig', 'SweepConfig',
    'parse_run_config', 'parse_sweep_config', 'load_run_config', 'load_sweep_config', 'load_engine',
    'resolve_threads',
]
