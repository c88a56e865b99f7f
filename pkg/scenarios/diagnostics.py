"""
因果性诊断

把"先兆项在波区被 1/(ω₀r)^m 压制"、"自由场非因果项严格抵消"一类定性结论变成数值。
"""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from scipy.optimize import brentq

from asymptotics import PowerLawFit, loglog_fit
from error_handler.exceptions import DomainError, ValidationError
from logger import get_logger, performance_timer
from .models import Regime, ScenarioResult, SystemParams
from .scenario_engine import ScenarioEngine, default_engine


logger = get_logger('scenarios')

# r → Δτ⁺ 时搜索区间的起点
_CROSSOVER_START = 1.01
_CROSSOVER_MAX_DOUBLINGS = 40


@dataclass
class CausalityDiagnostics:
    """先兆区结果的诊断记录"""
    scenario: int
    disorder: bool
    precursor_probability: float
    precursor_err: float
    mirrored_dtau: float
    mirrored_probability: float
    mirrored_err: float
    ratio_to_mirrored: Optional[float]
    suppression_fit: Optional[PowerLawFit]
    exponent_points: List[Tuple[float, float]] = field(default_factory=list)
    free_residual: Optional[complex] = None
    free_residual_err: Optional[float] = None
    disorder_residual: Optional[complex] = None
    disorder_residual_err: Optional[float] = None
    relative_free_residual: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        def cplx(value, err):
            if value is None:
                return None
            return {'re': value.real, 'im': value.imag, 'err_est': err}

        return {
            'scenario': self.scenario,
            'disorder': self.disorder,
            'precursor_probability': {'value': self.precursor_probability, 'err_est': self.precursor_err},
            'mirrored': {
                'dtau': self.mirrored_dtau,
                'probability': self.mirrored_probability,
                'err_est': self.mirrored_err,
            },
            'ratio_to_mirrored': self.ratio_to_mirrored,
            'suppression_fit': self.suppression_fit.to_dict() if self.suppression_fit else None,
            'exponent_points': [{'omega0_r': y, 'value': v} for y, v in self.exponent_points],
            'free_residual': cplx(self.free_residual, self.free_residual_err),
            'disorder_residual': cplx(self.disorder_residual, self.disorder_residual_err),
            'relative_free_residual': self.relative_free_residual,
        }


def causality_diagnostics(result: ScenarioResult, engine: Optional[ScenarioEngine] = None) -> CausalityDiagnostics:
    """先兆概率、与镜像窗口 Δτ' = 2r − Δτ 的比值、波区压制指数以及抵消残差

    压制指数在 engine.options.exponent_grid 的 ω₀r 网格上拟合，保持 ω₀ 与 Δτ 不变，
    λ 固定为 1（概率严格正比于 λ⁴，指数与 λ 无关）。

    Raises:
        DomainError: 结果不在先兆区（Δτ ≥ r）
    """
    params = result.params
    if params.regime() is not Regime.PRECURSOR:
        raise DomainError('causality_diagnostics', params.dtau,
                          f"诊断只适用于先兆区 dtau < r，收到 dtau={params.dtau}, r={params.r}")
    engine = engine or default_engine()

    with performance_timer(logger, 'causality_diagnostics', scenario=result.scenario.value):
        mirrored_dtau = 2.0 * params.r - params.dtau
        mirrored = engine.evaluate(params.replace(dtau=mirrored_dtau), result.scenario, result.disorder)
        ratio = None
        if mirrored.probability_r_dependent != 0.0:
            ratio = result.probability_r_dependent / mirrored.probability_r_dependent

        points: List[Tuple[float, float]] = []
        for y in engine.options.exponent_grid:
            r = y / params.omega0
            if params.dtau >= r:
                continue
            point = engine.evaluate(params.replace(r=r, lam=1.0), result.scenario, result.disorder)
            points.append((y, abs(point.probability_r_dependent)))
        fit = None
        usable = [(y, v) for y, v in points if v > 0.0]
        if len(usable) >= 2:
            fit = loglog_fit([y for y, _ in usable], [v for _, v in usable])

        diagnostics = CausalityDiagnostics(
            scenario=result.scenario.value,
            disorder=result.disorder,
            precursor_probability=result.probability_r_dependent,
            precursor_err=result.err_est,
            mirrored_dtau=mirrored_dtau,
            mirrored_probability=mirrored.probability_r_dependent,
            mirrored_err=mirrored.err_est,
            ratio_to_mirrored=ratio,
            suppression_fit=fit,
            exponent_points=points,
        )

        bd = result.breakdown
        if 'noncausal_residual_free' in bd:
            free = bd['noncausal_residual_free']
            diagnostics.free_residual = free.value
            diagnostics.free_residual_err = free.err_est
            largest = bd['largest_constituent'].value.real
            if largest > 0.0:
                diagnostics.relative_free_residual = abs(free.value) / largest
            if 'noncausal_residual_disorder' in bd:
                dis = bd['noncausal_residual_disorder']
                diagnostics.disorder_residual = dis.value
                diagnostics.disorder_residual_err = dis.err_est
            else:
                # σ² = 0 或未开启无序时，无序残差就是自由残差
                diagnostics.disorder_residual = free.value
                diagnostics.disorder_residual_err = free.err_est

    logger.info("因果性诊断完成", scenario=result.scenario.value,
                ratio_to_mirrored=ratio, slope=fit.slope if fit else None)
    return diagnostics


@dataclass(frozen=True)
class CrossoverEstimate:
    """经验交叉尺度：2|ℐ| = |A| 处的 r"""
    r0: float
    err_est: float
    omega0: float
    sigma2: float
    dtau: float
    iterations: int

    def to_dict(self) -> Dict[str, float]:
        return {'r0': self.r0, 'err_est': self.err_est, 'omega0': self.omega0,
                'sigma2': self.sigma2, 'dtau': self.dtau, 'iterations': self.iterations}


def empirical_crossover_r0(omega0: float, sigma2: float, dtau: float,
                           engine: Optional[ScenarioEngine] = None,
                           xtol: float = 1e-10) -> CrossoverEstimate:
    """求先兆区内无序修正与自由先兆量级相等的间距 r₀

    比较的是概率中的两项 2|A*ℐ| 与 |A|²，即 2|ℐ| = |A|。在 r ∈ (Δτ, ∞) 上从
    r = 1.01Δτ 起按倍数扩大区间直到比值变号，再用 brentq 求根。

    Raises:
        ValidationError: 参数非正
        DomainError: 先兆区内没有交叉点
    """
    if not (omega0 > 0.0 and dtau > 0.0):
        raise ValidationError('omega0', "omega0 与 dtau 必须为正数")
    if not sigma2 > 0.0:
        raise DomainError('empirical_crossover_r0', sigma2, "sigma2 = 0 时没有交叉点")
    engine = engine or default_engine()

    def log_ratio(r: float) -> float:
        params = SystemParams(omega0=omega0, r=r, lam=1.0, tau0=0.0, tau=dtau, sigma2=sigma2)
        amplitude = abs(engine.amplitude_free_A(params).value.value)
        disorder = abs(engine.disorder_integral(params).value)
        if amplitude == 0.0 or disorder == 0.0:
            raise DomainError('empirical_crossover_r0', r, f"r={r} 处振幅为零，无法比较量级")
        return math.log(2.0 * disorder) - math.log(amplitude)

    lo = _CROSSOVER_START * dtau
    f_lo = log_ratio(lo)
    if f_lo <= 0.0:
        raise DomainError('empirical_crossover_r0', sigma2,
                          f"r → Δτ⁺ 时无序项已小于自由项，先兆区内没有交叉点（sigma2={sigma2}）")
    hi = lo
    for _ in range(_CROSSOVER_MAX_DOUBLINGS):
        hi *= 2.0
        if log_ratio(hi) < 0.0:
            break
        lo = hi
    else:
        raise DomainError('empirical_crossover_r0', sigma2, "在搜索范围内未找到交叉点")

    with performance_timer(logger, 'empirical_crossover_r0', sigma2=sigma2):
        r0, info = brentq(log_ratio, lo, hi, xtol=xtol * hi, full_output=True)
    return CrossoverEstimate(r0=float(r0), err_est=xtol * hi, omega0=omega0, sigma2=sigma2,
                             dtau=dtau, iterations=info.iterations)
