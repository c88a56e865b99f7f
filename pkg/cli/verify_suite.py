"""
验收校验套件

每条判据给出测量值、容差、是否通过和耗时；未通过时在 finding 中写明实际观察到的量。
套件：kernels、quadrature、causality、wavezone，all 依次运行全部。
"""

import math
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Dict, List, NamedTuple, Tuple

import numpy as np

from asymptotics import (
    fit_crossover_slope, loglog_fit, precursor_closed_form_A, precursor_delta_part,
    precursor_grid, WaveZoneInput
)
from error_handler.exceptions import FermiError, ValidationError
from greens.kernels import (
    DisorderModel, Regularization, SpacetimeInterval,
    disorder_I, feynman_free_ieps, feynman_kernel, wightman_free, wightman_kernel
)
from logger import get_logger, performance_timer
from quadrature import (
    direct_double_integral, direct_quadruple_integral, eps_extrapolate, integrate_kernel,
    ordered_integral_4d, phase_sum_integral, qmc_ordered_integral, theta, weighted_xi_integral
)
from scenarios import ScenarioEngine, SystemParams, empirical_crossover_r0
from scenarios.scenario_engine import I_PLUS_VANISHING_TOL
from .commands import engine_metadata


logger = get_logger('verify')

# 随机样本的固定种子
KERNEL_SEED = 20240611
QMC_SEED = 7
KERNEL_SAMPLES = 100
PLEMELJ_SAMPLES = 20

# Sokhotski–Plemelj 校验的外推序列
PLEMELJ_REG = Regularization(eps=5e-3, schedule=(8e-2, 4e-2, 2e-2, 1e-2, 5e-3), extrapolation_order=4)
PLEMELJ_WINDOW = (-4.0, 4.0)


def _plemelj_weight(xi):
    xi = np.asarray(xi, dtype=float)
    return np.exp(-xi * xi / 8.0) * (1.0 + 0.3 * xi)


def _json_number(value: float):
    """JSON 不接受 NaN/Inf，写为 null"""
    return value if math.isfinite(value) else None


class Check(NamedTuple):
    measured: float
    tolerance: float
    passed: bool
    finding: str = ''
    details: Dict[str, Any] = {}


@dataclass
class CriterionResult:
    """单条判据的结果"""
    id: str
    description: str
    measured: float
    tolerance: float
    passed: bool
    runtime_s: float
    finding: str = ''
    details: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'id': self.id,
            'description': self.description,
            'measured': _json_number(self.measured),
            'tolerance': _json_number(self.tolerance),
            'passed': self.passed,
            'runtime_s': self.runtime_s,
            'finding': self.finding,
            'details': self.details,
        }


@dataclass
class SuiteReport:
    suite: str
    criteria: List[CriterionResult]
    settings: Dict[str, Any]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.criteria)

    def to_dict(self) -> Dict[str, Any]:
        passed = sum(1 for c in self.criteria if c.passed)
        return {
            'engine': engine_metadata(),
            'suite': self.suite,
            'settings': self.settings,
            'criteria': [c.to_dict() for c in self.criteria],
            'summary': {'total': len(self.criteria), 'passed': passed, 'failed': len(self.criteria) - passed},
            'passed': self.passed,
        }


def _rel(a: complex, b: complex) -> float:
    scale = max(abs(a), abs(b))
    return 0.0 if scale == 0.0 else abs(a - b) / scale


class VerifySuite:
    """按名称运行校验判据"""

    SUITES = {
        'kernels': ('kernels/feynman_even', 'kernels/wightman_hermitian', 'kernels/disorder_even',
                    'kernels/disorder_linear_sigma2', 'kernels/spacelike_imaginary', 'kernels/sokhotski_plemelj'),
        'quadrature': ('quadrature/four_time_reduction', 'quadrature/simplex_partition', 'quadrature/ordered_volume',
                       'quadrature/phase_sum_reduction', 'quadrature/qmc_ordered'),
        'causality': ('causality/delta_switch', 'causality/free_cancellation', 'causality/disorder_residual',
                      'causality/disorder_residual_decay', 'causality/i_plus_vanishing'),
        'wavezone': ('wavezone/disorder_wave_zone_limit', 'wavezone/closed_form',
                     'wavezone/precursor_exponent', 'wavezone/crossover_scaling'),
    }

    def __init__(self, engine: ScenarioEngine, qmc_points: int = 1 << 23):
        self.engine = engine
        self.spec = engine.spec
        self.qmc_points = qmc_points
        self._checks: Dict[str, Tuple[str, Callable[[], Check]]] = {
            'kernels/feynman_even': ("Feynman 传播子对 dt 精确为偶函数", self.check_feynman_even),
            'kernels/wightman_hermitian': ("G⁺(−dt) 与 G⁺(dt)* 逐位相等", self.check_wightman_hermitian),
            'kernels/disorder_even': ("I 核对 dt 精确为偶函数", self.check_disorder_even),
            'kernels/disorder_linear_sigma2': ("I 核对 σ² 线性", self.check_disorder_linear),
            'kernels/spacelike_imaginary': ("类空区间上 ε→0 外推的 I 为纯虚数", self.check_spacelike_imaginary),
            'kernels/sokhotski_plemelj': ("分裂形式与 iε 形式外推一致", self.check_sokhotski_plemelj),
            'quadrature/four_time_reduction': ("四维直接积分与一维约化 |A|² 一致", self.check_four_time_reduction),
            'quadrature/simplex_partition': ("24 个单纯形之和等于方盒积分", self.check_simplex_partition),
            'quadrature/ordered_volume': ("时序约束区域体积", self.check_ordered_volume),
            'quadrature/phase_sum_reduction': ("相位和约化与二维直接积分一致", self.check_phase_sum_reduction),
            'quadrature/qmc_ordered': ("单纯形规则与随机拟蒙特卡罗一致", self.check_qmc_ordered),
            'causality/delta_switch': ("光锥 delta 项在 Δτ = r 处开启", self.check_delta_switch),
            'causality/free_cancellation': ("自由场非因果项严格抵消", self.check_free_cancellation),
            'causality/disorder_residual': ("无序修正留下非零非因果残差", self.check_disorder_residual),
            'causality/disorder_residual_decay': ("无序残差随 ω₀r 衰减", self.check_residual_decay),
            'causality/i_plus_vanishing': ("先兆区 I⁺ 双时间积分为零", self.check_i_plus_vanishing),
            'wavezone/disorder_wave_zone_limit': ("ℐ 与波区极限一致", self.check_wave_zone_limit),
            'wavezone/closed_form': ("先兆振幅闭式与数值积分一致", self.check_closed_form),
            'wavezone/precursor_exponent': ("|A|² 的双对数斜率为 −4", self.check_precursor_exponent),
            'wavezone/crossover_scaling': ("交叉尺度 r₀ 对 σ² 的斜率为 1", self.check_crossover_scaling),
        }

    @classmethod
    def suite_names(cls) -> Tuple[str, ...]:
        return tuple(cls.SUITES) + ('all',)

    def criteria_for(self, suite: str) -> Tuple[str, ...]:
        if suite == 'all':
            return tuple(cid for ids in self.SUITES.values() for cid in ids)
        if suite not in self.SUITES:
            raise ValidationError('suite', f"未知的校验套件: {suite}，可选 {list(self.suite_names())}")
        return self.SUITES[suite]

    def settings(self) -> Dict[str, Any]:
        reg = self.engine.reg
        return {
            'regularization': {'eps': reg.eps, 'schedule': list(reg.schedule),
                               'extrapolation_order': reg.extrapolation_order},
            'quadrature': {'rel_tol': self.spec.rel_tol, 'abs_tol': self.spec.abs_tol,
                           'gauss_nodes': self.spec.gauss_nodes, 'max_gauss_nodes': self.spec.max_gauss_nodes},
            'i_plus_reading': self.engine.options.i_plus_reading,
            'kernel_seed': KERNEL_SEED,
            'qmc_seed': QMC_SEED,
        }

    def run(self, suite: str) -> SuiteReport:
        """运行一个套件

        Raises:
            ValidationError: 未知套件，或外推序列少于 3 个值
        """
        ids = self.criteria_for(suite)
        self.engine.reg.require_schedule(3)
        results = [self.run_criterion(cid) for cid in ids]
        report = SuiteReport(suite=suite, criteria=results, settings=self.settings())
        logger.info("校验套件完成", suite=suite, passed=report.passed,
                    failed=[c.id for c in results if not c.passed])
        return report

    def run_criterion(self, criterion_id: str) -> CriterionResult:
        description, check = self._checks[criterion_id]
        with performance_timer(logger, 'verify', criterion=criterion_id) as timer:
            try:
                outcome = check()
            except FermiError as e:
                outcome = Check(float('nan'), float('nan'), False, f"判据执行失败: {e}", {'error_code': e.error_code})
        return CriterionResult(
            id=criterion_id,
            description=description,
            measured=float(outcome.measured),
            tolerance=float(outcome.tolerance),
            passed=bool(outcome.passed),
            runtime_s=timer.duration,
            finding=outcome.finding,
            details=dict(outcome.details),
        )

    # ------------------------------------------------------------------
    # kernels
    # ------------------------------------------------------------------

    def _kernel_samples(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        rng = np.random.default_rng(KERNEL_SEED)
        dt = rng.uniform(-5.0, 5.0, KERNEL_SAMPLES)
        r = rng.uniform(0.5, 5.0, KERNEL_SAMPLES)
        eps = rng.uniform(1e-4, 1e-2, KERNEL_SAMPLES)
        return dt, r, eps

    def check_feynman_even(self) -> Check:
        worst = 0.0
        for dt, r, eps in zip(*self._kernel_samples()):
            reg = Regularization(eps=float(eps))
            a = feynman_free_ieps(SpacetimeInterval(dt, r), reg)
            b = feynman_free_ieps(SpacetimeInterval(-dt, r), reg)
            worst = max(worst, abs(a - b))
        return Check(worst, 0.0, worst == 0.0)

    def check_wightman_hermitian(self) -> Check:
        worst = 0.0
        for dt, r, eps in zip(*self._kernel_samples()):
            reg = Regularization(eps=float(eps))
            a = wightman_free(SpacetimeInterval(-dt, r), reg)
            b = wightman_free(SpacetimeInterval(dt, r), reg).conjugate()
            worst = max(worst, abs(a - b))
        return Check(worst, 0.0, worst == 0.0)

    def check_disorder_even(self) -> Check:
        worst = 0.0
        dm = DisorderModel(1.0)
        for dt, r, eps in zip(*self._kernel_samples()):
            reg = Regularization(eps=float(eps))
            a = disorder_I(SpacetimeInterval(dt, r), reg, dm)
            b = disorder_I(SpacetimeInterval(-dt, r), reg, dm)
            worst = max(worst, abs(a - b))
        return Check(worst, 0.0, worst == 0.0)

    def check_disorder_linear(self) -> Check:
        worst = 0.0
        for dt, r, eps in zip(*self._kernel_samples()):
            reg = Regularization(eps=float(eps))
            iv = SpacetimeInterval(dt, r)
            single = disorder_I(iv, reg, DisorderModel(0.37))
            double = disorder_I(iv, reg, DisorderModel(0.74))
            worst = max(worst, _rel(double, 2.0 * single))
        return Check(worst, 1e-14, worst <= 1e-14)

    def check_spacelike_imaginary(self) -> Check:
        """外推序列取配置序列的 1/100，远离光锥的样本上截断误差低于判据"""
        reg = self.engine.reg
        fine = Regularization(eps=reg.eps * 1e-2, schedule=tuple(e * 1e-2 for e in reg.schedule),
                              extrapolation_order=reg.extrapolation_order)
        rng = np.random.default_rng(KERNEL_SEED + 1)
        r_values = rng.uniform(1.0, 3.0, KERNEL_SAMPLES)
        fractions = rng.uniform(-0.7, 0.7, KERNEL_SAMPLES)
        dm = DisorderModel(1.0)
        worst = 0.0
        for r, frac in zip(r_values, fractions):
            iv = SpacetimeInterval(frac * r, r)
            limit = eps_extrapolate(lambda e: disorder_I(iv, Regularization(eps=e), dm), fine)
            value = complex(limit.value)
            if value.imag != 0.0:
                worst = max(worst, abs(value.real) / abs(value.imag))
        return Check(worst, 1e-10, worst < 1e-10, details={'schedule': list(fine.schedule)})

    def check_sokhotski_plemelj(self) -> Check:
        rng = np.random.default_rng(KERNEL_SEED + 2)
        lower, upper = PLEMELJ_WINDOW
        worst = 0.0
        for r in rng.uniform(1.0, 3.0, PLEMELJ_SAMPLES):
            split = integrate_kernel(feynman_kernel(r), _plemelj_weight, lower, upper, self.spec)
            ieps = eps_extrapolate(
                lambda e: integrate_kernel(feynman_kernel(r, e), _plemelj_weight, lower, upper, self.spec),
                PLEMELJ_REG)
            worst = max(worst, _rel(split.value, ieps.value))
        return Check(worst, 1e-8, worst <= 1e-8, details={'schedule': list(PLEMELJ_REG.schedule)})

    # ------------------------------------------------------------------
    # quadrature
    # ------------------------------------------------------------------

    def check_four_time_reduction(self) -> Check:
        eps = 1e-2
        worst = 0.0
        rows = []
        for r, dtau in ((2.0, 1.0), (5.0, 1.0), (5.0, 2.0)):
            G = feynman_kernel(r, eps).smooth

            def integrand(t1, t2, t3, t4, G=G):
                phase = np.exp(1j * ((t3 - t4) - (t1 - t2)))
                return phase * np.conj(G(t4 - t3)) * G(t1 - t2)

            direct = direct_quadruple_integral(integrand, (0.0, dtau), self.spec, nodes=32)
            amplitude = weighted_xi_integral(feynman_kernel(r, eps), 1.0, dtau, self.spec)
            p_direct = direct.value / 16.0
            p_reduced = abs(amplitude.value) ** 2 / 16.0
            rel = _rel(p_direct, p_reduced)
            worst = max(worst, rel)
            rows.append({'r': r, 'dtau': dtau, 'direct': p_direct.real, 'reduced': p_reduced, 'rel': rel})
        return Check(worst, 1e-6, worst <= 1e-6, details={'points': rows})

    def check_simplex_partition(self) -> Check:
        def integrand(t1, t2, t3, t4):
            return np.exp(1j * (t1 - 2.0 * t2 + t3)) * np.cos(t4) + t1 * t2

        window = (0.0, 1.5)
        ordered = ordered_integral_4d(integrand, [], *window, self.spec)
        box = direct_quadruple_integral(integrand, window, self.spec, nodes=self.spec.gauss_nodes)
        rel = _rel(ordered.value, box.value)
        return Check(rel, 1e-10, rel <= 1e-10)

    def check_ordered_volume(self) -> Check:
        def one(t1, t2, t3, t4):
            return np.ones_like(t1, dtype=complex)

        T = 1.7
        half = ordered_integral_4d(one, [theta(2, 1)], 0.0, T, self.spec)
        chain = ordered_integral_4d(one, [theta(2, 1), theta(3, 2), theta(4, 3)], 0.0, T, self.spec)
        worst = max(_rel(half.value, T ** 4 / 2.0), _rel(chain.value, T ** 4 / 24.0))
        return Check(worst, 1e-13, worst <= 1e-13)

    def check_phase_sum_reduction(self) -> Check:
        kernel = wightman_kernel(3.0, 0.0)
        worst = 0.0
        for sign in (1, -1):
            reduced = phase_sum_integral(kernel, 1.0, 0.0, 1.0, sign, self.spec)

            def integrand(u, v, sign=sign):
                return np.exp(sign * 1j * (u + v)) * kernel.smooth(u - v)

            direct = direct_double_integral(integrand, (0.0, 1.0), self.spec, nodes=32)
            worst = max(worst, _rel(reduced.value, direct.value))
        return Check(worst, 1e-9, worst <= 1e-9)

    def check_qmc_ordered(self) -> Check:
        W = wightman_kernel(3.0, 0.0).smooth

        def integrand(t1, t2, t3, t4):
            return np.exp(1j * ((t3 - t4) - (t1 - t2))) * W(t1 - t2) * W(t3 - t4)

        constraints = [theta(2, 4), theta(3, 4)]
        window = (0.0, 1.5)
        rule = ordered_integral_4d(integrand, constraints, *window, self.spec)
        sampled = qmc_ordered_integral(integrand, constraints, window, points=self.qmc_points, seed=QMC_SEED)
        diff = abs(rule.value - sampled.value)
        rel = _rel(rule.value, sampled.value)
        passed = rel <= 1e-4 or diff <= sampled.err_est
        return Check(rel, 1e-4, passed, details={'abs_diff': diff, 'qmc_err_est': sampled.err_est,
                                                 'points': sampled.evaluations})

    # ------------------------------------------------------------------
    # causality
    # ------------------------------------------------------------------

    def check_delta_switch(self) -> Check:
        r = 5.0
        below = self.engine.amplitude_free_A(SystemParams(omega0=1.0, r=r, tau=r * (1.0 - 1e-3)))
        above_params = SystemParams(omega0=1.0, r=r, tau=r * (1.0 + 1e-3))
        above = self.engine.amplitude_free_A(above_params)
        expected = precursor_delta_part(1.0, r, above_params.dtau)
        rel = _rel(above.delta.value, expected)
        measured = max(abs(below.delta.value), rel)
        passed = below.delta.value == 0 and rel <= 1e-10
        return Check(measured, 1e-10, passed,
                     details={'below': abs(below.delta.value), 'above': above.delta.value.real,
                              'expected': expected})

    def _free_residual(self, params: SystemParams) -> Tuple[complex, float]:
        bd = self.engine.scenario3_free(params).breakdown
        return bd['noncausal_residual_free'].value, bd['largest_constituent'].value.real

    def check_free_cancellation(self) -> Check:
        worst = 0.0
        rows = []
        for omega0, r, dtau in ((1.0, 2.0, 1.0), (1.0, 3.0, 1.5), (2.0, 4.0, 1.2)):
            residual, largest = self._free_residual(SystemParams(omega0=omega0, r=r, tau=dtau))
            rel = abs(residual) / largest if largest > 0.0 else abs(residual)
            worst = max(worst, rel)
            rows.append({'omega0': omega0, 'r': r, 'dtau': dtau, 'relative_residual': rel})
        return Check(worst, 1e-8, worst < 1e-8, details={'points': rows})

    def check_disorder_residual(self) -> Check:
        params = SystemParams(omega0=1.0, r=3.0, tau=1.5, sigma2=0.1)
        free, _ = self._free_residual(params.replace(sigma2=0.0))
        bd = self.engine.scenario3_disorder(params).breakdown
        disorder = abs(bd['noncausal_residual_disorder'].value)
        tolerance = 10.0 * abs(free)
        return Check(disorder, tolerance, disorder > tolerance,
                     details={'free_residual': abs(free), 'err_est': bd['noncausal_residual_disorder'].err_est})

    def check_residual_decay(self) -> Check:
        values = {}
        for r in (5.0, 100.0):
            bd = self.engine.scenario3_disorder(SystemParams(omega0=1.0, r=r, tau=1.5, sigma2=0.1)).breakdown
            values[r] = abs(bd['noncausal_residual_disorder'].value)
        ratio = values[100.0] / values[5.0] if values[5.0] > 0.0 else float('inf')
        return Check(ratio, 1.0, ratio < 1.0, details={'residual_r5': values[5.0], 'residual_r100': values[100.0]})

    def check_i_plus_vanishing(self) -> Check:
        params = SystemParams(omega0=1.0, r=3.0, tau=1.5, sigma2=0.1)
        minus, plus = self.engine.i_plus_phase_sums(params)
        largest = max(abs(minus.value), abs(plus.value))
        finding = ''
        details: Dict[str, Any] = {'reading': self.engine.options.i_plus_reading}
        if largest > I_PLUS_VANISHING_TOL:
            other = 'continued' if self.engine.options.i_plus_reading == 'restricted' else 'restricted'
            alt = ScenarioEngine(self.engine.reg, self.spec,
                                 replace(self.engine.options, i_plus_reading=other))
            alt_minus, alt_plus = alt.i_plus_phase_sums(params)
            alt_largest = max(abs(alt_minus.value), abs(alt_plus.value))
            details[f'{other}_magnitude'] = alt_largest
            finding = (f"{self.engine.options.i_plus_reading} 读法下 |S±[I⁺]| = {largest:.3e}；"
                       f"{other} 读法下为 {alt_largest:.3e}")
        return Check(largest, I_PLUS_VANISHING_TOL, largest <= I_PLUS_VANISHING_TOL, finding, details)

    # ------------------------------------------------------------------
    # wavezone
    # ------------------------------------------------------------------

    def check_wave_zone_limit(self) -> Check:
        worst = 0.0
        rows = []
        threshold = self.engine.options.wave_zone_threshold
        for dtau in (1.0, 2.0, 5.0):
            point = WaveZoneInput(omega0=1.0, sigma2=1.0, dtau=dtau, r=100.0)
            params = SystemParams(omega0=point.omega0, r=point.r, tau=point.dtau, sigma2=point.sigma2)
            numeric = self.engine.disorder_integral(params).value
            limit = point.disorder_limit()
            rel = abs(numeric - limit) / abs(limit)
            worst = max(worst, rel)
            rows.append({'dtau': dtau, 'numeric_abs': abs(numeric), 'limit_abs': abs(limit), 'rel': rel,
                         'in_wave_zone': point.in_wave_zone(threshold)})
        finding = ''
        if worst > 0.02:
            far = abs(self.engine.disorder_integral(SystemParams(omega0=1.0, r=200.0, tau=1.0, sigma2=1.0)).value)
            slope = loglog_fit([100.0, 200.0], [rows[0]['numeric_abs'], far]).slope
            finding = (f"r=100 处 |ℐ| ≈ {rows[0]['numeric_abs']:.2e}，极限式给出 {rows[0]['limit_abs']:.2e}；"
                       f"固定 Δτ 时 |ℐ| 随 r 的双对数斜率为 {slope:.2f}，不趋于常数")
        return Check(worst, 0.02, worst <= 0.02, finding, {'points': rows})

    def check_closed_form(self) -> Check:
        worst = 0.0
        for dtau in (1.0, 2.0, 4.0):
            for y, closed in precursor_grid(1.0, (5.0, 20.0, 60.0), dtau):
                numeric = self.engine.amplitude_free_A(SystemParams(omega0=1.0, r=y, tau=dtau)).pv.value
                worst = max(worst, _rel(numeric, closed))
        # 单独核对一个非单位 ω₀ 的点
        numeric = self.engine.amplitude_free_A(SystemParams(omega0=2.0, r=2.5, tau=1.0)).pv.value
        worst = max(worst, _rel(numeric, precursor_closed_form_A(2.0, 2.5, 1.0)))
        return Check(worst, 1e-9, worst <= 1e-9)

    def check_precursor_exponent(self) -> Check:
        r_values = (30.0, 100.0, 300.0)
        amp_sq = []
        for r in r_values:
            result = self.engine.scenario1_free(SystemParams(omega0=1.0, r=r, tau=2.0))
            amp_sq.append(result.breakdown['free_amplitude_sq'].value.real)
        fit = loglog_fit(r_values, amp_sq)
        deviation = abs(fit.slope + 4.0)
        return Check(fit.slope, 0.3, deviation <= 0.3, details={'fit': fit.to_dict(), 'amplitude_sq': amp_sq})

    def check_crossover_scaling(self) -> Check:
        sigma2_values = [float(s) for s in np.geomspace(100.0, 1000.0, 4)]
        estimates = [empirical_crossover_r0(1.0, s, 1.0, engine=self.engine) for s in sigma2_values]
        fit = fit_crossover_slope(sigma2_values, [e.r0 for e in estimates])
        passed = abs(fit.slope - 1.0) <= 0.1
        finding = ''
        if not passed:
            finding = (f"经验 r₀ 对 σ² 的双对数斜率为 {fit.slope:.3f}，"
                       f"σ²={sigma2_values[0]:g} 时 r₀ = {estimates[0].r0:.3f}，"
                       f"而 σ²ω₀² = {sigma2_values[0]:g}")
        return Check(fit.slope, 0.1, passed, finding,
                     {'fit': fit.to_dict(), 'estimates': [e.to_dict() for e in estimates]})


def run_verify(engine: ScenarioEngine, suite: str) -> SuiteReport:
    return VerifySuite(engine).run(suite)
