"""
三种实验场景的转移概率（λ⁴ 阶，自由场与 O(σ²) 无序平均）

所有核函数都在无量纲变量上求值：时间以 1/ω₀ 为单位，x = ω₀dt, y = ω₀r, s = σ²ω₀³。
两个时间积分乘一个核的组合在这一标度下不变，因此这里的振幅、概率直接就是物理值。

先兆区（Δτ < r）内所有核在积分窗口内都是类空的，ε → 0 的逐点极限可以直接使用；
光锥区（Δτ ≥ r）内 G 和 G⁺ 使用精确的主值 + delta 分裂形式，I、I⁺ 以及四维积分中的核
只能用有限 eps 求值，对应分项带 'regulated' 标记。
"""

from dataclasses import asdict, dataclass
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from config import config_manager as default_config_manager, ConfigManager, ScenarioConfig
from error_handler.exceptions import ValidationError
from greens.kernels import (
    DisorderModel, Regularization, SplitKernel,
    feynman_kernel, wightman_kernel, disorder_kernel, disorder_plus_kernel
)
from logger import get_logger, performance_timer
from quadrature import (
    IntegralResult, QuadratureSpec, theta,
    weighted_xi_integral, phase_sum_integral, ordered_pattern_integrals
)
from quadrature.ordered import coarse_nodes, fine_coarse_result
from .models import Regime, Scenario, ScenarioResult, SystemParams, TermBreakdown, TermValue


logger = get_logger('scenarios')

I_PLUS_READINGS = ('restricted', 'continued')

# 先兆区内 I⁺ 相位和视为零的绝对阈值
I_PLUS_VANISHING_TOL = 1e-10

# 四维积分的 θ 模式（θ(a, b) 表示 θ(τa − τb)）
GROUP_A = [[theta(2, 4), theta(3, 4)], [theta(1, 3), theta(4, 3)]]
GROUP_B = [[theta(2, 4), theta(4, 3)], [theta(1, 3), theta(3, 4)]]
GROUP_C = [[theta(2, 4), theta(2, 3)], [theta(3, 4), theta(2, 3)],
           [theta(4, 2), theta(4, 1)], [theta(1, 2), theta(4, 1)]]
UNCONSTRAINED = [[]]

# r = 0 的 ΔP 分组
R0_GROUP_13_24 = [[theta(2, 4), theta(2, 3)], [theta(4, 3), theta(2, 4), theta(2, 3)]]
R0_GROUP_12_34 = [[theta(2, 4), theta(2, 3)]]
R0_GROUP_14_23 = [[theta(4, 3), theta(2, 4), theta(2, 3)]]


@dataclass(frozen=True)
class EngineOptions:
    """场景引擎选项

    Attributes:
        i_plus_reading: I⁺ 的读法，'continued'（默认）或 'restricted'
        include_r_independent: 是否计算与 r 无关的诊断项
        wave_zone_threshold: 波区判据 ω₀r ≥ 阈值
        exponent_grid: 拟合压制指数所用的 ω₀r 网格
    """
    i_plus_reading: str = 'continued'
    include_r_independent: bool = False
    wave_zone_threshold: float = 50.0
    exponent_grid: Tuple[float, ...] = (30.0, 100.0, 300.0)

    def __post_init__(self):
        object.__setattr__(self, 'exponent_grid', tuple(float(v) for v in self.exponent_grid))
        if self.i_plus_reading not in I_PLUS_READINGS:
            raise ValidationError('i_plus_reading', f"未知的 I⁺ 读法: {self.i_plus_reading}")
        if not self.wave_zone_threshold > 0.0:
            raise ValidationError('wave_zone_threshold', "波区阈值必须为正数")
        if any(not v > 0.0 for v in self.exponent_grid):
            raise ValidationError('exponent_grid', "指数拟合网格必须全为正数")

    @classmethod
    def from_config(cls, scenario: ScenarioConfig) -> "EngineOptions":
        return cls(
            i_plus_reading=scenario.i_plus_reading,
            include_r_independent=scenario.include_r_independent,
            wave_zone_threshold=scenario.wave_zone_threshold,
            exponent_grid=tuple(scenario.exponent_grid),
        )


@dataclass(frozen=True)
class Amplitude:
    """自由振幅 A 及其主值部分与 delta 部分"""
    value: IntegralResult
    pv: IntegralResult
    delta: IntegralResult


def _zero_kernel(x):
    return np.zeros_like(np.asarray(x, dtype=float), dtype=complex)


def _product(a: IntegralResult, b: IntegralResult) -> Tuple[complex, float]:
    """两个积分结果的乘积及其一阶误差传播"""
    value = complex(a.value) * complex(b.value)
    err = abs(a.value) * b.err_est + abs(b.value) * a.err_est + a.err_est * b.err_est
    return value, err


def _flags(*results: IntegralResult) -> Tuple[str, ...]:
    flags = []
    for result in results:
        for flag in result.flags:
            if flag not in flags:
                flags.append(flag)
    return tuple(flags)


class ScenarioEngine:
    """场景引擎

    持有正则化参数、积分设置和场景选项；所有方法对给定输入是纯函数，
    可以在多个线程中共享同一个实例。
    """

    def __init__(self, reg: Optional[Regularization] = None, spec: Optional[QuadratureSpec] = None,
                 options: Optional[EngineOptions] = None):
        self.reg = reg or Regularization()
        self.spec = spec or QuadratureSpec()
        self.options = options or EngineOptions()

    @classmethod
    def from_config(cls, manager: Optional[ConfigManager] = None) -> "ScenarioEngine":
        """由配置管理器构建引擎"""
        manager = manager or default_config_manager
        reg_cfg = manager.regularization
        reg = Regularization(
            eps=reg_cfg.eps,
            schedule=tuple(reg_cfg.schedule),
            extrapolation_order=reg_cfg.extrapolation_order,
        )
        spec = QuadratureSpec(**asdict(manager.quadrature))
        return cls(reg, spec, EngineOptions.from_config(manager.scenario))

    def with_regularization(self, reg: Regularization) -> "ScenarioEngine":
        return ScenarioEngine(reg, self.spec, self.options)

    # ------------------------------------------------------------------
    # 公共构件
    # ------------------------------------------------------------------

    def _scaled_eps(self, params: SystemParams) -> float:
        return self.reg.eps * params.omega0

    def _scaled_feynman_eps(self, params: SystemParams) -> float:
        # 统一 iε 形式 dt² − r² − iε 中 ε 为时间平方量纲
        return self.reg.eps * params.omega0 ** 2

    def _regulated(self, params: SystemParams, term: str) -> Tuple[str, ...]:
        if params.regime() is Regime.PRECURSOR:
            return ()
        logger.info("光锥区使用有限 eps 正则化", term=term, eps=self.reg.eps,
                    omega0_r=params.omega0_r, omega0_dtau=params.omega0_dtau)
        return ('regulated',)

    def _wightman(self, params: SystemParams) -> SplitKernel:
        """G⁺ 核：先兆区为 ε → 0 逐点极限，光锥区为分裂形式"""
        y = params.omega0_r
        if params.regime() is Regime.PRECURSOR:
            return wightman_kernel(y, 0.0)
        return wightman_kernel(y)

    def _disorder_eps(self, params: SystemParams) -> float:
        return 0.0 if params.regime() is Regime.PRECURSOR else self._scaled_eps(params)

    def amplitude_free_A(self, params: SystemParams) -> Amplitude:
        """A = ∫(Δτ − |ξ|)e^{−iω₀ξ}G₀(ξ, r)dξ，分别给出主值部分和 delta 部分"""
        split = feynman_kernel(params.omega0_r)
        pv_kernel = SplitKernel(smooth=split.smooth, pv_poles=split.pv_poles, label='feynman_pv')
        delta_kernel = SplitKernel(smooth=_zero_kernel, deltas=split.deltas, label='feynman_delta')
        pv = weighted_xi_integral(pv_kernel, 1.0, params.omega0_dtau, self.spec)
        delta = weighted_xi_integral(delta_kernel, 1.0, params.omega0_dtau, self.spec)
        return Amplitude(value=pv + delta, pv=pv, delta=delta)

    def disorder_integral(self, params: SystemParams) -> IntegralResult:
        """ℐ = ∫∫ e^{−iω₀(τ₁−τ₂)} I(τ₁ − τ₂; r)"""
        eps = self._disorder_eps(params)
        kernel = disorder_kernel(params.omega0_r, DisorderModel(params.s_disorder), eps)
        result = weighted_xi_integral(kernel, 1.0, params.omega0_dtau, self.spec)
        return result.with_flags(*self._regulated(params, 'disorder_integral_I'))

    def wightman_phase_sums(self, params: SystemParams) -> Tuple[IntegralResult, IntegralResult]:
        """(S⁻[G⁺], S⁺[G⁺])，S^± = ∫∫ e^{±iω₀(u+v)} G⁺(u − v; r)"""
        kernel = self._wightman(params)
        t0, t1 = params.omega0 * params.tau0, params.omega0 * params.tau
        return (phase_sum_integral(kernel, 1.0, t0, t1, -1, self.spec),
                phase_sum_integral(kernel, 1.0, t0, t1, 1, self.spec))

    def i_plus_phase_sums(self, params: SystemParams) -> Tuple[IntegralResult, IntegralResult]:
        """(S⁻[I⁺], S⁺[I⁺])"""
        eps = self._disorder_eps(params)
        kernel = disorder_plus_kernel(params.omega0_r, DisorderModel(params.s_disorder), eps,
                                      self.options.i_plus_reading)
        t0, t1 = params.omega0 * params.tau0, params.omega0 * params.tau
        flags = self._regulated(params, 'i_plus_phase_sum')
        return (phase_sum_integral(kernel, 1.0, t0, t1, -1, self.spec).with_flags(*flags),
                phase_sum_integral(kernel, 1.0, t0, t1, 1, self.spec).with_flags(*flags))

    def _coincident_factor(self, kernel: SplitKernel, params: SystemParams, sign: int) -> IntegralResult:
        """r = 0 的单原子双时间积分，相位 e^{−sign·iω₀ξ}（有限 eps）"""
        return weighted_xi_integral(kernel, float(sign), params.omega0_dtau, self.spec).with_flags('regulated')

    # ------------------------------------------------------------------
    # 场景 1：|φf⟩
    # ------------------------------------------------------------------

    def scenario1_free(self, params: SystemParams) -> ScenarioResult:
        """P = (λ⁴/16)|A|²"""
        with performance_timer(logger, 'scenario1_free', omega0_r=params.omega0_r):
            breakdown = self._scenario1_free_terms(params)
        return ScenarioResult.assemble(params, Scenario.PHI_F, breakdown,
                                       self.options.wave_zone_threshold, disorder=False)

    def _scenario1_free_terms(self, params: SystemParams) -> TermBreakdown:
        amp = self.amplitude_free_A(params)
        c = params.coupling_prefactor
        pv, d = complex(amp.pv.value), complex(amp.delta.value)
        e_pv, e_d = amp.pv.err_est, amp.delta.err_est

        breakdown = TermBreakdown()
        breakdown.add('free_pv_part', TermValue(
            complex(c * abs(pv) ** 2), c * (2.0 * abs(pv) * e_pv + e_pv ** 2), True, amp.pv.flags))
        breakdown.add('free_delta_part', TermValue(
            complex(c * abs(d) ** 2), c * (2.0 * abs(d) * e_d + e_d ** 2), True, amp.delta.flags))
        breakdown.add('free_cross_part', TermValue(
            complex(2.0 * c * (pv.conjugate() * d).real), 2.0 * c * (abs(pv) * e_d + abs(d) * e_pv + e_pv * e_d),
            True, _flags(amp.pv, amp.delta)))
        a, ea = complex(amp.value.value), amp.value.err_est
        breakdown.add('free_amplitude_sq', TermValue(
            complex(abs(a) ** 2), 2.0 * abs(a) * ea + ea ** 2, False, amp.value.flags))
        breakdown.add('amplitude_pv', amp.pv, False)
        breakdown.add('amplitude_delta', amp.delta, False)
        return breakdown

    def scenario1_disorder(self, params: SystemParams) -> ScenarioResult:
        """P = (λ⁴/16)(|A|² + 2Re(A*ℐ))"""
        with performance_timer(logger, 'scenario1_disorder', omega0_r=params.omega0_r):
            breakdown = self._scenario1_disorder_terms(params)
        return ScenarioResult.assemble(params, Scenario.PHI_F, breakdown,
                                       self.options.wave_zone_threshold, disorder=True)

    def _scenario1_disorder_terms(self, params: SystemParams) -> TermBreakdown:
        breakdown = self._scenario1_free_terms(params)
        c = params.coupling_prefactor
        pv, delta = breakdown['amplitude_pv'], breakdown['amplitude_delta']
        a = pv.value + delta.value
        ea = pv.err_est + delta.err_est
        integral = self.disorder_integral(params)
        i_val, ei = complex(integral.value), integral.err_est
        breakdown.add('disorder_cross_G0_I', TermValue(
            complex(2.0 * c * (a.conjugate() * i_val).real),
            2.0 * c * (abs(a) * ei + abs(i_val) * ea + ea * ei),
            True, integral.flags))
        breakdown.add('disorder_integral_I', integral, False)
        return breakdown

    # ------------------------------------------------------------------
    # 场景 2：|ψf⟩
    # ------------------------------------------------------------------

    def scenario2_free(self, params: SystemParams) -> ScenarioResult:
        """场景 1 的项 + r 相关的 G⁺G⁺ 配对（+ 可选的 r 无关配对）"""
        with performance_timer(logger, 'scenario2_free', omega0_r=params.omega0_r):
            breakdown = self._scenario1_free_terms(params)
            wightman = self.wightman_phase_sums(params)
            self._add_wightman_pair(breakdown, params, wightman)
        return ScenarioResult.assemble(params, Scenario.PSI_F, breakdown,
                                       self.options.wave_zone_threshold, disorder=False)

    def _add_wightman_pair(self, breakdown: TermBreakdown, params: SystemParams,
                           wightman: Tuple[IntegralResult, IntegralResult]) -> None:
        c = params.coupling_prefactor
        s_minus, s_plus = wightman
        value, err = _product(s_minus, s_plus)
        breakdown.add('wightman_pair_r', TermValue(c * value, c * err, True, _flags(s_minus, s_plus)))
        if self.options.include_r_independent:
            w0 = wightman_kernel(0.0, self._scaled_eps(params))
            plus = self._coincident_factor(w0, params, 1)
            minus = self._coincident_factor(w0, params, -1)
            value, err = _product(plus, minus)
            breakdown.add('r_independent', TermValue(c * value, c * err, False, _flags(plus, minus)))

    def scenario2_disorder(self, params: SystemParams) -> ScenarioResult:
        """场景 2 加上 G₀*I、G₀I* 以及 G⁺I⁺ 交叉项"""
        with performance_timer(logger, 'scenario2_disorder', omega0_r=params.omega0_r):
            breakdown = self._scenario2_disorder_terms(params)
        return ScenarioResult.assemble(params, Scenario.PSI_F, breakdown,
                                       self.options.wave_zone_threshold, disorder=True)

    def _scenario2_disorder_terms(self, params: SystemParams) -> TermBreakdown:
        breakdown = self._scenario1_disorder_terms(params)
        wightman = self.wightman_phase_sums(params)
        self._add_wightman_pair(breakdown, params, wightman)

        c = params.coupling_prefactor
        s_minus, s_plus = wightman
        ip_minus, ip_plus = self.i_plus_phase_sums(params)
        v1, e1 = _product(s_minus, ip_plus)
        v2, e2 = _product(s_plus, ip_minus)
        flags = list(_flags(s_minus, s_plus, ip_minus, ip_plus))
        if params.regime() is Regime.PRECURSOR:
            largest = max(abs(ip_minus.value), abs(ip_plus.value))
            if largest > I_PLUS_VANISHING_TOL:
                flags.append('i_plus_nonvanishing')
                logger.info("先兆区 I⁺ 双时间积分不为零", magnitude=largest,
                            reading=self.options.i_plus_reading, omega0_r=params.omega0_r)
        breakdown.add('disorder_wightman_I_plus', TermValue(c * (v1 + v2), c * (e1 + e2), True, tuple(flags)))
        breakdown.add('i_plus_phase_sum_pos', ip_plus, False)
        breakdown.add('i_plus_phase_sum_neg', ip_minus, False)

        if self.options.include_r_independent:
            eps = self._scaled_eps(params)
            w0 = wightman_kernel(0.0, eps)
            ip0 = disorder_plus_kernel(0.0, DisorderModel(params.s_disorder), eps, self.options.i_plus_reading)
            w_plus, w_minus = self._coincident_factor(w0, params, 1), self._coincident_factor(w0, params, -1)
            i_plus, i_minus = self._coincident_factor(ip0, params, 1), self._coincident_factor(ip0, params, -1)
            v1, e1 = _product(w_plus, i_minus)
            v2, e2 = _product(w_minus, i_plus)
            breakdown.add('disorder_r_independent_I_plus', TermValue(
                c * (v1 + v2), c * (e1 + e2), False, _flags(w_plus, w_minus, i_plus, i_minus)))
        return breakdown

    # ------------------------------------------------------------------
    # 场景 3：|Φf⟩
    # ------------------------------------------------------------------

    def _four_time_kernels(self, params: SystemParams) -> Dict[str, Callable]:
        y = params.omega0_r
        if params.regime() is Regime.PRECURSOR:
            w = wightman_kernel(y, 0.0).smooth
            g = feynman_kernel(y).smooth
        else:
            eps = self._scaled_eps(params)
            w = wightman_kernel(y, eps).smooth
            g = feynman_kernel(y, self._scaled_feynman_eps(params)).smooth
        eps_i = self._disorder_eps(params)
        dm = DisorderModel(params.s_disorder)
        return {
            'W': w,
            'G': g,
            'I': disorder_kernel(y, dm, eps_i).smooth,
            'Ip': disorder_plus_kernel(y, dm, eps_i, self.options.i_plus_reading).smooth,
        }

    @staticmethod
    def _four_time_integrand(kernels: Dict[str, Callable], disorder: bool) -> Callable:
        """四维被积函数，各分量共享相位 e^{iω₀((τ₃−τ₄)−(τ₁−τ₂))}

        分量顺序：0 组 A，1 组 B，2 组 C，3 项 (i)，4 项 (ii)；disorder 时 5..9 为对应的 O(σ²) 分量。
        """
        W, G, I, Ip = kernels['W'], kernels['G'], kernels['I'], kernels['Ip']

        def integrand(t1, t2, t3, t4):
            phase = np.exp(1j * ((t3 - t4) - (t1 - t2)))
            w12, w34, w43 = W(t1 - t2), W(t3 - t4), W(t4 - t3)
            w14, w23, w41, w32 = W(t1 - t4), W(t2 - t3), W(t4 - t1), W(t3 - t2)
            g12, g43c = G(t1 - t2), np.conj(G(t4 - t3))
            rows = [w12 * w34, w12 * w43, w14 * w23, g43c * g12, w41 * w32]
            if disorder:
                p12, p34, p43 = Ip(t1 - t2), Ip(t3 - t4), Ip(t4 - t3)
                p14, p23, p41, p32 = Ip(t1 - t4), Ip(t2 - t3), Ip(t4 - t1), Ip(t3 - t2)
                rows += [
                    w12 * p34 + p12 * w34,
                    w12 * p43 + p12 * w43,
                    w14 * p23 + p14 * w23,
                    g43c * I(t1 - t2) + g12 * np.conj(I(t4 - t3)),
                    w41 * p32 + w32 * p41,
                ]
            return np.stack(rows) * phase

        return integrand

    def four_time_terms(self, params: SystemParams, disorder: bool) -> Dict[str, IntegralResult]:
        """场景 3 的全部四维积分（不含 λ⁴/16 前因子）

        同一组单纯形节点用于所有分量，自由场的非因果项因此按节点逐个抵消。
        窗口取 [0, ω₀Δτ]：被积函数只依赖时间差。
        """
        nodes = self.spec.nodes_for(params.omega0_dtau)
        patterns = {
            'A': (0, GROUP_A), 'B': (1, GROUP_B), 'C': (2, GROUP_C),
            'term_i': (3, UNCONSTRAINED), 'term_ii': (4, UNCONSTRAINED),
        }
        if disorder:
            patterns.update({
                'A_sigma': (5, GROUP_A), 'B_sigma': (6, GROUP_B), 'C_sigma': (7, GROUP_C),
                'term_i_sigma': (8, UNCONSTRAINED), 'term_ii_sigma': (9, UNCONSTRAINED),
            })
        integrand = self._four_time_integrand(self._four_time_kernels(params), disorder)
        raw = ordered_pattern_integrals(integrand, patterns, 0.0, params.omega0_dtau, nodes)
        flags = self._regulated(params, 'four_time_terms')
        evaluations = 24 * (nodes ** 4 + coarse_nodes(nodes) ** 4)
        terms = {name: fine_coarse_result(fine, coarse, evaluations, self.spec, flags)
                 for name, (fine, coarse) in raw.items()}
        unresolved = [name for name, term in terms.items() if not term.converged]
        if unresolved:
            logger.warning("四维积分细/粗网格之差超过容差", terms=unresolved, nodes=nodes,
                           omega0_dtau=params.omega0_dtau)
        return terms

    def scenario3_free(self, params: SystemParams) -> ScenarioResult:
        """场景 2 的项 + ΔP 中 r 相关的三组四维积分"""
        with performance_timer(logger, 'scenario3_free', omega0_r=params.omega0_r):
            breakdown = self._scenario1_free_terms(params)
            self._add_wightman_pair(breakdown, params, self.wightman_phase_sums(params))
            terms = self.four_time_terms(params, disorder=False)
            self._add_delta_p(breakdown, params, terms, disorder=False)
        return ScenarioResult.assemble(params, Scenario.BIG_PHI_F, breakdown,
                                       self.options.wave_zone_threshold, disorder=False)

    def scenario3_disorder(self, params: SystemParams) -> ScenarioResult:
        """场景 3 加上每个 G⁺ 配对按 G₀⁺G₀⁺ + G₀⁺I⁺ + I⁺G₀⁺ 展开的 O(σ²) 部分"""
        with performance_timer(logger, 'scenario3_disorder', omega0_r=params.omega0_r):
            breakdown = self._scenario2_disorder_terms(params)
            terms = self.four_time_terms(params, disorder=True)
            self._add_delta_p(breakdown, params, terms, disorder=True)
        return ScenarioResult.assemble(params, Scenario.BIG_PHI_F, breakdown,
                                       self.options.wave_zone_threshold, disorder=True)

    def _add_delta_p(self, breakdown: TermBreakdown, params: SystemParams,
                     terms: Dict[str, IntegralResult], disorder: bool) -> None:
        c = params.coupling_prefactor
        groups = [terms['A'].scaled(-c), terms['B'].scaled(-c), terms['C'].scaled(-c)]
        delta_p = groups[0] + groups[1] + groups[2]
        term_i = terms['term_i'].scaled(c)
        term_ii = terms['term_ii'].scaled(c)

        # 项 (i)(ii) 的一维约化与四维结果之差计入误差
        amp_sq = breakdown['free_amplitude_sq']
        discrepancy = abs(term_i.value - c * amp_sq.value) + abs(term_ii.value - breakdown['wightman_pair_r'].value)
        breakdown.add('deltaP_groups', TermValue(
            complex(delta_p.value), delta_p.err_est + discrepancy, True, delta_p.flags))
        for label, group in zip(('deltaP_group_A', 'deltaP_group_B', 'deltaP_group_C'), groups):
            breakdown.add(label, group, False)

        residual_free = term_i + term_ii + delta_p
        breakdown.add('noncausal_residual_free', residual_free, False)
        constituents = [term_i, term_ii] + groups
        residual = residual_free

        if disorder:
            groups_s = [terms['A_sigma'].scaled(-c), terms['B_sigma'].scaled(-c), terms['C_sigma'].scaled(-c)]
            delta_p_s = groups_s[0] + groups_s[1] + groups_s[2]
            term_i_s = terms['term_i_sigma'].scaled(c)
            term_ii_s = terms['term_ii_sigma'].scaled(c)
            discrepancy = (abs(term_i_s.value - breakdown['disorder_cross_G0_I'].value)
                           + abs(term_ii_s.value - breakdown['disorder_wightman_I_plus'].value))
            breakdown.add('deltaP_disorder', TermValue(
                complex(delta_p_s.value), delta_p_s.err_est + discrepancy, True, delta_p_s.flags))
            residual_disorder = term_i_s + term_ii_s + delta_p_s
            breakdown.add('noncausal_residual_disorder', residual_disorder, False)
            constituents += [term_i_s, term_ii_s] + groups_s
            residual = residual + residual_disorder

        breakdown.add('noncausal_residual', residual, False)
        largest = max(abs(t.value) for t in constituents)
        breakdown.add('largest_constituent', TermValue(complex(largest), 0.0, False))

        if self.options.include_r_independent:
            self._add_r_independent_three(breakdown, params)

    def _add_r_independent_three(self, breakdown: TermBreakdown, params: SystemParams) -> None:
        """单原子概率 P(μ) 与 ΔP 中 r = 0 的分组（有限 eps，仅作诊断）"""
        eps = self._scaled_eps(params)
        w0 = wightman_kernel(0.0, eps)
        single = self._coincident_factor(w0, params, 1).scaled(params.lam ** 2 / 4.0)
        breakdown.add('r_independent_single_atom', single, False)

        W = w0.smooth
        G = feynman_kernel(0.0, self._scaled_feynman_eps(params)).smooth

        def integrand(t1, t2, t3, t4):
            phase = np.exp(1j * ((t3 - t4) - (t1 - t2)))
            return np.stack([
                W(t1 - t3) * W(t2 - t4),
                W(t1 - t2) * G(t3 - t4),
                W(t1 - t4) * W(t2 - t3),
            ]) * phase

        patterns = {'13_24': (0, R0_GROUP_13_24), '12_34': (1, R0_GROUP_12_34), '14_23': (2, R0_GROUP_14_23)}
        nodes = self.spec.max_gauss_nodes
        raw = ordered_pattern_integrals(integrand, patterns, 0.0, params.omega0_dtau, nodes)
        fine = sum(v[0] for v in raw.values())
        coarse = sum(v[1] for v in raw.values())
        c = params.coupling_prefactor
        # 加上复共轭
        value = -c * 2.0 * fine.real
        err = c * 2.0 * abs(fine.real - coarse.real)
        breakdown.add('deltaP_r_independent', TermValue(complex(value), err, False, ('regulated',)))

    # ------------------------------------------------------------------

    def evaluate(self, params: SystemParams, scenario, disorder: bool) -> ScenarioResult:
        """按场景编号和是否含无序分派"""
        scenario = Scenario.parse(scenario)
        dispatch = {
            (Scenario.PHI_F, False): self.scenario1_free,
            (Scenario.PHI_F, True): self.scenario1_disorder,
            (Scenario.PSI_F, False): self.scenario2_free,
            (Scenario.PSI_F, True): self.scenario2_disorder,
            (Scenario.BIG_PHI_F, False): self.scenario3_free,
            (Scenario.BIG_PHI_F, True): self.scenario3_disorder,
        }
        return dispatch[(scenario, bool(disorder))](params)


_default_engine: Optional[ScenarioEngine] = None


def default_engine() -> ScenarioEngine:
    """由全局配置构建的默认引擎"""
    global _default_engine
    if _default_engine is None:
        _default_engine = ScenarioEngine.from_config()
    return _default_engine


def _engine_for(reg: Optional[Regularization]) -> ScenarioEngine:
    engine = default_engine()
    return engine if reg is None else engine.with_regularization(reg)


def amplitude_free_A(params: SystemParams) -> Amplitude:
    return default_engine().amplitude_free_A(params)


def scenario1_free(params: SystemParams) -> ScenarioResult:
    return default_engine().scenario1_free(params)


def scenario1_disorder(params: SystemParams, reg: Optional[Regularization] = None) -> ScenarioResult:
    return _engine_for(reg).scenario1_disorder(params)


def scenario2_free(params: SystemParams) -> ScenarioResult:
    return default_engine().scenario2_free(params)


def scenario2_disorder(params: SystemParams, reg: Optional[Regularization] = None) -> ScenarioResult:
    return _engine_for(reg).scenario2_disorder(params)


def scenario3_free(params: SystemParams) -> ScenarioResult:
    return default_engine().scenario3_free(params)


def scenario3_disorder(params: SystemParams, reg: Optional[Regularization] = None) -> ScenarioResult:
    return _engine_for(reg).scenario3_disorder(params)
