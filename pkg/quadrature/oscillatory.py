"""
一维核积分：ξ 约化的加权振荡积分与相位和约化

被积函数 = 权重 w(ξ) × 核 K(ξ)。核以 SplitKernel 表示：
  * 光滑部分用 QUADPACK（scipy.integrate.quad）分面板自适应积分，面板在核的断点、
    主值极点以及以 0 为中心的振荡周期边界处切分；
  * 主值极点 c 处用对称配对 ∫₀ʰ [f(c+t) + f(c−t)] dt 消去 1/(ξ − c) 奇异性；
  * delta 项从不数值积分，而是解析筛选；落在端点上的 delta 取半权重。
面板结果按从左到右的固定顺序用 math.fsum 求和，重复运行逐位相同。
"""

import math
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import integrate

from error_handler.exceptions import ValidationError
from greens.kernels import SplitKernel
from logger import get_logger
from .types import IntegralResult, QuadratureSpec


KernelLike = Union[SplitKernel, Callable[[np.ndarray], np.ndarray]]

# 振荡周期切分的面板数上限
MAX_PERIOD_PANELS = 4096

logger = get_logger('quadrature')


def as_split_kernel(kernel: KernelLike) -> SplitKernel:
    """把普通的 dt → complex 函数包装为 SplitKernel"""
    if isinstance(kernel, SplitKernel):
        return kernel
    if callable(kernel):
        return SplitKernel(smooth=kernel, label=getattr(kernel, '__name__', 'callable'))
    raise ValidationError('kernel', f"无法识别的核类型: {type(kernel).__name__}")


def _quad_complex(fn: Callable[[float], complex], a: float, b: float,
                  spec: QuadratureSpec) -> Tuple[complex, float, int, bool]:
    """对复值函数的实部和虚部分别调用 QUADPACK"""
    parts = []
    for component in (lambda x: fn(x).real, lambda x: fn(x).imag):
        out = integrate.quad(component, a, b, epsabs=spec.abs_tol, epsrel=spec.rel_tol,
                             limit=spec.max_subdivisions, full_output=1)
        # 未收敛时 quad 额外返回说明信息
        parts.append((out[0], out[1], out[2]['neval'], len(out) < 4))
    (re, re_err, re_n, re_ok), (im, im_err, im_n, im_ok) = parts
    return complex(re, im), re_err + im_err, re_n + im_n, re_ok and im_ok


def _period_points(lower: float, upper: float, period: Optional[float], center: float) -> List[float]:
    if not period or period <= 0.0 or not math.isfinite(period):
        return []
    while (upper - lower) / period > MAX_PERIOD_PANELS:
        period *= 2.0
    k_start = math.ceil((lower - center) / period)
    k_stop = math.floor((upper - center) / period)
    return [center + k * period for k in range(k_start, k_stop + 1)]


def integrate_kernel(kernel: KernelLike, weight: Callable[[np.ndarray], np.ndarray],
                     lower: float, upper: float, spec: QuadratureSpec,
                     period: Optional[float] = None, center: float = 0.0) -> IntegralResult:
    """计算 ∫_lower^upper w(ξ) K(ξ) dξ

    Args:
        kernel: SplitKernel 或 dt → complex 函数
        weight: 权重函数 w(ξ)，接受标量或数组
        lower: 积分下限
        upper: 积分上限
        spec: 积分设置
        period: 振荡周期（None 表示不按周期切分）
        center: 周期切分的对称中心

    Returns:
        IntegralResult；任一面板未达到容差时 converged=False 并带 'not_converged' 标记
    """
    if not upper > lower:
        raise ValidationError('upper', f"积分上限 {upper} 必须大于下限 {lower}")
    kernel = as_split_kernel(kernel)

    def f(x: float) -> complex:
        return complex(weight(x) * kernel.smooth(x))

    # delta 项解析筛选
    delta_re: List[float] = []
    delta_im: List[float] = []
    for delta in kernel.deltas:
        if lower < delta.location < upper:
            factor = 1.0
        elif delta.location == lower or delta.location == upper:
            factor = 0.5
        else:
            continue
        contribution = factor * delta.weight * complex(weight(delta.location))
        delta_re.append(contribution.real)
        delta_im.append(contribution.imag)

    poles = {p for p in kernel.pv_poles if lower < p < upper}
    points = {lower, upper}
    points.update(b for b in kernel.breakpoints if lower < b < upper)
    points.update(poles)
    points.update(p for p in _period_points(lower, upper, period, center) if lower < p < upper)
    points = sorted(points)

    half_width = {}
    for i, p in enumerate(points):
        if p in poles:
            half_width[p] = 0.5 * min(p - points[i - 1], points[i + 1] - p)

    smooth_re: List[float] = []
    smooth_im: List[float] = []
    err_total = 0.0
    evaluations = 0
    converged = True

    def accumulate(value: complex, err: float, neval: int, ok: bool):
        nonlocal err_total, evaluations, converged
        smooth_re.append(value.real)
        smooth_im.append(value.imag)
        err_total += err
        evaluations += neval
        converged = converged and ok

    for a, b in zip(points[:-1], points[1:]):
        if a in poles:
            h = half_width[a]

            def pair(t: float, c=a) -> complex:
                return f(c + t) + f(c - t)

            accumulate(*_quad_complex(pair, 0.0, h, spec))
            a = a + h
        if b in poles:
            b = b - half_width[b]
        if b > a:
            accumulate(*_quad_complex(f, a, b, spec))

    value = complex(math.fsum(smooth_re) + math.fsum(delta_re),
                    math.fsum(smooth_im) + math.fsum(delta_im))
    # 求和本身的舍入
    magnitude = sum(abs(x) for x in smooth_re + smooth_im + delta_re + delta_im)
    err_total += 4.0 * np.finfo(float).eps * magnitude

    flags: Tuple[str, ...] = ()
    if not converged:
        flags = ('not_converged',)
        logger.warning("一维核积分未达到容差", kernel=kernel.label, lower=lower, upper=upper,
                       err_est=err_total)
    return IntegralResult(value=value, err_est=err_total, evaluations=max(evaluations, 1),
                          converged=converged, flags=flags)


def weighted_xi_integral(kernel: KernelLike, omega0: float, dtau: float,
                         spec: QuadratureSpec) -> IntegralResult:
    """计算 ∫_{−Δτ}^{Δτ} (Δτ − |ξ|) e^{−iω₀ξ} K(ξ) dξ

    等价于 ∫∫_{[τ₀,τ]²} e^{−iω₀(u−v)} K(u − v) du dv。

    Args:
        kernel: SplitKernel 或 dt → complex 函数
        omega0: 相位频率（可为负，用于共轭相位）
        dtau: 窗口长度 Δτ > 0
        spec: 积分设置
    """
    if not dtau > 0.0:
        raise ValidationError('dtau', f"dtau 必须为正数，收到 {dtau}")

    def weight(xi):
        xi = np.asarray(xi, dtype=float)
        return (dtau - np.abs(xi)) * np.exp(-1j * omega0 * xi)

    period = 2.0 * math.pi / abs(omega0) if omega0 != 0.0 else None
    return integrate_kernel(kernel, weight, -dtau, dtau, spec, period=period)


def phase_sum_integral(kernel: KernelLike, omega0: float, tau0: float, tau: float,
                       sign: int, spec: QuadratureSpec) -> IntegralResult:
    """计算 ∫∫_{[τ₀,τ]²} e^{sign·iω₀(u+v)} K(u − v) du dv

    换元 ξ = u − v, η = u + v 后 η 积分有闭式：
        ½∫ e^{sign·iω₀η} dη = e^{sign·iω₀(τ₀+τ)} · sin(ω₀(Δτ − |ξ|))/ω₀
    剩下对 ξ 的一维积分。常数相位提到积分号外，因此 sign = ±1 两个结果共享同一个 ξ 积分。
    """
    if sign not in (1, -1):
        raise ValidationError('sign', f"sign 必须是 ±1，收到 {sign}")
    if not tau > tau0:
        raise ValidationError('tau', f"tau 必须大于 tau0，收到 [{tau0}, {tau}]")
    dtau = tau - tau0

    def weight(xi):
        span = dtau - np.abs(np.asarray(xi, dtype=float))
        # sin(ω₀a)/ω₀ = a·sinc(ω₀a/π)，ω₀ = 0 时退化为 a
        return span * np.sinc(omega0 * span / math.pi)

    period = 2.0 * math.pi / abs(omega0) if omega0 != 0.0 else None
    core = integrate_kernel(kernel, weight, -dtau, dtau, spec, period=period)
    phase = complex(np.exp(1j * sign * omega0 * (tau0 + tau)))
    return core.scaled(phase)


def principal_value_cauchy(fn: Callable[[float], complex], lower: float, upper: float,
                           pole: float, spec: QuadratureSpec) -> IntegralResult:
    """用 QUADPACK 的 Cauchy 权重计算 PV ∫ fn(x)/(x − pole) dx

    作为对称配对主值处理之外的第二种规定，用于交叉校验。
    """
    values = []
    err = 0.0
    evaluations = 0
    converged = True
    for component in (lambda x: complex(fn(x)).real, lambda x: complex(fn(x)).imag):
        out = integrate.quad(component, lower, upper, weight='cauchy', wvar=pole,
                             epsabs=spec.abs_tol, epsrel=spec.rel_tol,
                             limit=spec.max_subdivisions, full_output=1)
        values.append(out[0])
        err += out[1]
        evaluations += out[2]['neval']
        converged = converged and len(out) < 4
    return IntegralResult(value=complex(values[0], values[1]), err_est=err,
                          evaluations=evaluations, converged=converged,
                          flags=() if converged else ('not_converged',))


def sum_results(results: Sequence[IntegralResult]) -> IntegralResult:
    """按给定顺序相加一组积分结果"""
    total = results[0]
    for r in results[1:]:
        total = total + r
    return total
