"""
三角积分函数 Si 与 Ci

约定：
    Si(x) = ∫₀ˣ sin t / t dt
    Ci(x) = γ + ln x + ∫₀ˣ (cos t − 1) / t dt,  x > 0

|x| ≤ 4 时直接对 Maclaurin 级数求和；更大的参数改用辅助函数 f、g，
它们由 E₁(ix) 的连分式（修正 Lentz 算法）求得：
    e^{ix} E₁(ix) = g(x) − i f(x)
    Si(x) = π/2 − f(x) cos x − g(x) sin x
    Ci(x) = f(x) sin x − g(x) cos x
连分式对所有 x > 0 收敛，在切换点附近也能达到机器精度。
"""

import math
from typing import Tuple

from error_handler.exceptions import DomainError, ConvergenceError


EULER_GAMMA = 0.57721566490153286061
SERIES_CUTOFF = 4.0

_SERIES_MAX_TERMS = 80
_CF_MAX_ITER = 1000
_CF_TOL = 1e-15
_FPMIN = 1e-300


def _check_finite(name: str, x: float) -> float:
    try:
        value = float(x)
    except (TypeError, ValueError):
        raise DomainError(name, x, f"{name} 需要实数参数")
    if not math.isfinite(value):
        raise DomainError(name, x)
    return value


def _si_series(x: float) -> float:
    # Σ (−1)^k x^{2k+1} / ((2k+1)(2k+1)!)
    x2 = x * x
    term = x  # x^{2k+1}/(2k+1)!
    total = x
    for k in range(1, _SERIES_MAX_TERMS):
        term *= -x2 / ((2 * k) * (2 * k + 1))
        contrib = term / (2 * k + 1)
        total += contrib
        if abs(contrib) <= 1e-17 * abs(total):
            break
    return total


def _ci_series(x: float) -> float:
    # Σ_{k≥1} (−1)^k x^{2k} / (2k (2k)!)
    x2 = x * x
    term = 1.0  # x^{2k}/(2k)!
    total = 0.0
    for k in range(1, _SERIES_MAX_TERMS):
        term *= -x2 / ((2 * k - 1) * (2 * k))
        contrib = term / (2 * k)
        total += contrib
        if abs(contrib) <= 1e-17 * abs(total):
            break
    return total


def auxiliary_fg(x: float) -> Tuple[float, float]:
    """辅助函数 f(x)、g(x)，x > 0

    Args:
        x: 正实数

    Returns:
        (f, g)

    Raises:
        DomainError: x 非正或非有限
        ConvergenceError: 连分式未在迭代上限内收敛
    """
    x = _check_finite('auxiliary_fg', x)
    if x <= 0.0:
        raise DomainError('auxiliary_fg', x)

    b = complex(1.0, x)
    c = complex(1.0 / _FPMIN, 0.0)
    d = 1.0 / b
    h = d
    for i in range(1, _CF_MAX_ITER):
        a = -float(i * i)
        b += 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        delta = c * d
        h *= delta
        if abs(delta.real - 1.0) + abs(delta.imag) < _CF_TOL:
            break
    else:
        raise ConvergenceError('auxiliary_fg', best_estimate=h)

    # h = e^{ix} E₁(ix) = g − i f
    return -h.imag, h.real


def sici(x: float) -> Tuple[float, float]:
    """同时计算 Si(x) 和 Ci(x)，x > 0"""
    x = _check_finite('sici', x)
    if x <= 0.0:
        raise DomainError('sici', x, "Ci 只在 x > 0 上定义")
    if x <= SERIES_CUTOFF:
        return _si_series(x), EULER_GAMMA + math.log(x) + _ci_series(x)
    f, g = auxiliary_fg(x)
    c, s = math.cos(x), math.sin(x)
    return math.pi / 2 - f * c - g * s, f * s - g * c


def sin_integral(x: float) -> float:
    """正弦积分 Si(x)

    Args:
        x: 有限实数

    Returns:
        Si(x)，|x| ≤ 1e4 时绝对误差不超过 1e-12

    Raises:
        DomainError: 非有限输入
    """
    x = _check_finite('sin_integral', x)
    if x == 0.0:
        return 0.0
    ax = abs(x)
    if ax <= SERIES_CUTOFF:
        value = _si_series(ax)
    else:
        f, g = auxiliary_fg(ax)
        value = math.pi / 2 - f * math.cos(ax) - g * math.sin(ax)
    return value if x > 0 else -value


def cos_integral(x: float) -> float:
    """余弦积分 Ci(x)

    Args:
        x: 正实数

    Returns:
        Ci(x)，x ≤ 1e4 时绝对误差不超过 1e-12

    Raises:
        DomainError: x ≤ 0 或非有限输入
    """
    x = _check_finite('cos_integral', x)
    if x <= 0.0:
        raise DomainError('cos_integral', x, "Ci 只在 x > 0 上定义")
    return sici(x)[1]
