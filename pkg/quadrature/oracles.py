"""
校验用的蛮力积分

张量 Gauss–Legendre 直接在整个方盒上积分（不做任何约化），以及带约束拒绝采样的
加扰 Sobol 随机拟蒙特卡罗积分。只用于校验，精度要求不高。
"""

import math
from typing import Callable, Sequence, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.stats import qmc

from error_handler.exceptions import ValidationError
from .ordered import TimeOrder
from .types import IntegralResult, QuadratureSpec


Window = Tuple[float, float]

_CHUNK = 1 << 16


def _window(window: Window) -> Tuple[float, float]:
    tau0, tau = window
    if not tau > tau0:
        raise ValidationError('window', f"窗口终点必须大于起点，收到 {window}")
    return float(tau0), float(tau)


def _box_rule(nodes: int, tau0: float, tau: float, dims: int):
    x, w = leggauss(nodes)
    half = 0.5 * (tau - tau0)
    t = tau0 + half * (x + 1.0)
    wt = half * w
    grids = [g.ravel() for g in np.meshgrid(*([t] * dims), indexing='ij')]
    weight_grids = [g.ravel() for g in np.meshgrid(*([wt] * dims), indexing='ij')]
    weights = np.prod(np.stack(weight_grids), axis=0)
    return grids, weights


def _box_integral(integrand: Callable, nodes: int, tau0: float, tau: float, dims: int) -> complex:
    grids, weights = _box_rule(nodes, tau0, tau, dims)
    total = 0j
    for start in range(0, weights.size, _CHUNK):
        stop = min(start + _CHUNK, weights.size)
        values = np.asarray(integrand(*(g[start:stop] for g in grids)))
        if values.ndim == 0:
            values = np.full(stop - start, values)
        total += complex(values @ weights[start:stop])
    return total


def _direct(integrand: Callable, window: Window, spec: QuadratureSpec, dims: int, nodes: int) -> IntegralResult:
    tau0, tau = _window(window)
    n = nodes or spec.max_gauss_nodes
    coarse = max(8, n - 8)
    fine_value = _box_integral(integrand, n, tau0, tau, dims)
    coarse_value = _box_integral(integrand, coarse, tau0, tau, dims)
    return IntegralResult(value=fine_value, err_est=abs(fine_value - coarse_value),
                          evaluations=n ** dims + coarse ** dims)


def direct_double_integral(integrand: Callable, window: Window, spec: QuadratureSpec,
                           nodes: int = None) -> IntegralResult:
    """∫∫_{window²} integrand(u, v)，张量 Gauss–Legendre"""
    return _direct(integrand, window, spec, 2, nodes)


def direct_quadruple_integral(integrand: Callable, window: Window, spec: QuadratureSpec,
                              nodes: int = None) -> IntegralResult:
    """∫_{window⁴} integrand(τ₁, τ₂, τ₃, τ₄)，张量 Gauss–Legendre"""
    return _direct(integrand, window, spec, 4, nodes)


def qmc_ordered_integral(integrand: Callable, constraints: Sequence[TimeOrder], window: Window,
                         points: int = 1 << 20, replicates: int = 8, seed: int = 0) -> IntegralResult:
    """加扰 Sobol 随机拟蒙特卡罗积分，约束以拒绝方式施加

    Args:
        integrand: 向量化被积函数 (τ₁, τ₂, τ₃, τ₄) → complex 数组
        constraints: TimeOrder 列表（乘积）
        window: (τ₀, τ)
        points: 总点数，平均分给各独立加扰副本
        replicates: 独立加扰副本数，误差估计取副本均值标准误的 3 倍
        seed: 随机种子

    Returns:
        IntegralResult
    """
    tau0, tau = _window(window)
    if replicates < 2:
        raise ValidationError('replicates', "至少需要 2 个独立副本估计误差")
    per_replicate = max(1, points // replicates)
    m = int(math.log2(per_replicate))
    per_replicate = 1 << m
    length = tau - tau0
    volume = length ** 4

    estimates = []
    for child in np.random.SeedSequence(seed).spawn(replicates):
        sampler = qmc.Sobol(d=4, scramble=True, seed=np.random.default_rng(child))
        total = 0j
        remaining = per_replicate
        while remaining > 0:
            batch = min(_CHUNK, remaining)
            u = sampler.random(batch)
            t = tau0 + length * u.T
            mask = np.ones(batch, dtype=bool)
            for c in constraints:
                mask &= t[c.later - 1] > t[c.earlier - 1]
            if mask.any():
                values = np.asarray(integrand(*(row[mask] for row in t)))
                if values.ndim == 0:
                    values = np.full(int(mask.sum()), values)
                total += complex(np.sum(values))
            remaining -= batch
        estimates.append(total * volume / per_replicate)

    estimates = np.array(estimates)
    mean = complex(np.mean(estimates))
    stderr = float(np.std(estimates, ddof=1) / math.sqrt(replicates))
    return IntegralResult(value=mean, err_est=3.0 * stderr, evaluations=per_replicate * replicates)
