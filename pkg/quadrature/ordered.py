"""
带时序约束的四维时间积分

窗口 [τ₀, τ]⁴ 被 24 个全序单纯形 τ_{p₁} < τ_{p₂} < τ_{p₃} < τ_{p₄} 划分。每个单纯形通过
Duffy 坍缩映射到单位立方体：
    s₄ = u₄, s₃ = u₃s₄, s₂ = u₂s₃, s₁ = u₁s₂,  雅可比 u₂u₃²u₄³
再用张量 Gauss–Legendre 求积。θ(τᵢ − τⱼ) 约束在每个全序上取值恒为 0 或 1，
因此任意 θ 乘积之和都可以由一组逐单纯形积分线性组合得到。
相等时刻是零测集，θ(0) = 1/2 的约定在这里不产生贡献。
"""

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, Sequence, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss

from error_handler.exceptions import ValidationError
from .types import IntegralResult, QuadratureSpec, merge_flags


# 每个元组按从早到晚列出时间标签 1..4
ORDERINGS: Tuple[Tuple[int, ...], ...] = tuple(itertools.permutations((1, 2, 3, 4)))

# 每批求值的节点数
_CHUNK = 1 << 16


@dataclass(frozen=True)
class TimeOrder:
    """时序约束 θ(τ_later − τ_earlier)"""
    later: int
    earlier: int

    def __post_init__(self):
        if self.later not in (1, 2, 3, 4) or self.earlier not in (1, 2, 3, 4) or self.later == self.earlier:
            raise ValidationError('constraints', f"无效的时序约束 θ(τ{self.later} − τ{self.earlier})")

    def satisfied_by(self, ordering: Sequence[int]) -> bool:
        return ordering.index(self.later) > ordering.index(self.earlier)


ThetaProduct = Sequence[TimeOrder]


def theta(later: int, earlier: int) -> TimeOrder:
    return TimeOrder(later, earlier)


def orderings_compatible(constraints: ThetaProduct) -> Tuple[Tuple[int, ...], ...]:
    """与一组约束（乘积）相容的全序"""
    return tuple(p for p in ORDERINGS if all(c.satisfied_by(p) for c in constraints))


def pattern_weights(pattern: Sequence[ThetaProduct]) -> np.ndarray:
    """θ 乘积之和在每个全序上的取值（整数），形状 (24,)"""
    return np.array([
        sum(1 for product in pattern if all(c.satisfied_by(p) for c in product))
        for p in ORDERINGS
    ], dtype=float)


class SimplexRule:
    """单位有序单纯形上的张量 Gauss–Legendre 规则"""

    def __init__(self, nodes: int):
        self.nodes = nodes
        x, w = leggauss(nodes)
        u = 0.5 * (x + 1.0)
        wu = 0.5 * w
        u1, u2, u3, u4 = (g.ravel() for g in np.meshgrid(u, u, u, u, indexing='ij'))
        w1, w2, w3, w4 = (g.ravel() for g in np.meshgrid(wu, wu, wu, wu, indexing='ij'))
        s4 = u4
        s3 = u3 * s4
        s2 = u2 * s3
        s1 = u1 * s2
        self.points = np.stack((s1, s2, s3, s4))
        self.weights = w1 * w2 * w3 * w4 * u2 * u3 ** 2 * u4 ** 3

    @property
    def size(self) -> int:
        return self.weights.size

    def per_ordering(self, integrand: Callable, tau0: float, tau: float) -> np.ndarray:
        """逐单纯形积分

        Args:
            integrand: (τ₁, τ₂, τ₃, τ₄) → 形状 (N,) 或 (k, N) 的复数组
            tau0: 窗口起点
            tau: 窗口终点

        Returns:
            形状 (24, k) 的复数组，行顺序与 ORDERINGS 一致
        """
        length = tau - tau0
        volume = length ** 4
        rows = []
        for ordering in ORDERINGS:
            acc = None
            for start in range(0, self.size, _CHUNK):
                stop = min(start + _CHUNK, self.size)
                times = [None] * 4
                for position, label in enumerate(ordering):
                    times[label - 1] = tau0 + length * self.points[position, start:stop]
                values = np.asarray(integrand(*times))
                if values.ndim == 0:
                    values = np.full(stop - start, values)
                if values.ndim == 1:
                    values = values[np.newaxis, :]
                partial = values @ self.weights[start:stop]
                acc = partial if acc is None else acc + partial
            rows.append(acc * volume)
        return np.array(rows, dtype=complex)


@lru_cache(maxsize=8)
def simplex_rule(nodes: int) -> SimplexRule:
    return SimplexRule(nodes)


def coarse_nodes(nodes: int) -> int:
    """误差估计用的对照节点数"""
    return nodes - 4 if nodes >= 12 else nodes + 4


def combine_orderings(per_ordering: np.ndarray, weights: np.ndarray) -> complex:
    """按固定顺序组合逐单纯形积分"""
    terms = weights * per_ordering
    return complex(math.fsum(terms.real), math.fsum(terms.imag))


def fine_coarse_result(fine: complex, coarse: complex, evaluations: int, spec: QuadratureSpec,
                       flags: Tuple[str, ...] = ()) -> IntegralResult:
    """以细/粗网格之差为误差估计；超过 max(abs_tol, rel_tol·|value|) 时标记 'not_converged'"""
    err_est = abs(fine - coarse)
    converged = err_est <= max(spec.abs_tol, spec.rel_tol * abs(fine))
    if not converged:
        flags = merge_flags(flags, ('not_converged',))
    return IntegralResult(value=fine, err_est=err_est, evaluations=evaluations, converged=converged, flags=flags)


def ordered_integral_4d(integrand: Callable, constraints: ThetaProduct, tau0: float, tau: float,
                        spec: QuadratureSpec, nodes: int = None) -> IntegralResult:
    """计算 ∫_{[τ₀,τ]⁴} Π θ(τᵢ − τⱼ) · integrand

    Args:
        integrand: 向量化被积函数 (τ₁, τ₂, τ₃, τ₄) → complex 数组
        constraints: TimeOrder 列表，视为乘积
        tau0: 窗口起点
        tau: 窗口终点
        spec: 积分设置
        nodes: 每维节点数（默认 spec.gauss_nodes）

    Returns:
        IntegralResult；约束矛盾时为精确的 0（err_est 0，带 'empty_region' 标记）
    """
    if not tau > tau0:
        raise ValidationError('tau', f"tau 必须大于 tau0，收到 [{tau0}, {tau}]")
    weights = pattern_weights([list(constraints)])
    if not weights.any():
        return IntegralResult(value=0j, err_est=0.0, evaluations=0, flags=('empty_region',))

    n = nodes or spec.gauss_nodes
    fine_rule = simplex_rule(n)
    coarse_rule = simplex_rule(coarse_nodes(n))
    fine = combine_orderings(fine_rule.per_ordering(integrand, tau0, tau)[:, 0], weights)
    coarse = combine_orderings(coarse_rule.per_ordering(integrand, tau0, tau)[:, 0], weights)
    evaluations = int(weights.sum()) * (fine_rule.size + coarse_rule.size)
    return fine_coarse_result(fine, coarse, evaluations, spec)


def ordered_pattern_integrals(integrand: Callable, patterns: Dict[str, Tuple[int, Sequence[ThetaProduct]]],
                              tau0: float, tau: float, nodes: int) -> Dict[str, Tuple[complex, complex]]:
    """同一向量值被积函数在多组 θ 模式下的积分

    Args:
        integrand: 返回形状 (k, N) 的被积函数
        patterns: 名称 → (分量序号, θ 乘积之和)，无约束写为 [[]]
        tau0: 窗口起点
        tau: 窗口终点
        nodes: 每维节点数

    Returns:
        名称 → (细网格值, 粗网格值)
    """
    fine = simplex_rule(nodes).per_ordering(integrand, tau0, tau)
    coarse = simplex_rule(coarse_nodes(nodes)).per_ordering(integrand, tau0, tau)
    out = {}
    for name, (component, pattern) in patterns.items():
        weights = pattern_weights(pattern)
        out[name] = (combine_orderings(fine[:, component], weights),
                     combine_orderings(coarse[:, component], weights))
    return out
