"""
积分设置与积分结果
"""

import math
from dataclasses import dataclass, field
from typing import Tuple

from error_handler.exceptions import ValidationError, ConvergenceError


@dataclass(frozen=True)
class QuadratureSpec:
    """数值积分设置

    Attributes:
        rel_tol: QUADPACK 相对容差
        abs_tol: QUADPACK 绝对容差
        max_subdivisions: 每个面板的最大自适应细分次数
        gauss_nodes: 四维单纯形规则每维的 Gauss–Legendre 节点数
        max_gauss_nodes: 节点数随振荡增长时的上限
    """
    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_subdivisions: int = 200
    gauss_nodes: int = 16
    max_gauss_nodes: int = 32

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValidationError('rel_tol', "积分容差必须为正数")
        if self.max_subdivisions < 1:
            raise ValidationError('max_subdivisions', "最大细分次数必须为正整数")
        if self.gauss_nodes < 8:
            raise ValidationError('gauss_nodes', "gauss_nodes 至少为 8")
        if self.max_gauss_nodes < self.gauss_nodes:
            raise ValidationError('max_gauss_nodes', "max_gauss_nodes 不能小于 gauss_nodes")

    def nodes_for(self, phase_span: float) -> int:
        """按窗口内的相位跨度 ω₀Δτ 选择每维节点数"""
        extra = int(math.ceil(max(phase_span, 0.0)))
        return min(self.max_gauss_nodes, self.gauss_nodes + extra)


@dataclass(frozen=True)
class IntegralResult:
    """积分结果

    Attributes:
        value: 积分值
        err_est: 误差估计（非负）
        evaluations: 被积函数求值次数，仅空区域为 0
        converged: 是否达到容差
        flags: 诊断标记，例如 'not_converged'、'non_monotone'、'empty_region'、'regulated'
        raw: 附带的原始数据（例如外推序列）
    """
    value: complex
    err_est: float
    evaluations: int
    converged: bool = True
    flags: Tuple[str, ...] = ()
    raw: Tuple = field(default=(), compare=False)

    def __add__(self, other: "IntegralResult") -> "IntegralResult":
        return IntegralResult(
            value=self.value + other.value,
            err_est=self.err_est + other.err_est,
            evaluations=self.evaluations + other.evaluations,
            converged=self.converged and other.converged,
            flags=merge_flags(self.flags, other.flags),
        )

    def scaled(self, factor: complex) -> "IntegralResult":
        """乘以常数因子"""
        return IntegralResult(
            value=self.value * factor,
            err_est=self.err_est * abs(factor),
            evaluations=self.evaluations,
            converged=self.converged,
            flags=self.flags,
            raw=self.raw,
        )

    def with_flags(self, *flags: str) -> "IntegralResult":
        return IntegralResult(self.value, self.err_est, self.evaluations, self.converged,
                              merge_flags(self.flags, flags), self.raw)

    def require_converged(self, operation: str) -> "IntegralResult":
        """严格模式：未收敛时抛出异常

        Raises:
            ConvergenceError: 结果未收敛
        """
        if not self.converged:
            raise ConvergenceError(operation, best_estimate=self.value,
                                   details={'err_est': self.err_est, 'flags': list(self.flags)})
        return self


def merge_flags(a: Tuple[str, ...], b: Tuple[str, ...]) -> Tuple[str, ...]:
    merged = list(a)
    for flag in b:
        if flag not in merged:
            merged.append(flag)
    return tuple(merged)
