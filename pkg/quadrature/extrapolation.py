"""
ε → 0 外推

在正则化序列 ε₀ > ε₁ > … 上求值，用 Neville 形式的 Richardson 表外推到 ε = 0。
首项误差假定为 O(ε)，更高阶的整数幂由后续列依次消去。
"""

from typing import Callable, List, Union

import numpy as np

from greens.kernels import Regularization
from logger import get_logger
from .types import IntegralResult


logger = get_logger('quadrature')


def eps_extrapolate(f: Callable[[float], Union[complex, IntegralResult]],
                    reg: Regularization) -> IntegralResult:
    """Richardson 外推 lim_{ε→0} f(ε)

    Args:
        f: ε → complex 或 ε → IntegralResult（后者的误差估计会随外推表传播）
        reg: 正则化参数，使用其 schedule 与 extrapolation_order

    Returns:
        IntegralResult；err_est 为最后一步外推增量加上传播后的求值误差，
        raw 附带 (eps, value) 原始序列。原始序列的差分不单调减小时带 'non_monotone' 标记。

    Raises:
        ValidationError: 序列少于 3 个值
    """
    reg.require_schedule(3)
    eps = list(reg.schedule)
    values: List[complex] = []
    errors: List[float] = []
    evaluations = 0
    converged = True
    for e in eps:
        out = f(e)
        if isinstance(out, IntegralResult):
            values.append(complex(out.value))
            errors.append(out.err_est)
            evaluations += out.evaluations
            converged = converged and out.converged
        else:
            values.append(complex(out))
            errors.append(0.0)
            evaluations += 1

    order = min(reg.extrapolation_order, len(eps) - 1)
    column = list(values)
    column_err = list(errors)
    diagonal = [column[-1]]
    for k in range(1, order + 1):
        new_column = []
        new_err = []
        for j in range(k, len(eps)):
            c = eps[j] / (eps[j - k] - eps[j])
            b = column[j - k + 1]
            a = column[j - k]
            new_column.append(b + (b - a) * c)
            new_err.append(column_err[j - k + 1] * abs(1.0 + c) + column_err[j - k] * abs(c))
        column, column_err = new_column, new_err
        diagonal.append(column[-1])

    value = diagonal[-1]
    err_est = abs(diagonal[-1] - diagonal[-2]) + column_err[-1]

    flags = []
    diffs = [abs(v1 - v0) for v0, v1 in zip(values, values[1:])]
    tiny = 64.0 * np.finfo(float).eps * max(abs(v) for v in values)
    if any(d1 > d0 * (1.0 + 1e-12) + tiny for d0, d1 in zip(diffs, diffs[1:])):
        flags.append('non_monotone')
        logger.warning("ε 外推序列不单调收敛", raw=[(e, str(v)) for e, v in zip(eps, values)])
    if not converged:
        flags.append('not_converged')

    return IntegralResult(
        value=value,
        err_est=err_est,
        evaluations=evaluations,
        converged=converged and not flags,
        flags=tuple(flags),
        raw=tuple(zip(eps, values)),
    )
