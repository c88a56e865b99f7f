# 数值积分模块
from .types import QuadratureSpec, IntegralResult
from .oscillatory import (
    integrate_kernel, weighted_xi_integral, phase_sum_integral, principal_value_cauchy,
    sum_results, as_split_kernel
)
from .extrapolation import eps_extrapolate
from .ordered import (
    ORDERINGS, TimeOrder, theta, orderings_compatible, pattern_weights,
    SimplexRule, simplex_rule, fine_coarse_result, ordered_integral_4d, ordered_pattern_integrals
)
from .oracles import direct_double_integral, direct_quadruple_integral, qmc_ordered_integral

__all__ = [
    'QuadratureSpec', 'IntegralResult',
    'integrate_kernel', 'weighted_xi_integral', 'phase_sum_integral', 'principal_value_cauchy',
    'sum_results', 'as_split_kernel',
    'eps_extrapolate',
    'ORDERINGS', 'TimeOrder', 'theta', 'orderings_compatible', 'pattern_weights',
    'SimplexRule', 'simplex_rule', 'fine_coarse_result', 'ordered_integral_4d', 'ordered_pattern_integrals',
    'direct_double_integral', 'direct_quadruple_integral', 'qmc_ordered_integral'
]
