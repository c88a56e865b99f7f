# 特殊函数模块
from .trig_integrals import (
    sin_integral, cos_integral, sici, auxiliary_fg, EULER_GAMMA, SERIES_CUTOFF
)

__all__ = ['sin_integral', 'cos_integral', 'sici', 'auxiliary_fg', 'EULER_GAMMA', 'SERIES_CUTOFF']
