# 先兆区与波区解析表达式模块
from .wave_zone import (
    WaveZoneInput, PrecursorParts, PowerLawFit,
    precursor_closed_form_A, precursor_closed_form_parts, precursor_delta_part, precursor_grid,
    wave_zone_disorder, crossover_r0, loglog_fit, fit_crossover_slope, TWO_PI_FOURTH
)

__all__ = [
    'WaveZoneInput', 'PrecursorParts', 'PowerLawFit',
    'precursor_closed_form_A', 'precursor_closed_form_parts', 'precursor_delta_part', 'precursor_grid',
    'wave_zone_disorder', 'crossover_r0', 'loglog_fit', 'fit_crossover_slope', 'TWO_PI_FOURTH'
]
