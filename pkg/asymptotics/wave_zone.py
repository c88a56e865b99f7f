"""
先兆区与波区的解析表达式

先兆振幅的闭式（Δτ = D < r，ω = ω₀）：

    A_pv = (i/4π²)·(1/r)·[(D − r)·K₋ − (D + r)·K₊]

    K₊ = cos(ωr)[Ci(ω(r+D)) − Ci(ωr)] + sin(ωr)[Si(ω(r+D)) − Si(ωr)]
    K₋ = −{cos(ωr)[Ci(ωr) − Ci(ω(r−D))] + sin(ωr)[Si(ωr) − Si(ω(r−D))]}

推导见 docs/asymptotics.md。
"""

import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from error_handler.exceptions import DomainError, ValidationError
from specfun import sici


# (2π)⁴
TWO_PI_FOURTH = (2.0 * math.pi) ** 4


@dataclass(frozen=True)
class WaveZoneInput:
    """波区公式的输入

    Attributes:
        omega0: 原子能隙 ω₀ > 0
        sigma2: 无序强度 σ² ≥ 0
        dtau: 观测窗口长度 Δτ > 0
        r: 间距 r > 0（期望 ω₀r ≫ 1）
    """
    omega0: float
    sigma2: float
    dtau: float
    r: float

    def __post_init__(self):
        if not self.omega0 > 0.0:
            raise ValidationError('omega0', f"omega0 必须为正数，收到 {self.omega0}")
        if self.sigma2 < 0.0:
            raise ValidationError('sigma2', f"sigma2 不能为负，收到 {self.sigma2}")
        if not self.dtau > 0.0:
            raise ValidationError('dtau', f"dtau 必须为正数，收到 {self.dtau}")
        if not self.r > 0.0:
            raise ValidationError('r', f"r 必须为正数，收到 {self.r}")

    @property
    def is_precursor(self) -> bool:
        return self.dtau < self.r

    def in_wave_zone(self, threshold: float = 50.0) -> bool:
        return self.omega0 * self.r >= threshold

    def precursor_amplitude(self) -> complex:
        """先兆振幅主值部分的闭式

        Raises:
            DomainError: dtau ≥ r
        """
        return precursor_closed_form_A(self.omega0, self.r, self.dtau)

    def disorder_limit(self) -> complex:
        return wave_zone_disorder(self.omega0, self.sigma2, self.dtau)


@dataclass(frozen=True)
class PrecursorParts:
    """闭式中的两组三角积分组合"""
    k_plus: float
    k_minus: float
    value: complex


def precursor_closed_form_parts(omega0: float, r: float, dtau: float) -> PrecursorParts:
    """先兆振幅主值部分的闭式及 K₊、K₋

    Raises:
        DomainError: dtau ≥ r 或参数非正
    """
    if not (omega0 > 0.0 and r > 0.0):
        raise DomainError('precursor_closed_form_A', omega0 if not omega0 > 0.0 else r,
                          "omega0 和 r 必须为正数")
    if dtau < 0.0:
        raise DomainError('precursor_closed_form_A', dtau, "dtau 不能为负")
    if dtau >= r:
        raise DomainError('precursor_closed_form_A', dtau, f"闭式只适用于 dtau < r，收到 dtau={dtau}, r={r}")
    if dtau == 0.0:
        return PrecursorParts(0.0, 0.0, 0j)

    w = omega0
    si_r, ci_r = sici(w * r)
    si_p, ci_p = sici(w * (r + dtau))
    si_m, ci_m = sici(w * (r - dtau))
    c, s = math.cos(w * r), math.sin(w * r)

    k_plus = c * (ci_p - ci_r) + s * (si_p - si_r)
    k_minus = -(c * (ci_r - ci_m) + s * (si_r - si_m))
    bracket = (dtau - r) * k_minus - (dtau + r) * k_plus
    value = 1j * bracket / (4.0 * math.pi ** 2 * r)
    return PrecursorParts(k_plus=k_plus, k_minus=k_minus, value=value)


def precursor_closed_form_A(omega0: float, r: float, dtau: float) -> complex:
    """∫_{−Δτ}^{Δτ}(Δτ − |ξ|)e^{−iω₀ξ}·(i/4π²)·PV 1/(ξ² − r²) dξ 的闭式（Δτ < r）"""
    return precursor_closed_form_parts(omega0, r, dtau).value


def precursor_delta_part(omega0: float, r: float, dtau: float) -> float:
    """光锥 delta 项的筛选值 −(Δτ − r)cos(ω₀r)/(4πr)，Δτ ≤ r 时为 0"""
    if dtau <= r:
        return 0.0
    return -(dtau - r) * math.cos(omega0 * r) / (4.0 * math.pi * r)


def wave_zone_disorder(omega0: float, sigma2: float, dtau: float) -> complex:
    """ℐ 的波区极限 −iπσ²ω₀³ sin(ω₀Δτ)/(2π)⁴"""
    return -1j * math.pi * sigma2 * omega0 ** 3 * math.sin(omega0 * dtau) / TWO_PI_FOURTH


def crossover_r0(sigma2: float, omega0: float) -> float:
    """交叉尺度估计 r₀ ≈ σ²ω₀²"""
    if sigma2 < 0.0 or omega0 < 0.0:
        raise ValidationError('sigma2', "sigma2 与 omega0 不能为负")
    return sigma2 * omega0 ** 2


@dataclass(frozen=True)
class PowerLawFit:
    """log y = slope·log x + intercept 的最小二乘拟合"""
    slope: float
    intercept: float
    slope_err: float
    points: int

    def to_dict(self):
        return {'slope': self.slope, 'intercept': self.intercept,
                'slope_err': self.slope_err, 'points': self.points}


def loglog_fit(x: Sequence[float], y: Sequence[float]) -> PowerLawFit:
    """双对数线性拟合；slope_err 为斜率的标准误差（两点时为 0）

    Raises:
        ValidationError: 少于两个点，或含非正值
    """
    x = np.asarray(x, dtype=float)
    y = np.abs(np.asarray(y, dtype=float))
    if x.size < 2 or x.size != y.size:
        raise ValidationError('points', "拟合至少需要两个点且 x、y 长度一致")
    if np.any(x <= 0.0) or np.any(y <= 0.0):
        raise ValidationError('points', "双对数拟合要求所有值为正")
    lx, ly = np.log(x), np.log(y)
    slope, intercept = np.polyfit(lx, ly, 1)
    slope_err = 0.0
    if x.size > 2:
        residuals = ly - (slope * lx + intercept)
        spread = np.sum((lx - lx.mean()) ** 2)
        slope_err = float(np.sqrt(np.sum(residuals ** 2) / (x.size - 2) / spread))
    return PowerLawFit(float(slope), float(intercept), slope_err, int(x.size))


def fit_crossover_slope(sigma2_values: Sequence[float], r0_values: Sequence[float]) -> PowerLawFit:
    """经验交叉尺度 r₀ 对 σ² 的双对数斜率（r₀ ≈ σ²ω₀² 对应斜率 1）"""
    return loglog_fit(sigma2_values, r0_values)


def precursor_grid(omega0: float, omega0_r_values: Sequence[float], dtau: float) -> Tuple[Tuple[float, complex], ...]:
    """在 ω₀r 网格上求先兆振幅闭式，跳过 Δτ ≥ r 的点

    Raises:
        ValidationError: omega0、dtau 或网格中的 ω₀r 非正
    """
    if not omega0 > 0.0:
        raise ValidationError('omega0', f"omega0 必须为正数，收到 {omega0}")
    out = []
    for y in omega0_r_values:
        point = WaveZoneInput(omega0=omega0, sigma2=0.0, dtau=dtau, r=y / omega0)
        if point.is_precursor:
            out.append((float(y), point.precursor_amplitude()))
    return tuple(out)
