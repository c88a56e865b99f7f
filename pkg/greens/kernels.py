"""
两点函数与无序修正核

自然单位 ħ = c = 1。公开函数接受物理量并返回复数；以下划线开头的向量化
内核函数供数值积分直接在 numpy 数组上调用。所有核函数都满足标度协变：
    K(dt, r; ε, σ²) = ω₀² · K(ω₀dt, ω₀r; ω₀ε, σ²ω₀³)
其中 Feynman 传播子的统一 iε 形式 dt² − r² − iε 里 ε 是时间平方量纲，对应 ω₀²ε。
场景引擎因此只在无量纲变量 x = ω₀dt, y = ω₀r, s = σ²ω₀³ 上求值。
"""

import math
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np

from error_handler.exceptions import ValidationError, OnLightConeError
from logger import get_logger


FOUR_PI_SQ = 4.0 * math.pi ** 2
# 6/(2π)³，I 核的组合因子
DISORDER_PREFACTOR = 6.0 / (2.0 * math.pi) ** 3

logger = get_logger('greens')


@dataclass(frozen=True)
class SpacetimeInterval:
    """时空间隔 (dt, |Δx|)"""
    dt: float
    radius: float

    def __post_init__(self):
        if not math.isfinite(self.dt):
            raise ValidationError('dt', f"dt 必须有限，收到 {self.dt}")
        if not (math.isfinite(self.radius) and self.radius >= 0.0):
            raise ValidationError('radius', f"radius 必须是非负有限数，收到 {self.radius}")

    def scaled(self, omega0: float) -> "SpacetimeInterval":
        """返回以 1/ω₀ 为时间单位的无量纲间隔"""
        return SpacetimeInterval(self.dt * omega0, self.radius * omega0)

    @property
    def is_spacelike(self) -> bool:
        return abs(self.dt) < self.radius


@dataclass(frozen=True)
class Regularization:
    """iε 正则化参数

    Attributes:
        eps: 有限 iε 值
        schedule: 用于 ε→0 外推的严格递减正数序列
        extrapolation_order: Richardson 外推步数
    """
    eps: float = 1e-3
    schedule: Tuple[float, ...] = (8e-3, 4e-3, 2e-3, 1e-3)
    extrapolation_order: int = 3

    def __post_init__(self):
        object.__setattr__(self, 'schedule', tuple(float(e) for e in self.schedule))
        if not (math.isfinite(self.eps) and self.eps > 0.0):
            raise ValidationError('eps', f"eps 必须为正数，收到 {self.eps}")
        if any(not (math.isfinite(e) and e > 0.0) for e in self.schedule):
            raise ValidationError('schedule', "外推序列中的 eps 必须全为正数")
        if any(b >= a for a, b in zip(self.schedule, self.schedule[1:])):
            raise ValidationError('schedule', "外推序列必须严格递减")
        if self.extrapolation_order < 1:
            raise ValidationError('extrapolation_order', "外推阶数至少为 1")

    def require_schedule(self, min_levels: int = 3) -> None:
        """检查外推序列长度

        Raises:
            ValidationError: 序列少于 min_levels 个值
        """
        if len(self.schedule) < min_levels:
            raise ValidationError(
                'schedule', f"外推至少需要 {min_levels} 个 eps 值，当前 {len(self.schedule)} 个"
            )

    def scaled(self, omega0: float) -> "Regularization":
        return Regularization(
            eps=self.eps * omega0,
            schedule=tuple(e * omega0 for e in self.schedule),
            extrapolation_order=self.extrapolation_order,
        )


@dataclass(frozen=True)
class DeltaTerm:
    """光锥 delta 项：在 dt = location 处权重为 weight"""
    location: float
    weight: complex


@dataclass(frozen=True)
class KernelValue:
    """分布值核的一个样本：光滑部分加显式 delta 项列表"""
    smooth: complex
    deltas: Tuple[DeltaTerm, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'deltas', tuple(sorted(self.deltas, key=lambda d: d.location)))


@dataclass(frozen=True)
class DisorderModel:
    """无序强度 σ²"""
    sigma2: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.sigma2) and self.sigma2 >= 0.0):
            raise ValidationError('sigma2', f"sigma2 必须是非负有限数，收到 {self.sigma2}")

    def scaled(self, omega0: float) -> "DisorderModel":
        return DisorderModel(self.sigma2 * omega0 ** 3)


@dataclass(frozen=True)
class KernelSample:
    """带误差估计的核函数值"""
    value: complex
    err_est: float
    near_light_cone: bool = False


@dataclass(frozen=True)
class SplitKernel:
    """供一维积分使用的核表示

    smooth 必须接受 numpy 数组并逐元素返回复数；pv_poles 中的点按主值积分，
    deltas 由积分器解析筛选，breakpoints 是面板划分点。
    """
    smooth: Callable[[np.ndarray], np.ndarray]
    deltas: Tuple[DeltaTerm, ...] = ()
    pv_poles: Tuple[float, ...] = ()
    breakpoints: Tuple[float, ...] = ()
    label: str = ""


# ---------------------------------------------------------------------------
# 向量化内核
# ---------------------------------------------------------------------------

def _feynman_ieps(dt, r, eps):
    """i/(4π²(dt² − r² − iε))"""
    dt = np.asarray(dt, dtype=float)
    u = dt * dt - r * r
    denom = FOUR_PI_SQ * (u * u + eps * eps)
    return (-eps + 1j * u) / denom


def _feynman_pv(dt, r):
    """(i/4π²)·1/(dt² − r²)，主值部分的逐点值"""
    dt = np.asarray(dt, dtype=float)
    return 1j / (FOUR_PI_SQ * (dt * dt - r * r))


def _wightman(dt, r, eps):
    """−1/(4π²[(dt − iε)² − r²])，eps = 0 时为 ε→0 的逐点极限"""
    dt = np.asarray(dt, dtype=float)
    u = dt * dt - eps * eps - r * r
    v = 2.0 * dt * eps
    return -(u + 1j * v) / (FOUR_PI_SQ * (u * u + v * v))


def _disorder_F(dt, r):
    """ε→0 的分子 dt⁵ + 10 dt³ r² + 5 dt r⁴"""
    dt = np.asarray(dt, dtype=float)
    dt2 = dt * dt
    r2 = r * r
    return dt * (dt2 * dt2 + 10.0 * dt2 * r2 + 5.0 * r2 * r2)


def _inverse_fifth(t, r, eps):
    """1/((t − iε)² − r²)⁵，t 为数组"""
    z = (t - 1j * eps) ** 2 - r * r
    z2 = z * z
    return 1.0 / (z2 * z2 * z)


def _disorder_I(dt, r, eps, sigma2):
    """I 核；两支合并为 |dt| 的函数，θ(0) = 1/2 时在 dt = 0 处连续"""
    a = np.abs(np.asarray(dt, dtype=float))
    prefactor = 1j * DISORDER_PREFACTOR * sigma2
    return prefactor * _disorder_F(a, r) * _inverse_fifth(a, r, eps)


def _disorder_I_plus(dt, r, eps, sigma2):
    """I⁺ = I·θ(dt)"""
    dt = np.asarray(dt, dtype=float)
    step = np.where(dt > 0.0, 1.0, np.where(dt == 0.0, 0.5, 0.0))
    return step * _disorder_I(dt, r, eps, sigma2)


def _disorder_I_plus_continued(dt, r, eps, sigma2):
    """正时间分支对全部 dt 的延拓：C·F(dt)/((dt − iε)² − r²)⁵"""
    dt = np.asarray(dt, dtype=float)
    prefactor = 1j * DISORDER_PREFACTOR * sigma2
    return prefactor * _disorder_F(dt, r) * _inverse_fifth(dt, r, eps)


# ---------------------------------------------------------------------------
# 公开的逐点求值
# ---------------------------------------------------------------------------

def feynman_free_ieps(iv: SpacetimeInterval, reg: Regularization) -> complex:
    """统一 iε 形式的自由 Feynman 传播子 i/(4π²(dt² − r² − iε))"""
    return complex(_feynman_ieps(iv.dt, iv.radius, reg.eps))


def feynman_free_split(iv: SpacetimeInterval) -> KernelValue:
    """自由 Feynman 传播子的主值 + 光锥 delta 分裂形式

    smooth = (i/4π²)·PV 1/(dt² − r²)；两个 delta 项位于 dt = ±r，权重均为 −1/(8πr)。

    Raises:
        ValidationError: radius = 0
        OnLightConeError: |dt| = radius
    """
    r = iv.radius
    if r <= 0.0:
        raise ValidationError('radius', "分裂形式要求 radius > 0")
    if abs(iv.dt) == r:
        raise OnLightConeError(iv.dt, r)
    weight = complex(-1.0 / (8.0 * math.pi * r))
    return KernelValue(
        smooth=complex(_feynman_pv(iv.dt, r)),
        deltas=(DeltaTerm(-r, weight), DeltaTerm(r, weight)),
    )


def wightman_free(iv: SpacetimeInterval, reg: Regularization) -> complex:
    """自由 Wightman 函数 −1/(4π²[(dt − iε)² − r²])"""
    return complex(_wightman(iv.dt, iv.radius, reg.eps))


def wightman_free_split(iv: SpacetimeInterval) -> KernelValue:
    """Wightman 函数的 Sokhotski–Plemelj 分裂形式

    smooth = −(1/4π²)·PV 1/(dt² − r²)；delta 项 −i/(8πr) 位于 dt = +r，
    +i/(8πr) 位于 dt = −r。

    Raises:
        ValidationError: radius = 0
        OnLightConeError: |dt| = radius
    """
    r = iv.radius
    if r <= 0.0:
        raise ValidationError('radius', "分裂形式要求 radius > 0")
    if abs(iv.dt) == r:
        raise OnLightConeError(iv.dt, r)
    w = 1.0 / (8.0 * math.pi * r)
    return KernelValue(
        smooth=complex(_wightman(iv.dt, r, 0.0)),
        deltas=(DeltaTerm(-r, 1j * w), DeltaTerm(r, -1j * w)),
    )


def disorder_F(iv: SpacetimeInterval) -> float:
    """无序核分子 F(dt, r) = dt⁵ + 10dt³r² + 5dt r⁴（ε→0）"""
    return float(_disorder_F(iv.dt, iv.radius))


def _near_light_cone(iv: SpacetimeInterval, reg: Regularization) -> bool:
    return abs(abs(iv.dt) - iv.radius) <= reg.eps


def disorder_I(iv: SpacetimeInterval, reg: Regularization, dm: DisorderModel) -> complex:
    """O(σ²) 无序修正核 I(dt, r)"""
    return complex(_disorder_I(iv.dt, iv.radius, reg.eps, dm.sigma2))


def disorder_I_sample(iv: SpacetimeInterval, reg: Regularization, dm: DisorderModel) -> KernelSample:
    """带误差估计的 I 核；光锥附近（||dt| − r| ≤ eps）误差估计放大为 |I| 本身"""
    value = disorder_I(iv, reg, dm)
    near = _near_light_cone(iv, reg)
    if near:
        logger.debug("光锥附近的 I 核取值", dt=iv.dt, radius=iv.radius, eps=reg.eps)
        err = abs(value)
    else:
        err = 8.0 * np.finfo(float).eps * abs(value)
    return KernelSample(value=value, err_est=err, near_light_cone=near)


def disorder_I_plus(iv: SpacetimeInterval, reg: Regularization, dm: DisorderModel) -> complex:
    """I⁺ = I·θ(dt)，θ(0) = 1/2"""
    return complex(_disorder_I_plus(iv.dt, iv.radius, reg.eps, dm.sigma2))


def disorder_I_plus_continued(iv: SpacetimeInterval, reg: Regularization, dm: DisorderModel) -> complex:
    """I⁺ 的延拓读法：dt > 0 分支对所有 dt 成立（类空区间上为 dt 的奇函数）"""
    return complex(_disorder_I_plus_continued(iv.dt, iv.radius, reg.eps, dm.sigma2))


def uniform_prescription_defect(iv: SpacetimeInterval, reg: Regularization, dm: DisorderModel) -> float:
    """I 与统一 iε 规定重建值之间的相对差

    重建值取偶函数分子 F(|dt|) 并对所有 dt 使用 (dt − iε)。若 I 满足因果抵消所需的
    统一结构，此值为 0；I 的 iε 规定随 sgn(dt) 翻转，故在有限 eps 的类时区域不为 0。
    """
    value = disorder_I(iv, reg, dm)
    a = abs(iv.dt)
    prefactor = 1j * DISORDER_PREFACTOR * dm.sigma2
    uniform = complex(prefactor * _disorder_F(a, iv.radius) * _inverse_fifth(iv.dt, iv.radius, reg.eps))
    scale = max(abs(value), abs(uniform))
    if scale == 0.0:
        return 0.0
    return abs(value - uniform) / scale


# ---------------------------------------------------------------------------
# SplitKernel 工厂
# ---------------------------------------------------------------------------

def feynman_kernel(r: float, eps: float = None) -> SplitKernel:
    """Feynman 传播子核；eps 为 None 时使用主值 + delta 分裂形式"""
    if eps is None:
        if r <= 0.0:
            raise ValidationError('radius', "分裂形式要求 radius > 0")
        weight = complex(-1.0 / (8.0 * math.pi * r))
        return SplitKernel(
            smooth=lambda x: _feynman_pv(x, r),
            deltas=(DeltaTerm(-r, weight), DeltaTerm(r, weight)),
            pv_poles=(-r, r),
            label='feynman_split',
        )
    return SplitKernel(
        smooth=lambda x: _feynman_ieps(x, r, eps),
        breakpoints=(-r, r),
        label='feynman_ieps',
    )


def wightman_kernel(r: float, eps: float = None) -> SplitKernel:
    """Wightman 函数核；eps 为 None 时使用分裂形式，eps = 0 表示逐点 ε→0 极限（仅限类空区间）"""
    if eps is None:
        if r <= 0.0:
            raise ValidationError('radius', "分裂形式要求 radius > 0")
        w = 1.0 / (8.0 * math.pi * r)
        return SplitKernel(
            smooth=lambda x: _wightman(x, r, 0.0),
            deltas=(DeltaTerm(-r, 1j * w), DeltaTerm(r, -1j * w)),
            pv_poles=(-r, r),
            label='wightman_split',
        )
    return SplitKernel(
        smooth=lambda x: _wightman(x, r, eps),
        breakpoints=(-r, 0.0, r) if r > 0.0 else (0.0,),
        label='wightman',
    )


def disorder_kernel(r: float, dm: DisorderModel, eps: float) -> SplitKernel:
    """I 核；eps = 0 只能用于 |dt| < r 的区域"""
    sigma2 = dm.sigma2
    return SplitKernel(
        smooth=lambda x: _disorder_I(x, r, eps, sigma2),
        breakpoints=(-r, 0.0, r) if r > 0.0 else (0.0,),
        label='disorder_I',
    )


def disorder_plus_kernel(r: float, dm: DisorderModel, eps: float, reading: str = 'restricted') -> SplitKernel:
    """I⁺ 核

    Args:
        r: 空间间隔
        dm: 无序模型
        eps: iε 值（0 表示类空区域内的 ε→0 极限）
        reading: 'restricted' 取 I·θ(dt)；'continued' 取正时间分支的延拓

    Raises:
        ValidationError: 未知的读法
    """
    sigma2 = dm.sigma2
    breakpoints = (-r, 0.0, r) if r > 0.0 else (0.0,)
    if reading == 'restricted':
        return SplitKernel(
            smooth=lambda x: _disorder_I_plus(x, r, eps, sigma2),
            breakpoints=breakpoints,
            label='disorder_I_plus',
        )
    if reading == 'continued':
        return SplitKernel(
            smooth=lambda x: _disorder_I_plus_continued(x, r, eps, sigma2),
            breakpoints=breakpoints,
            label='disorder_I_plus_continued',
        )
    raise ValidationError('i_plus_reading', f"未知的 I⁺ 读法: {reading}")
