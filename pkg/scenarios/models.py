"""
场景计算的数据模型
"""

import math
import sys
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterator, Optional, Tuple, Union

from error_handler.exceptions import ValidationError
from quadrature.types import IntegralResult, merge_flags


class Scenario(Enum):
    """三种末态：|φf⟩（只测原子 2，场为真空）、|ψf⟩（场末态求和）、|Φf⟩（场与原子 1 均求和）"""
    PHI_F = 1
    PSI_F = 2
    BIG_PHI_F = 3

    @classmethod
    def parse(cls, value: Union[int, str, "Scenario"]) -> "Scenario":
        if isinstance(value, cls):
            return value
        try:
            return cls(int(value))
        except (TypeError, ValueError):
            raise ValidationError('scenario', f"未知场景: {value}，可选 1、2、3")


class Regime(Enum):
    PRECURSOR = "precursor"
    LIGHTCONE = "lightcone"


@dataclass(frozen=True)
class SystemParams:
    """双量子比特系统参数（自然单位）

    Attributes:
        omega0: 原子能隙 ω₀ > 0
        r: 两个量子比特的间距 r > 0
        lam: 耦合常数 λ
        tau0: 观测窗口起点
        tau: 观测窗口终点，Δτ = τ − τ₀ > 0
        sigma2: 无序强度 σ² ≥ 0
    """
    omega0: float
    r: float
    lam: float = 1.0
    tau0: float = 0.0
    tau: float = 1.0
    sigma2: float = 0.0

    def __post_init__(self):
        for name in ('omega0', 'r', 'lam', 'tau0', 'tau', 'sigma2'):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or isinstance(value, bool) or not math.isfinite(value):
                raise ValidationError(name, f"{name} 必须是有限实数，收到 {value!r}")
            object.__setattr__(self, name, float(value))
        if self.omega0 <= 0.0:
            raise ValidationError('omega0', f"omega0 必须为正数，收到 {self.omega0}")
        if self.r <= 0.0:
            raise ValidationError('r', f"r 必须为正数，收到 {self.r}")
        if not self.tau > self.tau0:
            raise ValidationError('tau', f"tau 必须大于 tau0，收到 [{self.tau0}, {self.tau}]")
        if self.sigma2 < 0.0:
            raise ValidationError('sigma2', f"sigma2 不能为负，收到 {self.sigma2}")

    @property
    def dtau(self) -> float:
        return self.tau - self.tau0

    @property
    def omega0_r(self) -> float:
        return self.omega0 * self.r

    @property
    def omega0_dtau(self) -> float:
        return self.omega0 * self.dtau

    @property
    def s_disorder(self) -> float:
        """无量纲无序强度 σ²ω₀³"""
        return self.sigma2 * self.omega0 ** 3

    @property
    def coupling_prefactor(self) -> float:
        """λ⁴/16"""
        return self.lam ** 4 / 16.0

    def regime(self) -> Regime:
        return Regime.PRECURSOR if self.dtau < self.r else Regime.LIGHTCONE

    def is_wave_zone(self, threshold: float) -> bool:
        return self.omega0_r >= threshold

    def replace(self, **changes) -> "SystemParams":
        values = {name: getattr(self, name) for name in ('omega0', 'r', 'lam', 'tau0', 'tau', 'sigma2')}
        dtau = changes.pop('dtau', None)
        values.update(changes)
        if dtau is not None:
            values['tau'] = values['tau0'] + dtau
        return SystemParams(**values)

    def to_dict(self) -> Dict[str, float]:
        return {
            'omega0': self.omega0,
            'r': self.r,
            'lambda': self.lam,
            'tau0': self.tau0,
            'tau': self.tau,
            'dtau': self.dtau,
            'sigma2': self.sigma2,
            'omega0_r': self.omega0_r,
            'omega0_dtau': self.omega0_dtau,
            's_disorder': self.s_disorder,
        }


@dataclass(frozen=True)
class TermValue:
    """分项结果

    Attributes:
        value: 复数值
        err_est: 误差估计
        additive: 是否计入概率总和
        flags: 诊断标记
    """
    value: complex
    err_est: float
    additive: bool = True
    flags: Tuple[str, ...] = ()

    @classmethod
    def from_result(cls, result: IntegralResult, additive: bool = True, *flags: str) -> "TermValue":
        return cls(complex(result.value), float(result.err_est), additive, merge_flags(result.flags, flags))

    def to_dict(self) -> Dict[str, Any]:
        return {
            're': self.value.real,
            'im': self.value.imag,
            'err_est': self.err_est,
            'additive': self.additive,
            'flags': list(self.flags),
        }


class TermBreakdown:
    """按标签组织的分项，保持插入顺序"""

    def __init__(self):
        self._terms: Dict[str, TermValue] = {}

    def add(self, label: str, term: Union[TermValue, IntegralResult], additive: Optional[bool] = None,
            *flags: str) -> TermValue:
        if isinstance(term, IntegralResult):
            term = TermValue.from_result(term, True if additive is None else additive, *flags)
        elif additive is not None or flags:
            term = TermValue(term.value, term.err_est,
                             term.additive if additive is None else additive,
                             merge_flags(term.flags, flags))
        self._terms[label] = term
        return term

    def extend(self, other: "TermBreakdown") -> None:
        for label, term in other.items():
            self._terms[label] = term

    def __getitem__(self, label: str) -> TermValue:
        return self._terms[label]

    def __contains__(self, label: str) -> bool:
        return label in self._terms

    def __iter__(self) -> Iterator[str]:
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def items(self):
        return self._terms.items()

    def get(self, label: str, default: Optional[TermValue] = None) -> Optional[TermValue]:
        return self._terms.get(label, default)

    def total(self) -> TermValue:
        """计入概率的分项之和"""
        re = math.fsum(t.value.real for t in self._terms.values() if t.additive)
        im = math.fsum(t.value.imag for t in self._terms.values() if t.additive)
        err = math.fsum(t.err_est for t in self._terms.values() if t.additive)
        # 求和舍入
        err += 4.0 * sys.float_info.epsilon * math.fsum(abs(t.value) for t in self._terms.values() if t.additive)
        flags: Tuple[str, ...] = ()
        for t in self._terms.values():
            if t.additive:
                flags = merge_flags(flags, t.flags)
        return TermValue(complex(re, im), err, True, flags)

    @property
    def flags(self) -> Tuple[str, ...]:
        flags: Tuple[str, ...] = ()
        for t in self._terms.values():
            flags = merge_flags(flags, t.flags)
        return flags

    def to_dict(self) -> Dict[str, Dict[str, Any]]:
        return {label: term.to_dict() for label, term in self._terms.items()}


@dataclass
class ScenarioResult:
    """单个场景在一个参数点上的结果

    Attributes:
        params: 系统参数
        scenario: 场景
        breakdown: 分项
        probability_r_dependent: 与 r 有关的转移概率（实数）
        err_est: 概率的误差估计
        imag_part: 总和的虚部（应在 err_est 之内）
        regime: 先兆区或光锥区
        wave_zone: ω₀r 是否达到波区阈值
        disorder: 是否包含 O(σ²) 无序修正
    """
    params: SystemParams
    scenario: Scenario
    breakdown: TermBreakdown
    probability_r_dependent: float
    err_est: float
    imag_part: float
    regime: Regime
    wave_zone: bool
    disorder: bool = False
    flags: Tuple[str, ...] = field(default=())

    @classmethod
    def assemble(cls, params: SystemParams, scenario: Scenario, breakdown: TermBreakdown,
                 wave_zone_threshold: float, disorder: bool) -> "ScenarioResult":
        total = breakdown.total()
        flags = breakdown.flags
        if abs(total.value.imag) > total.err_est:
            flags = merge_flags(flags, ('imaginary_excess',))
        return cls(
            params=params,
            scenario=scenario,
            breakdown=breakdown,
            probability_r_dependent=total.value.real,
            err_est=total.err_est,
            imag_part=total.value.imag,
            regime=params.regime(),
            wave_zone=params.is_wave_zone(wave_zone_threshold),
            disorder=disorder,
            flags=flags,
        )

    @property
    def converged(self) -> bool:
        return 'not_converged' not in self.flags

    @property
    def regime_label(self) -> str:
        label = self.regime.value
        return f"{label}+wave_zone" if self.wave_zone else label

    def to_dict(self) -> Dict[str, Any]:
        return {
            'scenario': self.scenario.value,
            'scenario_name': self.scenario.name,
            'disorder': self.disorder,
            'params': self.params.to_dict(),
            'regime': self.regime.value,
            'wave_zone': self.wave_zone,
            'probability_r_dependent': {
                'value': self.probability_r_dependent,
                'imag': self.imag_part,
                'err_est': self.err_est,
            },
            'breakdown': self.breakdown.to_dict(),
            'converged': self.converged,
            'flags': list(self.flags),
        }
