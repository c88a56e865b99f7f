# 三种实验场景的转移概率模块
from .models import Scenario, Regime, SystemParams, TermValue, TermBreakdown, ScenarioResult
from .scenario_engine import (
    ScenarioEngine, EngineOptions, Amplitude, default_engine,
    amplitude_free_A, scenario1_free, scenario1_disorder,
    scenario2_free, scenario2_disorder, scenario3_free, scenario3_disorder
)
from .diagnostics import (
    CausalityDiagnostics, CrossoverEstimate, causality_diagnostics, empirical_crossover_r0
)

__all__ = [
    'Scenario', 'Regime', 'SystemParams', 'TermValue', 'TermBreakdown', 'ScenarioResult',
    'ScenarioEngine', 'EngineOptions', 'Amplitude', 'default_engine',
    'amplitude_free_A', 'scenario1_free', 'scenario1_disorder',
    'scenario2_free', 'scenario2_disorder', 'scenario3_free', 'scenario3_disorder',
    'CausalityDiagnostics', 'CrossoverEstimate', 'causality_diagnostics', 'empirical_crossover_r0'
]
