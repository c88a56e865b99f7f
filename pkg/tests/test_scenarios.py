"""
场景引擎测试
"""

import unittest

from asymptotics import precursor_closed_form_A
from error_handler.exceptions import DomainError, ValidationError
from greens.kernels import Regularization
from quadrature import IntegralResult, QuadratureSpec
from scenarios import (
    EngineOptions, Regime, Scenario, ScenarioEngine, ScenarioResult, SystemParams, TermBreakdown,
    TermValue, causality_diagnostics, empirical_crossover_r0
)


def _engine(**options) -> ScenarioEngine:
    spec = QuadratureSpec(gauss_nodes=8, max_gauss_nodes=8)
    return ScenarioEngine(Regularization(eps=1e-2), spec, EngineOptions(**options))


class TestSystemParams(unittest.TestCase):
    """系统参数"""

    def test_derived_quantities(self):
        params = SystemParams(omega0=2.0, r=3.0, lam=2.0, tau0=0.5, tau=1.5, sigma2=0.1)
        self.assertEqual(params.dtau, 1.0)
        self.assertEqual(params.omega0_r, 6.0)
        self.assertEqual(params.omega0_dtau, 2.0)
        self.assertAlmostEqual(params.s_disorder, 0.8, delta=1e-15)
        self.assertEqual(params.coupling_prefactor, 1.0)
        self.assertIs(params.regime(), Regime.PRECURSOR)
        self.assertIs(params.replace(dtau=3.0).regime(), Regime.LIGHTCONE)

    def test_replace_dtau_keeps_window_start(self):
        params = SystemParams(omega0=1.0, r=2.0, tau0=1.0, tau=2.0).replace(dtau=3.0)
        self.assertEqual(params.tau0, 1.0)
        self.assertEqual(params.tau, 4.0)
        moved = SystemParams(omega0=1.0, r=2.0, tau0=1.0, tau=2.0).replace(tau0=5.0, dtau=1.0)
        self.assertEqual((moved.tau0, moved.tau), (5.0, 6.0))

    def test_validation(self):
        bad = [
            dict(omega0=0.0, r=1.0),
            dict(omega0=1.0, r=0.0),
            dict(omega0=1.0, r=1.0, tau0=1.0, tau=1.0),
            dict(omega0=1.0, r=1.0, sigma2=-0.1),
            dict(omega0=float('nan'), r=1.0),
            dict(omega0=True, r=1.0),
        ]
        for kwargs in bad:
            with self.assertRaises(ValidationError):
                SystemParams(**kwargs)

    def test_to_dict(self):
        data = SystemParams(omega0=1.0, r=2.0).to_dict()
        self.assertEqual(data['lambda'], 1.0)
        self.assertEqual(data['dtau'], 1.0)
        self.assertIn('s_disorder', data)


class TestModels(unittest.TestCase):
    """场景与分项模型"""

    def test_scenario_parse(self):
        self.assertIs(Scenario.parse('2'), Scenario.PSI_F)
        self.assertIs(Scenario.parse(3), Scenario.BIG_PHI_F)
        self.assertIs(Scenario.parse(Scenario.PHI_F), Scenario.PHI_F)
        with self.assertRaises(ValidationError):
            Scenario.parse(4)
        with self.assertRaises(ValidationError):
            Scenario.parse('phi')

    def test_total_counts_additive_terms_only(self):
        breakdown = TermBreakdown()
        breakdown.add('a', TermValue(1.0 + 0j, 1e-12))
        breakdown.add('b', IntegralResult(2.0 + 0j, 1e-12, 3, flags=('regulated',)))
        breakdown.add('diag', TermValue(100.0 + 0j, 1.0, flags=('not_converged',)), False)
        total = breakdown.total()
        self.assertEqual(total.value, 3.0 + 0j)
        self.assertLess(total.err_est, 1e-11)
        self.assertEqual(total.flags, ('regulated',))
        self.assertEqual(breakdown.flags, ('regulated', 'not_converged'))
        self.assertEqual(list(breakdown), ['a', 'b', 'diag'])

    def test_imaginary_excess_is_flagged(self):
        params = SystemParams(omega0=1.0, r=2.0)
        breakdown = TermBreakdown()
        breakdown.add('term', TermValue(1.0 + 1e-3j, 1e-8))
        result = ScenarioResult.assemble(params, Scenario.PHI_F, breakdown, 50.0, disorder=False)
        self.assertIn('imaginary_excess', result.flags)
        self.assertTrue(result.converged)
        self.assertEqual(result.regime_label, 'precursor')

    def test_result_to_dict(self):
        params = SystemParams(omega0=1.0, r=60.0)
        breakdown = TermBreakdown()
        breakdown.add('term', TermValue(2.0 + 0j, 1e-9))
        data = ScenarioResult.assemble(params, Scenario.PSI_F, breakdown, 50.0, disorder=True).to_dict()
        self.assertEqual(data['scenario'], 2)
        self.assertEqual(data['probability_r_dependent']['value'], 2.0)
        self.assertTrue(data['wave_zone'])
        self.assertEqual(data['breakdown']['term']['re'], 2.0)


class TestEngineOptions(unittest.TestCase):

    def test_validation(self):
        with self.assertRaises(ValidationError):
            EngineOptions(i_plus_reading='mirrored')
        with self.assertRaises(ValidationError):
            EngineOptions(wave_zone_threshold=0.0)
        with self.assertRaises(ValidationError):
            EngineOptions(exponent_grid=(10.0, -1.0))


class TestScenarioOne(unittest.TestCase):
    """场景 1"""

    def setUp(self):
        self.engine = _engine()

    def test_precursor_amplitude_matches_closed_form(self):
        params = SystemParams(omega0=2.0, r=3.0, tau=1.0)
        amp = self.engine.amplitude_free_A(params)
        self.assertEqual(amp.delta.value, 0j)
        expected = precursor_closed_form_A(2.0, 3.0, 1.0)
        self.assertAlmostEqual(abs(amp.pv.value - expected), 0.0, delta=1e-9)

    def test_probability_is_coupling_times_amplitude_sq(self):
        params = SystemParams(omega0=1.0, r=2.0, lam=2.0, tau=1.0)
        result = self.engine.scenario1_free(params)
        amp_sq = result.breakdown['free_amplitude_sq'].value.real
        self.assertAlmostEqual(result.probability_r_dependent, amp_sq, delta=1e-14 * amp_sq)
        self.assertGreater(result.probability_r_dependent, 0.0)
        self.assertFalse(result.breakdown['free_amplitude_sq'].additive)
        self.assertIs(result.scenario, Scenario.PHI_F)

    def test_quartic_in_coupling(self):
        weak = self.engine.scenario1_free(SystemParams(omega0=1.0, r=2.0, lam=1.0))
        strong = self.engine.scenario1_free(SystemParams(omega0=1.0, r=2.0, lam=2.0))
        self.assertAlmostEqual(strong.probability_r_dependent / weak.probability_r_dependent, 16.0, delta=1e-12)

    def test_scale_invariance(self):
        a = self.engine.scenario1_free(SystemParams(omega0=1.0, r=2.0, tau=1.0))
        b = self.engine.scenario1_free(SystemParams(omega0=2.0, r=1.0, tau=0.5))
        self.assertAlmostEqual(a.probability_r_dependent, b.probability_r_dependent,
                               delta=1e-14 * abs(a.probability_r_dependent))

    def test_lightcone_has_delta_part(self):
        params = SystemParams(omega0=1.0, r=1.0, tau=2.0)
        result = self.engine.scenario1_free(params)
        self.assertIs(result.regime, Regime.LIGHTCONE)
        self.assertNotEqual(result.breakdown['amplitude_delta'].value, 0j)

    def test_zero_disorder_reduces_to_free(self):
        params = SystemParams(omega0=1.0, r=3.0, tau=1.5, sigma2=0.0)
        free = self.engine.scenario1_free(params)
        disordered = self.engine.scenario1_disorder(params)
        self.assertEqual(disordered.breakdown['disorder_cross_G0_I'].value, 0j)
        self.assertAlmostEqual(disordered.probability_r_dependent, free.probability_r_dependent, delta=1e-18)
        self.assertTrue(disordered.disorder)

    def test_regulated_flag_only_on_lightcone(self):
        precursor = self.engine.scenario1_disorder(SystemParams(omega0=1.0, r=3.0, tau=1.5, sigma2=0.1))
        self.assertNotIn('regulated', precursor.breakdown['disorder_integral_I'].flags)
        lightcone = self.engine.scenario1_disorder(SystemParams(omega0=1.0, r=1.0, tau=1.5, sigma2=0.1))
        self.assertIn('regulated', lightcone.breakdown['disorder_integral_I'].flags)


class TestScenarioTwoAndThree(unittest.TestCase):
    """场景 2、3"""

    def test_scenario2_adds_wightman_pair(self):
        engine = _engine()
        params = SystemParams(omega0=1.0, r=3.0, tau=1.5)
        one = engine.scenario1_free(params)
        two = engine.scenario2_free(params)
        pair = two.breakdown['wightman_pair_r']
        self.assertTrue(pair.additive)
        self.assertAlmostEqual(two.probability_r_dependent, one.probability_r_dependent + pair.value.real,
                               delta=1e-15)

    def test_r_independent_terms_are_not_additive(self):
        params = SystemParams(omega0=1.0, r=3.0, tau=1.5)
        plain = _engine().scenario2_free(params)
        extended = _engine(include_r_independent=True).scenario2_free(params)
        self.assertFalse(extended.breakdown['r_independent'].additive)
        self.assertNotIn('r_independent', plain.breakdown)
        self.assertEqual(plain.probability_r_dependent, extended.probability_r_dependent)

    def test_scenario2_disorder_labels(self):
        result = _engine().scenario2_disorder(SystemParams(omega0=1.0, r=3.0, tau=1.5, sigma2=0.1))
        for label in ('disorder_cross_G0_I', 'wightman_pair_r', 'disorder_wightman_I_plus'):
            self.assertTrue(result.breakdown[label].additive)
        self.assertFalse(result.breakdown['i_plus_phase_sum_pos'].additive)

    def test_precursor_i_plus_pairings_vanish_by_default(self):
        params = SystemParams(omega0=1.0, r=3.0, tau=1.5, sigma2=0.1)
        result = _engine().scenario2_disorder(params)
        for label in ('i_plus_phase_sum_pos', 'i_plus_phase_sum_neg'):
            self.assertLessEqual(abs(result.breakdown[label].value), 1e-10)
        self.assertNotIn('i_plus_nonvanishing', result.flags)
        self.assertNotIn('imaginary_excess', result.flags)

        restricted = _engine(i_plus_reading='restricted').scenario2_disorder(params)
        self.assertGreater(abs(restricted.breakdown['i_plus_phase_sum_pos'].value), 1e-10)
        self.assertIn('i_plus_nonvanishing', restricted.flags)

    def test_scenario2_disorder_correction_is_linear_in_sigma2(self):
        engine = _engine()
        params = SystemParams(omega0=1.0, r=3.0, tau=1.5)
        free = engine.scenario2_free(params).probability_r_dependent
        small = engine.scenario2_disorder(params.replace(sigma2=0.1)).probability_r_dependent - free
        large = engine.scenario2_disorder(params.replace(sigma2=0.2)).probability_r_dependent - free
        self.assertNotEqual(small, 0.0)
        self.assertAlmostEqual(large / small, 2.0, delta=1e-8)

    def test_scenario2_zero_disorder_reduces_to_free(self):
        engine = _engine()
        params = SystemParams(omega0=1.0, r=3.0, tau=1.5, sigma2=0.0)
        free = engine.scenario2_free(params).probability_r_dependent
        disordered = engine.scenario2_disorder(params).probability_r_dependent
        self.assertAlmostEqual(disordered, free, delta=1e-14 * abs(free))

    def test_free_noncausal_terms_cancel(self):
        result = _engine().scenario3_free(SystemParams(omega0=1.0, r=3.0, tau=1.5))
        residual = result.breakdown['noncausal_residual_free'].value
        largest = result.breakdown['largest_constituent'].value.real
        self.assertGreater(largest, 0.0)
        self.assertLess(abs(residual) / largest, 1e-8)
        self.assertTrue(result.breakdown['deltaP_groups'].additive)
        self.assertFalse(result.breakdown['deltaP_group_A'].additive)

    def test_disorder_residual_exceeds_free_residual(self):
        result = _engine().scenario3_disorder(SystemParams(omega0=1.0, r=3.0, tau=1.5, sigma2=0.1))
        free = result.breakdown['noncausal_residual_free'].value
        disorder = result.breakdown['noncausal_residual_disorder'].value
        self.assertGreater(abs(disorder), 10.0 * abs(free))
        self.assertLess(abs(disorder.imag), 1e-6 * abs(disorder.real))

    def test_unresolved_four_time_terms_are_not_converged(self):
        # 光锥区的正则化核在 8 / 12 节点下分辨不出
        result = _engine().scenario3_disorder(SystemParams(omega0=1.0, r=1.0, tau=2.0, sigma2=0.1))
        self.assertIn('not_converged', result.breakdown['deltaP_disorder'].flags)
        self.assertIn('not_converged', result.flags)
        self.assertFalse(result.converged)
        self.assertIn('regulated', result.flags)

    def test_evaluate_dispatch(self):
        engine = _engine()
        params = SystemParams(omega0=1.0, r=3.0, tau=1.0)
        result = engine.evaluate(params, '1', True)
        self.assertIs(result.scenario, Scenario.PHI_F)
        self.assertTrue(result.disorder)
        with self.assertRaises(ValidationError):
            engine.evaluate(params, 7, False)


class TestDiagnostics(unittest.TestCase):
    """因果性诊断"""

    def test_rejects_lightcone_result(self):
        engine = _engine()
        result = engine.scenario1_free(SystemParams(omega0=1.0, r=1.0, tau=2.0))
        with self.assertRaises(DomainError):
            causality_diagnostics(result, engine)

    def test_precursor_diagnostics(self):
        engine = _engine()
        result = engine.scenario1_free(SystemParams(omega0=1.0, r=2.0, tau=1.0))
        diagnostics = causality_diagnostics(result, engine)
        self.assertEqual(diagnostics.mirrored_dtau, 3.0)
        self.assertIsNotNone(diagnostics.ratio_to_mirrored)
        self.assertEqual(diagnostics.suppression_fit.points, 3)
        self.assertLess(diagnostics.suppression_fit.slope, 0.0)
        self.assertIsNone(diagnostics.free_residual)
        self.assertEqual(diagnostics.to_dict()['mirrored']['dtau'], 3.0)

    def test_crossover_validation(self):
        engine = _engine()
        with self.assertRaises(DomainError):
            empirical_crossover_r0(1.0, 0.0, 1.0, engine)
        with self.assertRaises(ValidationError):
            empirical_crossover_r0(0.0, 1.0, 1.0, engine)


if __name__ == '__main__':
    unittest.main()
