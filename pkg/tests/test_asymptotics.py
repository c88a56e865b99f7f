"""
先兆区与波区解析表达式测试
"""

import math
import unittest

import numpy as np

from asymptotics import (
    TWO_PI_FOURTH, WaveZoneInput, crossover_r0, fit_crossover_slope, loglog_fit, precursor_closed_form_A,
    precursor_closed_form_parts, precursor_delta_part, precursor_grid, wave_zone_disorder
)
from error_handler.exceptions import DomainError, ValidationError
from greens.kernels import feynman_kernel
from quadrature import QuadratureSpec, weighted_xi_integral


def _numeric_pv_amplitude(omega0, r, dtau):
    """数值积分的先兆振幅（无量纲变量）"""
    split = feynman_kernel(omega0 * r)
    return weighted_xi_integral(split, 1.0, omega0 * dtau, QuadratureSpec()).value


class TestPrecursorClosedForm(unittest.TestCase):
    """先兆振幅闭式"""

    def test_matches_numerical_integral(self):
        for omega0, r, dtau in ((1.0, 2.0, 1.0), (1.0, 5.0, 4.0), (2.0, 10.0, 2.0), (0.5, 30.0, 3.0)):
            expected = _numeric_pv_amplitude(omega0, r, dtau)
            value = precursor_closed_form_A(omega0, r, dtau)
            self.assertAlmostEqual(abs(value - expected), 0.0, delta=1e-9 * max(abs(expected), 1e-6),
                                   msg=f"omega0={omega0}, r={r}, dtau={dtau}")

    def test_amplitude_is_imaginary(self):
        value = precursor_closed_form_A(1.0, 3.0, 2.0)
        self.assertEqual(value.real, 0.0)
        self.assertNotEqual(value.imag, 0.0)

    def test_zero_window(self):
        parts = precursor_closed_form_parts(1.0, 2.0, 0.0)
        self.assertEqual(parts.value, 0j)

    def test_domain(self):
        with self.assertRaises(DomainError):
            precursor_closed_form_A(1.0, 2.0, 2.0)
        with self.assertRaises(DomainError):
            precursor_closed_form_A(1.0, 2.0, 3.0)
        with self.assertRaises(DomainError):
            precursor_closed_form_A(0.0, 2.0, 1.0)
        with self.assertRaises(DomainError):
            precursor_closed_form_A(1.0, 2.0, -1.0)

    def test_wave_zone_decay(self):
        # 波区内振幅 ∝ (ω₀r)⁻²
        values = [abs(precursor_closed_form_A(1.0, r, 2.0)) for r in (100.0, 200.0, 400.0)]
        fit = loglog_fit([100.0, 200.0, 400.0], values)
        self.assertAlmostEqual(fit.slope, -2.0, delta=0.1)

    def test_grid_skips_lightcone_points(self):
        grid = precursor_grid(1.0, [1.0, 5.0, 20.0], 2.0)
        self.assertEqual([y for y, _ in grid], [5.0, 20.0])
        self.assertEqual(grid[1][1], precursor_closed_form_A(1.0, 20.0, 2.0))

    def test_grid_validates_points(self):
        with self.assertRaises(ValidationError):
            precursor_grid(1.0, [5.0], 0.0)
        with self.assertRaises(ValidationError):
            precursor_grid(1.0, [5.0, -1.0], 2.0)
        with self.assertRaises(ValidationError):
            precursor_grid(0.0, [5.0], 2.0)


class TestDeltaPart(unittest.TestCase):
    """光锥 delta 项"""

    def test_zero_before_light_cone(self):
        self.assertEqual(precursor_delta_part(1.0, 5.0, 5.0 * (1.0 - 1e-3)), 0.0)
        self.assertEqual(precursor_delta_part(1.0, 5.0, 5.0), 0.0)

    def test_sifted_value(self):
        omega0, r, dtau = 1.3, 2.0, 3.0
        expected = -(dtau - r) * math.cos(omega0 * r) / (4.0 * math.pi * r)
        self.assertAlmostEqual(precursor_delta_part(omega0, r, dtau), expected, delta=1e-16)


class TestWaveZoneDisorder(unittest.TestCase):
    """ℐ 的波区极限"""

    def test_formula(self):
        value = wave_zone_disorder(1.0, 0.2, 1.0)
        expected = -1j * math.pi * 0.2 * math.sin(1.0) / (2.0 * math.pi) ** 4
        self.assertAlmostEqual(abs(value - expected), 0.0, delta=1e-18)
        self.assertEqual(TWO_PI_FOURTH, (2.0 * math.pi) ** 4)

    def test_linear_in_sigma2(self):
        self.assertEqual(wave_zone_disorder(2.0, 0.0, 1.0), 0j)
        a = wave_zone_disorder(2.0, 0.5, 1.3)
        b = wave_zone_disorder(2.0, 1.0, 1.3)
        self.assertAlmostEqual(abs(b - 2.0 * a), 0.0, delta=1e-16)

    def test_vanishes_at_full_periods(self):
        self.assertAlmostEqual(abs(wave_zone_disorder(1.0, 1.0, 2.0 * math.pi)), 0.0, delta=1e-15)


class TestCrossover(unittest.TestCase):
    """交叉尺度与拟合"""

    def test_crossover_estimate(self):
        self.assertEqual(crossover_r0(0.5, 2.0), 2.0)
        with self.assertRaises(ValidationError):
            crossover_r0(-1.0, 1.0)

    def test_loglog_fit_exact_power_law(self):
        x = np.geomspace(1.0, 100.0, 5)
        fit = loglog_fit(x, 3.0 * x ** -4)
        self.assertAlmostEqual(fit.slope, -4.0, delta=1e-12)
        self.assertAlmostEqual(fit.intercept, math.log(3.0), delta=1e-12)
        self.assertLess(fit.slope_err, 1e-10)
        self.assertEqual(fit.points, 5)

    def test_two_point_fit_has_no_spread(self):
        fit = fit_crossover_slope([1.0, 10.0], [2.0, 20.0])
        self.assertAlmostEqual(fit.slope, 1.0, delta=1e-14)
        self.assertEqual(fit.slope_err, 0.0)
        self.assertEqual(fit.to_dict()['points'], 2)

    def test_fit_validation(self):
        with self.assertRaises(ValidationError):
            loglog_fit([1.0], [1.0])
        with self.assertRaises(ValidationError):
            loglog_fit([1.0, 2.0], [1.0, 0.0])
        with self.assertRaises(ValidationError):
            loglog_fit([1.0, 2.0, 3.0], [1.0, 2.0])


class TestWaveZoneInput(unittest.TestCase):

    def test_regime_helpers(self):
        point = WaveZoneInput(omega0=1.0, sigma2=0.1, dtau=2.0, r=60.0)
        self.assertTrue(point.is_precursor)
        self.assertTrue(point.in_wave_zone())
        self.assertFalse(point.in_wave_zone(threshold=100.0))

    def test_closed_forms(self):
        point = WaveZoneInput(omega0=2.0, sigma2=0.3, dtau=1.0, r=2.5)
        self.assertEqual(point.precursor_amplitude(), precursor_closed_form_A(2.0, 2.5, 1.0))
        self.assertEqual(point.disorder_limit(), wave_zone_disorder(2.0, 0.3, 1.0))
        with self.assertRaises(DomainError):
            WaveZoneInput(omega0=1.0, sigma2=0.0, dtau=3.0, r=2.0).precursor_amplitude()

    def test_validation(self):
        with self.assertRaises(ValidationError):
            WaveZoneInput(omega0=1.0, sigma2=-0.1, dtau=1.0, r=1.0)
        with self.assertRaises(ValidationError):
            WaveZoneInput(omega0=1.0, sigma2=0.1, dtau=0.0, r=1.0)


if __name__ == '__main__':
    unittest.main()
