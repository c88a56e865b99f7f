"""
两点函数与无序核测试
"""

import math
import unittest

import numpy as np

from error_handler.exceptions import OnLightConeError, ValidationError
from greens import (
    DISORDER_PREFACTOR, FOUR_PI_SQ, DisorderModel, Regularization, SpacetimeInterval,
    disorder_F, disorder_I, disorder_I_plus, disorder_I_plus_continued, disorder_I_sample,
    disorder_kernel, disorder_plus_kernel, feynman_free_ieps, feynman_free_split, feynman_kernel,
    uniform_prescription_defect, wightman_free, wightman_free_split, wightman_kernel
)


def _samples(seed=11, n=50):
    rng = np.random.default_rng(seed)
    return zip(rng.uniform(-5.0, 5.0, n), rng.uniform(0.5, 5.0, n), rng.uniform(1e-4, 1e-2, n))


class TestRegularization(unittest.TestCase):
    """正则化参数校验"""

    def test_rejects_non_positive_eps(self):
        with self.assertRaises(ValidationError):
            Regularization(eps=0.0)

    def test_rejects_increasing_schedule(self):
        with self.assertRaises(ValidationError):
            Regularization(schedule=(1e-3, 2e-3, 4e-3))

    def test_require_schedule(self):
        Regularization(schedule=(4e-3, 2e-3, 1e-3)).require_schedule(3)
        with self.assertRaises(ValidationError):
            Regularization(schedule=()).require_schedule(3)

    def test_scaled(self):
        reg = Regularization(eps=1e-3, schedule=(4e-3, 2e-3, 1e-3)).scaled(2.0)
        self.assertEqual(reg.eps, 2e-3)
        self.assertEqual(reg.schedule, (8e-3, 4e-3, 2e-3))


class TestFeynman(unittest.TestCase):
    """Feynman 传播子"""

    def test_value(self):
        iv = SpacetimeInterval(1.3, 2.0)
        reg = Regularization(eps=1e-3)
        expected = 1j / (FOUR_PI_SQ * (1.3 ** 2 - 4.0 - 1e-3j))
        self.assertAlmostEqual(abs(feynman_free_ieps(iv, reg) - expected) / abs(expected), 0.0, delta=1e-14)

    def test_even_exactly(self):
        for dt, r, eps in _samples():
            reg = Regularization(eps=float(eps))
            self.assertEqual(feynman_free_ieps(SpacetimeInterval(dt, r), reg),
                             feynman_free_ieps(SpacetimeInterval(-dt, r), reg))

    def test_split_form(self):
        value = feynman_free_split(SpacetimeInterval(0.5, 2.0))
        self.assertAlmostEqual(abs(value.smooth - 1j / (FOUR_PI_SQ * (0.25 - 4.0))), 0.0, delta=1e-16)
        self.assertEqual([d.location for d in value.deltas], [-2.0, 2.0])
        for delta in value.deltas:
            self.assertAlmostEqual(delta.weight, -1.0 / (16.0 * math.pi), delta=1e-16)

    def test_split_rejects_light_cone(self):
        with self.assertRaises(OnLightConeError):
            feynman_free_split(SpacetimeInterval(2.0, 2.0))
        with self.assertRaises(ValidationError):
            feynman_free_split(SpacetimeInterval(1.0, 0.0))

    def test_ieps_approaches_pv_away_from_light_cone(self):
        iv = SpacetimeInterval(0.7, 1.5)
        small = feynman_free_ieps(iv, Regularization(eps=1e-9))
        self.assertAlmostEqual(abs(small - feynman_free_split(iv).smooth), 0.0, delta=1e-9)


class TestWightman(unittest.TestCase):
    """Wightman 函数"""

    def test_hermitian_exactly(self):
        for dt, r, eps in _samples(seed=12):
            reg = Regularization(eps=float(eps))
            self.assertEqual(wightman_free(SpacetimeInterval(-dt, r), reg),
                             wightman_free(SpacetimeInterval(dt, r), reg).conjugate())

    def test_split_deltas(self):
        value = wightman_free_split(SpacetimeInterval(0.5, 2.0))
        w = 1.0 / (16.0 * math.pi)
        self.assertEqual(value.deltas[0].location, -2.0)
        self.assertAlmostEqual(value.deltas[0].weight, 1j * w, delta=1e-16)
        self.assertAlmostEqual(value.deltas[1].weight, -1j * w, delta=1e-16)

    def test_spacelike_limit_is_real(self):
        value = wightman_kernel(3.0, 0.0).smooth(np.array([-1.0, 0.0, 2.5]))
        self.assertTrue(np.all(value.imag == 0.0))
        self.assertTrue(np.all(value.real > 0.0))


class TestDisorderKernel(unittest.TestCase):
    """O(σ²) 无序核"""

    def test_numerator(self):
        self.assertEqual(disorder_F(SpacetimeInterval(1.0, 2.0)), 121.0)
        self.assertEqual(disorder_F(SpacetimeInterval(-1.0, 2.0)), -121.0)

    def test_value(self):
        dt, r, eps, s = 0.8, 2.0, 1e-3, 0.3
        expected = 1j * DISORDER_PREFACTOR * s * disorder_F(SpacetimeInterval(dt, r)) / ((dt - 1j * eps) ** 2 - r * r) ** 5
        value = disorder_I(SpacetimeInterval(dt, r), Regularization(eps=eps), DisorderModel(s))
        self.assertAlmostEqual(abs(value - expected) / abs(expected), 0.0, delta=1e-13)

    def test_even_and_linear(self):
        for dt, r, eps in _samples(seed=13):
            reg = Regularization(eps=float(eps))
            iv = SpacetimeInterval(dt, r)
            self.assertEqual(disorder_I(iv, reg, DisorderModel(0.5)),
                             disorder_I(SpacetimeInterval(-dt, r), reg, DisorderModel(0.5)))
            single = disorder_I(iv, reg, DisorderModel(0.25))
            self.assertAlmostEqual(abs(disorder_I(iv, reg, DisorderModel(0.5)) - 2.0 * single),
                                   0.0, delta=1e-14 * abs(single))

    def test_zero_disorder(self):
        self.assertEqual(disorder_I(SpacetimeInterval(0.3, 1.0), Regularization(), DisorderModel(0.0)), 0j)

    def test_spacelike_limit_is_imaginary(self):
        value = disorder_kernel(2.0, DisorderModel(1.0), 0.0).smooth(np.array([-1.5, -0.2, 0.9]))
        self.assertTrue(np.all(value.real == 0.0))

    def test_sample_error_near_light_cone(self):
        reg = Regularization(eps=1e-2)
        near = disorder_I_sample(SpacetimeInterval(1.005, 1.0), reg, DisorderModel(1.0))
        far = disorder_I_sample(SpacetimeInterval(0.3, 1.0), reg, DisorderModel(1.0))
        self.assertTrue(near.near_light_cone)
        self.assertEqual(near.err_est, abs(near.value))
        self.assertFalse(far.near_light_cone)
        self.assertLess(far.err_est, 1e-14 * abs(far.value))

    def test_rejects_negative_sigma2(self):
        with self.assertRaises(ValidationError):
            DisorderModel(-0.1)


class TestDisorderPlus(unittest.TestCase):
    """I⁺ 的两种读法"""

    def setUp(self):
        self.reg = Regularization(eps=1e-3)
        self.dm = DisorderModel(1.0)

    def test_restricted_reading(self):
        iv = SpacetimeInterval(0.4, 1.0)
        self.assertEqual(disorder_I_plus(iv, self.reg, self.dm), disorder_I(iv, self.reg, self.dm))
        self.assertEqual(disorder_I_plus(SpacetimeInterval(-0.4, 1.0), self.reg, self.dm), 0j)

    def test_continued_reading_is_odd_when_spacelike(self):
        kernel = disorder_plus_kernel(2.0, self.dm, 0.0, 'continued')
        x = np.array([0.3, 1.1, 1.7])
        np.testing.assert_array_equal(kernel.smooth(-x), -kernel.smooth(x))

    def test_continued_matches_positive_branch(self):
        iv = SpacetimeInterval(0.6, 1.0)
        self.assertEqual(disorder_I_plus_continued(iv, self.reg, self.dm), disorder_I(iv, self.reg, self.dm))

    def test_unknown_reading(self):
        with self.assertRaises(ValidationError):
            disorder_plus_kernel(1.0, self.dm, 0.0, 'mirrored')

    def test_uniform_prescription_defect(self):
        self.assertEqual(uniform_prescription_defect(SpacetimeInterval(0.5, 1.0), self.reg, self.dm), 0.0)
        defect = uniform_prescription_defect(SpacetimeInterval(-3.0, 1.0), Regularization(eps=1e-2), self.dm)
        self.assertGreater(defect, 0.0)


class TestSplitKernelFactories(unittest.TestCase):
    """SplitKernel 工厂"""

    def test_feynman_split_has_poles_and_deltas(self):
        kernel = feynman_kernel(2.0)
        self.assertEqual(kernel.pv_poles, (-2.0, 2.0))
        self.assertEqual(len(kernel.deltas), 2)

    def test_feynman_ieps_has_breakpoints(self):
        kernel = feynman_kernel(2.0, 1e-3)
        self.assertEqual(kernel.breakpoints, (-2.0, 2.0))
        self.assertEqual(kernel.deltas, ())

    def test_wightman_coincident_kernel(self):
        kernel = wightman_kernel(0.0, 1e-2)
        self.assertEqual(kernel.breakpoints, (0.0,))
        value = complex(kernel.smooth(0.0))
        self.assertAlmostEqual(value.real, 1.0 / (FOUR_PI_SQ * 1e-4), delta=1e-6)

    def test_scale_covariance(self):
        omega0, dt, r, eps = 2.5, 0.4, 1.2, 1e-3
        physical = disorder_I(SpacetimeInterval(dt, r), Regularization(eps=eps), DisorderModel(0.7))
        scaled = disorder_I(SpacetimeInterval(dt, r).scaled(omega0), Regularization(eps=eps).scaled(omega0),
                            DisorderModel(0.7).scaled(omega0))
        self.assertAlmostEqual(abs(physical - omega0 ** 2 * scaled) / abs(physical), 0.0, delta=1e-13)


if __name__ == '__main__':
    unittest.main()
