"""
错误处理测试
"""

import unittest

from error_handler import (
    EXIT_FAILED_CHECKS, EXIT_INVALID_INPUT, EXIT_NOT_CONVERGED, ConfigurationError, ConvergenceError,
    DomainError, ErrorHandler, FermiError, OnLightConeError, ValidationError
)


class TestExceptions(unittest.TestCase):
    """异常层次与错误码"""

    def test_error_codes(self):
        cases = [
            (ValidationError('r', "r 必须为正数"), 'VAL_001'),
            (ConfigurationError('config'), 'CFG_001'),
            (DomainError('sin_integral', float('nan')), 'DOM_001'),
            (OnLightConeError(2.0, 2.0), 'KER_001'),
            (ConvergenceError('quad', best_estimate=1.0), 'QUAD_001'),
        ]
        for error, code in cases:
            self.assertIsInstance(error, FermiError)
            self.assertEqual(error.error_code, code)
            self.assertTrue(str(error).startswith(f"[{code}]"))

    def test_domain_errors_are_value_errors(self):
        self.assertIsInstance(DomainError('cos_integral', 0.0), ValueError)
        self.assertIsInstance(OnLightConeError(1.0, 1.0), ValueError)

    def test_to_dict(self):
        data = ValidationError('sigma2', "sigma2 不能为负").to_dict()
        self.assertEqual(data['error_code'], 'VAL_001')
        self.assertIn('sigma2', data['message'])


class TestErrorHandler(unittest.TestCase):
    """退出码映射与逐点容错"""

    def setUp(self):
        self.handler = ErrorHandler()

    def test_exit_codes(self):
        self.assertEqual(self.handler.handle_error(ValidationError('r')), EXIT_INVALID_INPUT)
        self.assertEqual(self.handler.handle_error(ConfigurationError('config')), EXIT_INVALID_INPUT)
        self.assertEqual(self.handler.handle_error(OnLightConeError(1.0, 1.0)), EXIT_INVALID_INPUT)
        self.assertEqual(self.handler.handle_error(ConvergenceError('quad')), EXIT_NOT_CONVERGED)
        self.assertEqual(self.handler.handle_error(ValueError("bad")), EXIT_INVALID_INPUT)
        self.assertEqual(self.handler.handle_error(RuntimeError("boom")), EXIT_FAILED_CHECKS)

    def test_guarded_success(self):
        value, status = self.handler.guarded(lambda a, b=1: a + b, 2, b=3)
        self.assertEqual((value, status), (5, 'ok'))

    def test_guarded_failure_returns_code(self):
        def fail():
            raise ConvergenceError('integrate_kernel', best_estimate=0.5)

        value, status = self.handler.guarded(fail)
        self.assertIsNone(value)
        self.assertEqual(status, 'QUAD_001')

    def test_guarded_does_not_swallow_programming_errors(self):
        with self.assertRaises(ZeroDivisionError):
            self.handler.guarded(lambda: 1 / 0)


if __name__ == '__main__':
    unittest.main()
