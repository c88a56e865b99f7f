"""
配置管理器测试
"""

import json
import os
import tempfile
import unittest
from pathlib import Path
from unittest import mock

from config import ConfigManager, config_tool
from scenarios import ScenarioEngine


class TestConfigManager(unittest.TestCase):
    """配置加载、覆盖与校验"""

    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.path = Path(self._tmp.name) / 'fermi_config.json'
        self._env = mock.patch.dict(os.environ, {}, clear=False)
        self._env.start()
        for key in ('FERMI_EPS', 'FERMI_REL_TOL', 'FERMI_GAUSS_NODES', 'FERMI_I_PLUS_READING',
                    'FERMI_THREADS', 'FERMI_LOG_LEVEL', 'FERMI_LOG_FILE'):
            os.environ.pop(key, None)

    def tearDown(self):
        self._env.stop()
        self._tmp.cleanup()

    def test_defaults_without_file(self):
        manager = ConfigManager(str(self.path))
        self.assertFalse(self.path.exists())
        self.assertEqual(manager.regularization.schedule, [8e-3, 4e-3, 2e-3, 1e-3])
        self.assertEqual(manager.scenario.i_plus_reading, 'continued')
        self.assertTrue(manager.validate())

    def test_create_if_missing(self):
        ConfigManager(str(self.path), create_if_missing=True)
        data = json.loads(self.path.read_text(encoding='utf-8'))
        self.assertEqual(set(data), set(ConfigManager.SECTIONS))
        self.assertEqual(data['quadrature']['gauss_nodes'], 16)

    def test_file_values_are_applied(self):
        self.path.write_text(json.dumps({'regularization': {'eps': 5e-4}, 'sweep': {'threads': 3}}),
                             encoding='utf-8')
        manager = ConfigManager(str(self.path))
        self.assertEqual(manager.regularization.eps, 5e-4)
        self.assertEqual(manager.sweep.threads, 3)
        self.assertEqual(manager.get('regularization.eps'), 5e-4)
        self.assertIsNone(manager.get('regularization.missing'))

    def test_environment_overrides_file(self):
        self.path.write_text(json.dumps({'quadrature': {'gauss_nodes': 20}}), encoding='utf-8')
        with mock.patch.dict(os.environ, {'FERMI_GAUSS_NODES': '24', 'FERMI_I_PLUS_READING': 'restricted'}):
            manager = ConfigManager(str(self.path))
        self.assertEqual(manager.quadrature.gauss_nodes, 24)
        self.assertEqual(manager.scenario.i_plus_reading, 'restricted')

    def test_broken_file_falls_back_to_defaults(self):
        self.path.write_text('{not json', encoding='utf-8')
        manager = ConfigManager(str(self.path))
        self.assertEqual(manager.regularization.eps, 1e-3)

    def test_set_and_save(self):
        manager = ConfigManager(str(self.path))
        manager.set('scenario.wave_zone_threshold', 80.0)
        self.assertEqual(manager.scenario.wave_zone_threshold, 80.0)
        manager.save()
        self.assertEqual(ConfigManager(str(self.path)).scenario.wave_zone_threshold, 80.0)

    def test_validate_rejects_bad_values(self):
        manager = ConfigManager(str(self.path))
        manager.regularization.schedule = [1e-3, 2e-3, 4e-3]
        self.assertFalse(manager.validate())
        manager = ConfigManager(str(self.path))
        manager.regularization.schedule = [4e-3, 2e-3]
        self.assertFalse(manager.validate())
        manager = ConfigManager(str(self.path))
        manager.scenario.i_plus_reading = 'mirrored'
        self.assertFalse(manager.validate())
        manager = ConfigManager(str(self.path))
        manager.quadrature.gauss_nodes = 4
        self.assertFalse(manager.validate())

    def test_engine_from_config(self):
        self.path.write_text(json.dumps({
            'regularization': {'eps': 2e-3, 'schedule': [4e-3, 2e-3, 1e-3], 'extrapolation_order': 2},
            'scenario': {'include_r_independent': True},
        }), encoding='utf-8')
        engine = ScenarioEngine.from_config(ConfigManager(str(self.path)))
        self.assertEqual(engine.reg.eps, 2e-3)
        self.assertEqual(engine.reg.schedule, (4e-3, 2e-3, 1e-3))
        self.assertTrue(engine.options.include_r_independent)
        self.assertEqual(engine.spec.max_gauss_nodes, 32)


class TestConfigTool(unittest.TestCase):
    """config_tool 子命令"""

    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.path = str(Path(self._tmp.name) / 'fermi_config.json')

    def tearDown(self):
        self._tmp.cleanup()

    def _run(self, *argv):
        with mock.patch('sys.stdout'):
            config_tool.main(['--config', self.path, *argv])

    def test_init_set_get(self):
        self._run('init')
        self.assertTrue(Path(self.path).exists())
        self._run('set', 'regularization.schedule', '[0.01, 0.005, 0.0025, 0.00125]')
        self.assertEqual(ConfigManager(self.path).regularization.schedule, [0.01, 0.005, 0.0025, 0.00125])
        self._run('set', 'scenario.include_r_independent', 'true')
        self.assertTrue(ConfigManager(self.path).scenario.include_r_independent)

    def test_invalid_value_is_not_saved(self):
        self._run('init')
        with self.assertRaises(SystemExit) as ctx:
            self._run('set', 'regularization.schedule', '[0.001, 0.002, 0.004]')
        self.assertEqual(ctx.exception.code, 1)
        self.assertEqual(ConfigManager(self.path).regularization.schedule, [8e-3, 4e-3, 2e-3, 1e-3])

    def test_parse_value(self):
        self.assertIs(config_tool._parse_value('False'), False)
        self.assertEqual(config_tool._parse_value('16'), 16)
        self.assertEqual(config_tool._parse_value('continued'), 'continued')


if __name__ == '__main__':
    unittest.main()
