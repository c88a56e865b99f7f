"""
结构化日志测试
"""

import json
import logging
import os
import tempfile
import threading
import unittest
import uuid
from pathlib import Path
from unittest import mock

from logger import LoggingConfig, PerformanceTimer, StructuredFormatter, StructuredLogger


def _read_records(path: Path):
    return [json.loads(line) for line in path.read_text(encoding='utf-8').splitlines() if line]


class TestStructuredLogger(unittest.TestCase):
    """JSON 文件输出与运行 ID"""

    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.log_file = Path(self._tmp.name) / 'nested' / 'engine.log'
        self.logger = StructuredLogger(f"test_{uuid.uuid4().hex[:6]}", {
            'level': 'DEBUG', 'file': str(self.log_file), 'console': False,
        })

    def tearDown(self):
        for handler in list(self.logger.logger.handlers):
            handler.close()
        self.logger.logger.handlers.clear()
        self._tmp.cleanup()

    def test_writes_json_lines(self):
        self.logger.info("积分完成", evaluations=42, flags=['regulated'])
        records = _read_records(self.log_file)
        self.assertEqual(len(records), 1)
        self.assertEqual(records[0]['level'], 'INFO')
        self.assertEqual(records[0]['evaluations'], 42)
        self.assertEqual(records[0]['flags'], ['regulated'])
        self.assertEqual(len(records[0]['run_id']), 8)

    def test_level_filtering(self):
        self.logger.config['level'] = 'WARNING'
        self.logger._setup_logger()
        self.logger.info("忽略")
        self.logger.warning("保留")
        self.assertEqual([r['message'] for r in _read_records(self.log_file)], ["保留"])

    def test_error_includes_exception(self):
        try:
            raise ValueError("坏参数")
        except ValueError as e:
            self.logger.error("失败", error=e)
        record = _read_records(self.log_file)[0]
        self.assertEqual(record['error_type'], 'ValueError')
        self.assertEqual(record['error_message'], "坏参数")

    def test_run_id_is_thread_local(self):
        self.logger.set_run_id('grid-0')
        seen = {}

        def worker():
            self.logger.set_run_id('grid-1')
            seen['worker'] = self.logger._get_run_id()

        thread = threading.Thread(target=worker)
        thread.start()
        thread.join()
        self.assertEqual(seen['worker'], 'grid-1')
        self.assertEqual(self.logger._get_run_id(), 'grid-0')

    def test_performance_timer(self):
        with PerformanceTimer(self.logger, 'scenario1_free', r=2.0) as timer:
            sum(range(1000))
        self.assertGreaterEqual(timer.duration, 0.0)
        record = _read_records(self.log_file)[0]
        self.assertEqual(record['log_type'], 'performance')
        self.assertEqual(record['operation'], 'scenario1_free')
        self.assertEqual(record['r'], 2.0)

    def test_parse_size(self):
        self.assertEqual(self.logger._parse_size('2KB'), 2048)
        self.assertEqual(self.logger._parse_size('1MB'), 1024 * 1024)
        self.assertEqual(self.logger._parse_size('512'), 512)


class TestStructuredFormatter(unittest.TestCase):

    def _record(self, message: str) -> logging.LogRecord:
        return logging.LogRecord('fermi.test', logging.INFO, __file__, 1, message, None, None)

    def test_human_readable_line(self):
        payload = json.dumps({
            'timestamp': '2024-01-01T12:34:56+00:00', 'level': 'INFO', 'module': 'quadrature',
            'message': '完成', 'run_id': 'grid-3', 'duration_ms': 12.5, 'operation': 'x', 'nodes': 16,
        })
        line = StructuredFormatter().format(self._record(payload))
        self.assertTrue(line.startswith('[12:34:56] INFO'))
        self.assertIn('[run:grid-3]', line)
        self.assertIn('duration:12.5ms', line)
        self.assertIn('nodes:16', line)
        self.assertNotIn('[SLOW]', line)

    def test_plain_message_passthrough(self):
        self.assertEqual(StructuredFormatter().format(self._record('plain text')), 'plain text')


class TestLoggingConfig(unittest.TestCase):

    def test_from_env(self):
        with mock.patch.dict(os.environ, {'FERMI_LOG_LEVEL': 'DEBUG', 'FERMI_LOG_FILE': '',
                                          'FERMI_LOG_BACKUP_COUNT': '2'}):
            config = LoggingConfig.from_env()
        self.assertEqual(config['level'], 'DEBUG')
        self.assertEqual(config['file'], '')
        self.assertEqual(config['backup_count'], 2)

    def test_validate_config(self):
        self.assertTrue(LoggingConfig.validate_config(LoggingConfig.from_dict({})))
        self.assertFalse(LoggingConfig.validate_config(LoggingConfig.from_dict({'level': 'LOUD'})))
        self.assertFalse(LoggingConfig.validate_config(LoggingConfig.from_dict({'backup_count': -1})))
        self.assertFalse(LoggingConfig.validate_config({'level': 'INFO'}))


if __name__ == '__main__':
    unittest.main()
