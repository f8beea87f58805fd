"""
Unit tests for LabConfig and the process-wide configuration.
"""

import os
import sys
import tempfile
import unittest
from pathlib import Path
from unittest.mock import patch

# Add project root to path for testing
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.core.config import DEFAULT_CONFIG_PATH, LabConfig, get_config, set_config  # noqa: E402
from src.core.errors import ConfigError  # noqa: E402


class TestLabConfig(unittest.TestCase):
    """Test cases for LabConfig."""

    def setUp(self):
        """Set up test fixtures."""
        self._tmp = tempfile.TemporaryDirectory()
        self.tmp = Path(self._tmp.name)

    def tearDown(self):
        self._tmp.cleanup()
        set_config(None)

    def write_yaml(self, text: str) -> Path:
        path = self.tmp / "lab.yaml"
        path.write_text(text)
        return path

    def test_defaults(self):
        config = LabConfig()
        self.assertEqual(config.metric_tol, 1e-9)
        self.assertEqual(config.chain_tol, 1e-12)
        self.assertEqual(config.enflo_cap, 10_000_000)
        self.assertEqual(config.alpha_grid, [0.1, 0.25, 0.5, 0.75, 0.9])
        self.assertEqual(config.get("missing", "key", "fallback"), "fallback")

    def test_shipped_file_matches_defaults(self):
        shipped = LabConfig(DEFAULT_CONFIG_PATH)
        self.assertEqual(shipped.check_tol, LabConfig().check_tol)
        self.assertEqual(shipped.search_budget, LabConfig().search_budget)

    def test_nested_merge(self):
        config = LabConfig(self.write_yaml("tolerances:\n  check: 1.0e-6\nsearch:\n  budget: 10\n"))
        self.assertEqual(config.check_tol, 1e-6)
        self.assertEqual(config.metric_tol, 1e-9)
        self.assertEqual(config.search_budget, 10)
        self.assertEqual(config.search_horizon, 16)

    def test_overrides_win(self):
        config = LabConfig(self.write_yaml("caps:\n  product_size: 10\n"), overrides={"caps": {"product_size": 20}})
        self.assertEqual(config.product_cap, 20)

    def test_bad_files(self):
        with self.assertRaises(ConfigError):
            LabConfig(self.tmp / "absent.yaml")
        with self.assertRaises(ConfigError):
            LabConfig(self.write_yaml("tolerances: [1, 2\n"))
        with self.assertRaises(ConfigError):
            LabConfig(self.write_yaml("- just\n- a list\n"))
        with self.assertRaises(ConfigError):
            LabConfig(self.write_yaml("logging: off\n"))

    def test_bad_numeric_setting(self):
        """A non-numeric tolerance is rejected at load time, not on first use."""
        with self.assertRaises(ConfigError):
            LabConfig(self.write_yaml("tolerances:\n  check: tiny\n"))
        with self.assertRaises(ConfigError):
            LabConfig(overrides={"caps": {"product_size": None}})

    def test_threads_from_environment(self):
        with patch.dict(os.environ, {"CURVTYPE_THREADS": "3"}):
            self.assertEqual(LabConfig().threads, 3)
        with patch.dict(os.environ, {"CURVTYPE_THREADS": "many"}):
            self.assertEqual(LabConfig(overrides={"cli": {"threads": 2}}).threads, 2)

    def test_log_level_from_environment(self):
        with patch.dict(os.environ, {"CURVTYPE_LOG_LEVEL": "DEBUG"}):
            self.assertEqual(LabConfig().logging["level"], "DEBUG")

    def test_global_config_path(self):
        path = self.write_yaml("search:\n  horizon: 5\n")
        set_config(None)
        with patch.dict(os.environ, {"CURVTYPE_CONFIG": str(path)}):
            self.assertEqual(get_config().search_horizon, 5)
            self.assertIs(get_config(), get_config())


if __name__ == '__main__':
    unittest.main()
