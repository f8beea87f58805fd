"""Laboratory configuration loaded from YAML."""

import copy
import logging
import os
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml

from .errors import ConfigError

try:
    from dotenv import load_dotenv
    load_dotenv()
except ImportError:
    pass  # dotenv not available, use system environment variables

logger = logging.getLogger(__name__)

PROJECT_ROOT = Path(__file__).resolve().parent.parent.parent
DEFAULT_CONFIG_PATH = PROJECT_ROOT / "config" / "config.yaml"

# Default configuration values (overridden by config.yaml, then by explicit overrides)
DEFAULT_CONFIG: Dict[str, Any] = {
    "tolerances": {
        "metric_rel": 1e-9,
        "chain_abs": 1e-12,
        "check": 1e-9,
        "sphere_rel": 1e-9,
    },
    "caps": {
        "product_size": 4096,
        "enflo_exhaustive": 10_000_000,
        "sturm_exhaustive_subsets": 5000,
        "rademacher_vectors": 20,
        "sturm_subset_size": 6,
    },
    "search": {
        "horizon": 16,
        "budget": 4000,
        "enflo_budget": 2000,
    },
    "verify": {
        "alpha_grid": [0.1, 0.25, 0.5, 0.75, 0.9],
        "horizon": 32,
        "remark_horizon": 8,
        "sturm_trials": 500,
        "banach_pairs": 10000,
        "banach_dim": 8,
    },
    "cli": {
        "threads": 1,
        "format": "json",
    },
    "logging": {
        "level": "WARNING",
        "format": "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        "log_to_file": False,
        "log_dir": "logs",
    },
}

REQUIRED_SECTIONS = ["tolerances", "caps", "search", "verify", "logging"]
NUMERIC_SETTINGS = ("metric_tol", "chain_tol", "check_tol", "sphere_tol", "product_cap", "enflo_cap",
                    "sturm_subset_cap", "sturm_subset_size", "rademacher_cap", "search_horizon",
                    "search_budget", "enflo_budget", "alpha_grid")


def _update_nested_dict(d: Dict[str, Any], u: Dict[str, Any]) -> None:
    """Update a nested dictionary in place with values from another one."""
    for k, v in u.items():
        if isinstance(v, dict) and k in d and isinstance(d[k], dict):
            _update_nested_dict(d[k], v)
        else:
            d[k] = v


class LabConfig:
    """Configuration for curvtype, YAML file merged over built-in defaults."""

    def __init__(self, config_path: Optional[Path] = None, overrides: Optional[Dict[str, Any]] = None):
        self.config_path = Path(config_path) if config_path else None
        self.config = copy.deepcopy(DEFAULT_CONFIG)

        if self.config_path is not None:
            try:
                with open(self.config_path) as f:
                    loaded = yaml.safe_load(f) or {}
            except FileNotFoundError:
                raise ConfigError(f"ConfigError: configuration file not found: {self.config_path}")
            except yaml.YAMLError as e:
                raise ConfigError(f"ConfigError: invalid YAML in configuration file {self.config_path}: {e}")
            if not isinstance(loaded, dict):
                raise ConfigError(f"ConfigError: configuration file {self.config_path} must contain a mapping")
            _update_nested_dict(self.config, loaded)
            logger.debug(f"Loaded configuration from {self.config_path}")

        if overrides:
            _update_nested_dict(self.config, overrides)

        missing = [s for s in REQUIRED_SECTIONS if not isinstance(self.config.get(s), dict)]
        if missing:
            raise ConfigError(f"ConfigError: missing required sections in configuration: {missing}")
        try:
            for name in NUMERIC_SETTINGS:
                getattr(self, name)
        except (KeyError, TypeError, ValueError) as e:
            raise ConfigError(f"ConfigError: bad numeric setting in {self.config_path or 'defaults'}: {e!r}")

    def get(self, section: str, key: str, default: Any = None) -> Any:
        try:
            return self.config[section][key]
        except KeyError:
            return default

    @property
    def metric_tol(self) -> float:
        return float(self.config["tolerances"]["metric_rel"])

    @property
    def chain_tol(self) -> float:
        return float(self.config["tolerances"]["chain_abs"])

    @property
    def check_tol(self) -> float:
        return float(self.config["tolerances"]["check"])

    @property
    def sphere_tol(self) -> float:
        return float(self.config["tolerances"]["sphere_rel"])

    @property
    def product_cap(self) -> int:
        return int(self.config["caps"]["product_size"])

    @property
    def enflo_cap(self) -> int:
        return int(self.config["caps"]["enflo_exhaustive"])

    @property
    def sturm_subset_cap(self) -> int:
        return int(self.config["caps"]["sturm_exhaustive_subsets"])

    @property
    def sturm_subset_size(self) -> int:
        return int(self.config["caps"]["sturm_subset_size"])

    @property
    def rademacher_cap(self) -> int:
        return int(self.config["caps"]["rademacher_vectors"])

    @property
    def search_horizon(self) -> int:
        return int(self.config["search"]["horizon"])

    @property
    def search_budget(self) -> int:
        return int(self.config["search"]["budget"])

    @property
    def enflo_budget(self) -> int:
        return int(self.config["search"]["enflo_budget"])

    @property
    def alpha_grid(self) -> List[float]:
        return [float(a) for a in self.config["verify"]["alpha_grid"]]

    @property
    def verify(self) -> Dict[str, Any]:
        return self.config["verify"]

    @property
    def threads(self) -> int:
        env = os.getenv("CURVTYPE_THREADS")
        if env:
            try:
                return max(1, int(env))
            except ValueError:
                logger.warning(f"Ignoring non-integer CURVTYPE_THREADS={env!r}")
        return int(self.config.get("cli", {}).get("threads", 1))

    @property
    def logging(self) -> Dict[str, Any]:
        section = dict(self.config["logging"])
        env_level = os.getenv("CURVTYPE_LOG_LEVEL")
        if env_level:
            section["level"] = env_level
        return section


_config: Optional[LabConfig] = None


def get_config() -> LabConfig:
    """Process-wide configuration; CURVTYPE_CONFIG overrides the default path."""
    global _config
    if _config is None:
        env_path = os.getenv("CURVTYPE_CONFIG")
        path = Path(env_path) if env_path else DEFAULT_CONFIG_PATH
        _config = LabConfig(path if path.exists() else None)
    return _config


def set_config(config: Optional[LabConfig]) -> None:
    """Install (or with None, reset) the process-wide configuration."""
    global _config
    _config = config
