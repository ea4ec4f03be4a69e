"""
Application Settings
Central configuration for the preferential attachment toolkit
"""
import os
import yaml
from pathlib import Path
from typing import Dict, Any, Optional

BASE_DIR = Path(__file__).parent.parent
CONFIG_DIR = BASE_DIR / "config"


def _env_bool(name: str, default: bool) -> bool:
    value = os.getenv(name)
    if value is None:
        return default
    return value.strip().lower() in ("1", "true", "yes", "on")


class Settings:
    """Application settings manager"""

    def __init__(self, defaults_file: Optional[Path] = None):
        self.config_dir = CONFIG_DIR
        self._defaults_file = defaults_file or CONFIG_DIR / "defaults.yaml"
        self._defaults: Optional[Dict] = None

        self.kmax = int(os.getenv("PAGRAPH_KMAX", self._get("distributions", "kmax", 10000)))
        self.kmax_joint = int(os.getenv("PAGRAPH_KMAX_JOINT", self._get("distributions", "kmax_joint", 2000)))

        self.damping = float(self._get("fixed_point", "damping", 0.5))
        self.tolerance = float(self._get("fixed_point", "tolerance", 1e-12))
        self.max_iterations = int(self._get("fixed_point", "max_iterations", 10000))

        self.k_head = int(self._get("calibration", "k_head", 11))
        self.tail_count_floor = float(self._get("calibration", "tail_count_floor", 3))
        self.outer_tolerance = float(self._get("calibration", "outer_tolerance", 1e-10))

        self.workers = int(os.getenv("PAGRAPH_WORKERS", self._get("generator", "workers", 1)))
        self.show_progress = _env_bool("PAGRAPH_PROGRESS", bool(self._get("generator", "progress", False)))

        self.significant_digits = int(self._get("output", "significant_digits", 17))
        self.log_level = os.getenv("PAGRAPH_LOG_LEVEL", self._get("logging", "level", "WARNING")).upper()

    @property
    def defaults(self) -> Dict[str, Any]:
        """Load defaults from YAML"""
        if self._defaults is None:
            if self._defaults_file.exists():
                with open(self._defaults_file, 'r') as f:
                    self._defaults = yaml.safe_load(f) or {}
            else:
                self._defaults = {}
        return self._defaults

    def _get(self, section: str, key: str, default: Any) -> Any:
        return self.defaults.get(section, {}).get(key, default)


settings = Settings()
