# -*- coding: utf-8 -*-
"""
Settings management
- default values
- environment variable overrides
- logging setup
"""

from __future__ import annotations

import logging
import os
import sys
from typing import Any, Dict, Optional

LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"

# setting key -> (environment variable, parser)
_ENV_OVERRIDES = {
    "log_level": ("MCAR_LOG_LEVEL", str),
    "log_format": ("MCAR_LOG_FORMAT", str),
    "na_marker": ("MCAR_NA_MARKER", str),
    "alpha": ("MCAR_ALPHA", float),
    "df_mode": ("MCAR_DF_MODE", str),
    "workers": ("MCAR_WORKERS", int),
    "output_directory": ("MCAR_OUTPUT_DIRECTORY", str),
}


class Settings:
    """Defaults overlaid by MCAR_* environment variables."""

    def __init__(self, environ: Optional[Dict[str, str]] = None):
        self._environ = os.environ if environ is None else environ
        self._load_default_settings()
        self._load_environment_settings()
        self._validate_settings()

    def _load_default_settings(self):
        self.defaults: Dict[str, Any] = {
            # logging
            "log_level": "INFO",
            "log_format": "text",
            # input
            "na_marker": "NA",
            # tests
            "alpha": 0.05,
            "pinv_rcond": None,  # None = dim * machine epsilon
            "df_mode": "nominal",
            "em_tol": 1e-6,
            "em_max_iter": 500,
            # bench
            "workers": 1,
            "bench_profile": "desk",
            "output_directory": "./outputs",
        }

    def _load_environment_settings(self):
        self.env_settings: Dict[str, Any] = {}
        for key, (var, parse) in _ENV_OVERRIDES.items():
            raw = self._environ.get(var)
            if raw is None or raw == "":
                continue
            try:
                self.env_settings[key] = parse(raw)
            except ValueError:
                logging.getLogger(__name__).warning("Invalid %s value: %r, using default", var, raw)

    def _validate_settings(self):
        alpha = self.get("alpha")
        if not 0.0 < alpha < 1.0:
            logging.getLogger(__name__).warning("Invalid alpha %s, using default", alpha)
            self.env_settings["alpha"] = self.defaults["alpha"]
        if self.get("df_mode") not in ("nominal", "rank"):
            logging.getLogger(__name__).warning(
                "Invalid df_mode %r, using default", self.get("df_mode")
            )
            self.env_settings["df_mode"] = self.defaults["df_mode"]
        if self.get("workers") < 1 and self.get("workers") != -1:
            self.env_settings["workers"] = self.defaults["workers"]

    def get(self, key: str, default: Any = None) -> Any:
        # environment first, then defaults
        return self.env_settings.get(key, self.defaults.get(key, default))

    def set(self, key: str, value: Any):
        self.env_settings[key] = value

    def get_all(self) -> Dict[str, Any]:
        all_settings = self.defaults.copy()
        all_settings.update(self.env_settings)
        return all_settings

    def get_test_config(self) -> Dict[str, Any]:
        """Keyword arguments shared by every tester."""
        return {
            "tol": self.get("pinv_rcond"),
            "df_mode": self.get("df_mode"),
            "em_tol": self.get("em_tol"),
            "em_max_iter": self.get("em_max_iter"),
        }

    def print_settings(self, file=sys.stdout):
        print("Current settings:", file=file)
        print("=" * 50, file=file)
        for key, value in sorted(self.get_all().items()):
            source = "env" if key in self.env_settings else "default"
            print(f"   {key}: {value} ({source})", file=file)
        print("=" * 50, file=file)


def setup_logging(level: str = "INFO", fmt: str = "text") -> None:
    """Installs one stderr handler on the root logger (text or JSON records)."""
    handler = logging.StreamHandler(sys.stderr)
    if fmt == "json":
        try:
            from pythonjsonlogger.json import JsonFormatter
        except ImportError:  # python-json-logger < 3
            from pythonjsonlogger.jsonlogger import JsonFormatter
        handler.setFormatter(
            JsonFormatter("%(asctime)s %(levelname)s %(name)s %(message)s")
        )
    else:
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root = logging.getLogger()
    for old in list(root.handlers):
        root.removeHandler(old)
    root.addHandler(handler)
    root.setLevel(getattr(logging, str(level).upper(), logging.INFO))
