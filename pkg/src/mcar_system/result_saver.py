# -*- coding: utf-8 -*-
"""Handles saving benchmark results and test reports to files."""

from __future__ import annotations

import json
import logging
import os
from typing import TYPE_CHECKING, Any, Dict, Optional

from mcar_system import utils

if TYPE_CHECKING:
    from mcar_system.bench import BenchResult

logger = logging.getLogger(__name__)

RESULTS_LONG = "results_long.csv"
PLOTDATA = "plotdata.csv"
BENCH_CONFIG = "bench_config.json"


class ResultSaver:
    """Manages one timestamped output directory per run."""

    def __init__(self, output_root: str, folder: Optional[str] = None):
        self.output_root = output_root
        self.timestamp_folder = folder or utils.timestamp_folder()
        self.output_dir = os.path.join(self.output_root, self.timestamp_folder)
        utils.ensure_dir(self.output_dir)

    def save_json(self, payload: Dict[str, Any], filename: str) -> str:
        """Writes `payload` as indented JSON and returns the file path."""
        filepath = os.path.join(self.output_dir, filename)
        with open(filepath, "w", encoding="utf-8") as f:
            json.dump(payload, f, ensure_ascii=False, indent=2)
        logger.info("Saved %s", filepath)
        return filepath

    def save_bench(self, result: "BenchResult") -> Dict[str, str]:
        """
        Writes the long-format table, the per-panel plot table and the config
        that produced them.

        Returns:
            dict: kind -> written file path.
        """
        from mcar_system.bench import export_csv, export_plotdata

        paths = {
            "results_long": export_csv(result, os.path.join(self.output_dir, RESULTS_LONG)),
            "plotdata": export_plotdata(result, os.path.join(self.output_dir, PLOTDATA)),
            "bench_config": self.save_json(
                result.config.model_dump(mode="json"), BENCH_CONFIG
            ),
        }
        for kind in ("results_long", "plotdata"):
            logger.info("Saved %s", paths[kind])
        return paths

    def get_output_folder(self) -> str:
        """Returns the full path to the output directory for this run."""
        return self.output_dir
