# -*- coding: utf-8 -*-
"""Common utility functions."""

from __future__ import annotations

import datetime as dt
import math
import os


def now_local() -> dt.datetime:
    """Return the current local time, timezone-aware."""
    return dt.datetime.now().astimezone()


def timestamp_folder() -> str:
    """Return a timestamp string for folder names, e.g., '240911_153000'."""
    return now_local().strftime("%y%m%d_%H%M%S")


def ensure_dir(path: str) -> None:
    """Ensure that a directory exists."""
    os.makedirs(path, exist_ok=True)


def ensure_parent_dir(path: str) -> None:
    parent = os.path.dirname(path)
    if parent:
        ensure_dir(parent)


def fmt_sig(value: float, digits: int = 6) -> str:
    """Format with `digits` significant digits; NaN prints as 'nan'."""
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return "nan"
    return f"{value:.{digits}g}"
