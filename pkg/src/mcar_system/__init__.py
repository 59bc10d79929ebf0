# -*- coding: utf-8 -*-
"""U-statistics-based MCAR tests, Little's d^2 baseline and the simulation harness."""

__version__ = "0.1.0"
