# -*- coding: utf-8 -*-
"""Abstract base class for all MCAR testers."""

from __future__ import annotations

import abc
from typing import Optional, Sequence

from mcar_system.data_loader import (
    TRANSFORMS,
    ColumnRef,
    ColumnRoles,
    IncompleteMatrix,
    classify_columns,
    transform_columns,
)
from mcar_system.errors import InvalidInputError
from mcar_system.report import Method, TestReport


class MCARTester(abc.ABC):
    """Runs one MCAR test on an incomplete sample."""

    method: Method

    def __init__(
        self,
        transform: str = "identity",
        tol: Optional[float] = None,
        df_mode: str = "nominal",
        force_y: Optional[Sequence[ColumnRef]] = None,
    ):
        """
        Args:
            transform: per-column transform applied to observed values first
                       ("identity", "log" or "rank").
            tol: relative singular-value cutoff of the pseudoinverse,
                 None for dim * machine epsilon.
            df_mode: "nominal" or "rank" degrees of freedom.
            force_y: columns treated as incomplete even when fully observed.
        """
        if transform not in TRANSFORMS:
            raise InvalidInputError(f"Unknown transform '{transform}'. Choose from {TRANSFORMS}.")
        self.transform = transform
        self.tol = tol
        self.df_mode = df_mode
        self.force_y = list(force_y or [])

    def run(self, m: IncompleteMatrix, roles: Optional[ColumnRoles] = None) -> TestReport:
        """Transforms the sample, classifies columns when `roles` is None, then tests."""
        m = transform_columns(m, self.transform)
        if roles is None:
            roles = classify_columns(m, self.force_y)
        return self._run(m, roles)

    @abc.abstractmethod
    def _run(self, m: IncompleteMatrix, roles: ColumnRoles) -> TestReport:
        raise NotImplementedError

    @property
    def name(self) -> str:
        return self.method.value
