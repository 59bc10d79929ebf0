# -*- coding: utf-8 -*-
"""Little's d^2 baseline."""

from __future__ import annotations

from typing import Optional

from mcar_system import little
from mcar_system.data_loader import ColumnRoles, IncompleteMatrix
from mcar_system.report import Method, TestReport
from mcar_system.testers.base import MCARTester


class LittleTester(MCARTester):
    method = Method.LITTLE_D2

    def __init__(
        self,
        em_tol: float = little.EM_TOL,
        em_max_iter: int = little.EM_MAX_ITER,
        **kwargs,
    ):
        super().__init__(**kwargs)
        self.em_tol = em_tol
        self.em_max_iter = em_max_iter

    def _run(self, m: IncompleteMatrix, roles: Optional[ColumnRoles]) -> TestReport:
        # column roles do not enter d^2
        return little.little_d2(
            m, tol=self.em_tol, max_iter=self.em_max_iter, rcond=self.tol
        )
