# -*- coding: utf-8 -*-
"""Old test A_n, which needs at least one fully observed column."""

from __future__ import annotations

from mcar_system import ustat
from mcar_system.data_loader import ColumnRoles, IncompleteMatrix
from mcar_system.report import Method, TestReport
from mcar_system.testers.base import MCARTester


class AnTester(MCARTester):
    method = Method.A_N

    def _run(self, m: IncompleteMatrix, roles: ColumnRoles) -> TestReport:
        return ustat.test_an(m, roles, tol=self.tol, df_mode=self.df_mode)
