# -*- coding: utf-8 -*-
"""Generalized test A_n' over X-pairs and Y-pairs."""

from __future__ import annotations

from mcar_system import ustat
from mcar_system.data_loader import ColumnRoles, IncompleteMatrix
from mcar_system.report import Method, TestReport
from mcar_system.testers.base import MCARTester


class AnPrimeTester(MCARTester):
    method = Method.A_N_PRIME

    def _run(self, m: IncompleteMatrix, roles: ColumnRoles) -> TestReport:
        return ustat.test_an_prime(m, roles, tol=self.tol, df_mode=self.df_mode)
