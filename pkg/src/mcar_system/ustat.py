# -*- coding: utf-8 -*-
"""
Pairwise covariance statistics between data columns and response indicators,
their limiting covariance estimate and the A_n / A_n' quadratic-form tests.
"""

from __future__ import annotations

import dataclasses
import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from mcar_system import numerics
from mcar_system.data_loader import ColumnRoles, IncompleteMatrix, indicators, zero_fill
from mcar_system.errors import (
    DegenerateSampleError,
    InsufficientObservedError,
    InvalidInputError,
    NothingToTestError,
    OldTestInapplicableError,
)
from mcar_system.report import Method, PairKind, PairStat, TestReport

logger = logging.getLogger(__name__)

DF_MODES = ("nominal", "rank")


@dataclasses.dataclass(frozen=True)
class StatVector:
    """Ordered statistics: pq X-pairs, then q(q-1) Y-pairs."""

    values: np.ndarray
    pairs: List[PairStat]
    p: int
    q: int

    def __len__(self) -> int:
        return len(self.values)


@dataclasses.dataclass(frozen=True)
class LambdaMatrix:
    """Estimated limiting covariance of sqrt(n) * StatVector and its inverse."""

    matrix: np.ndarray
    inverse: numerics.InverseResult

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def _as_vectors(*cols: Sequence[float]) -> List[np.ndarray]:
    arrays = [np.asarray(c, dtype=np.float64) for c in cols]
    n = arrays[0].shape[0]
    if any(a.ndim != 1 or a.shape[0] != n for a in arrays):
        raise InvalidInputError("All vectors must be 1D with equal length.")
    if n < 2:
        raise InvalidInputError(f"Statistic needs n >= 2, got {n}.")
    return arrays


def t_x(x_col: Sequence[float], r_col: Sequence[float]) -> float:
    """
    Unbiased estimate of E(X)E(R) - E(XR):

        ((sum x)(sum r) - n sum(x r)) / (n (n - 1))

    which is minus the unbiased sample covariance of (x, r).
    """
    x, r = _as_vectors(x_col, r_col)
    if not np.all(np.isfinite(x)):
        raise InvalidInputError("x must be fully observed.")
    n = x.shape[0]
    return float((x.sum() * r.sum() - n * np.dot(x, r)) / (n * (n - 1)))


def t_y_hat(y_col: Sequence[float], r_u: Sequence[float], r_v: Sequence[float]) -> float:
    """t_x of the zero-filled column y * r_u against r_v."""
    y, ru, rv = _as_vectors(y_col, r_u, r_v)
    y_tilde = np.where(ru == 1.0, y, 0.0)
    return t_x(y_tilde, rv)


def t_y_complete_case(
    y_col: Sequence[float], r_u: Sequence[float], r_v: Sequence[float]
) -> float:
    """
    The statistic restricted to rows where y is observed (diagnostic only,
    A_n' uses `t_y_hat`).
    """
    y = np.asarray(y_col, dtype=np.float64)
    ru = np.asarray(r_u, dtype=np.float64)
    rv = np.asarray(r_v, dtype=np.float64)
    if not (y.shape == ru.shape == rv.shape) or y.ndim != 1:
        raise InvalidInputError("All vectors must be 1D with equal length.")
    observed = ru == 1.0
    n_obs = int(observed.sum())
    if n_obs < 2:
        raise InsufficientObservedError(
            f"Complete-case statistic needs >= 2 observed rows, got {n_obs}."
        )
    return t_x(y[observed], rv[observed])


def _pair_layout(
    roles: ColumnRoles, include_y_pairs: bool
) -> List[Tuple[PairKind, int, int, int, int]]:
    """(kind, u, v, data column, indicator index) in canonical order."""
    layout = []
    for u, col in enumerate(roles.x_indices):
        for v in range(roles.q):
            layout.append((PairKind.X, u, v, col, v))
    if include_y_pairs:
        for u, col in enumerate(roles.y_indices):
            for v in range(roles.q):
                if v != u:
                    layout.append((PairKind.Y, u, v, col, v))
    return layout


def _check_sample(m: IncompleteMatrix, roles: ColumnRoles) -> None:
    roles.validate_for(m)
    if m.n < 2:
        raise InvalidInputError(f"Test needs n >= 2 rows, got {m.n}.")
    if roles.q == 0:
        raise NothingToTestError("No incomplete column: nothing to test (q = 0).")
    empty = m.fully_missing_rows()
    if len(empty):
        raise InvalidInputError(
            f"{len(empty)} row(s) are entirely missing, e.g. row {int(empty[0]) + 1}."
        )


def _stat_vector(m: IncompleteMatrix, roles: ColumnRoles, include_y_pairs: bool) -> StatVector:
    data = zero_fill(m, roles)
    r = indicators(m, roles)
    n = m.n
    layout = _pair_layout(roles, include_y_pairs)
    cross = data.T @ r
    sum_d = data.sum(axis=0)
    sum_r = r.sum(axis=0)
    y_names = [m.names[j] for j in roles.y_indices]

    values = np.empty(len(layout))
    pairs = []
    for k, (kind, u, v, col, ind) in enumerate(layout):
        values[k] = (sum_d[col] * sum_r[ind] - n * cross[col, ind]) / (n * (n - 1))
        pairs.append(
            PairStat(kind, u, v, float(values[k]), m.names[col], y_names[ind])
        )
    return StatVector(values=values, pairs=pairs, p=roles.p, q=roles.q)


def stat_vector(m: IncompleteMatrix, roles: ColumnRoles) -> StatVector:
    """All X-pairs then all Y-pairs (u != v) in canonical order."""
    _check_sample(m, roles)
    return _stat_vector(m, roles, include_y_pairs=True)


def _lambda_hat(
    m: IncompleteMatrix, roles: ColumnRoles, include_y_pairs: bool, tol: Optional[float]
) -> LambdaMatrix:
    data = zero_fill(m, roles)
    r = indicators(m, roles)
    layout = _pair_layout(roles, include_y_pairs)
    cols = np.array([entry[3] for entry in layout], dtype=int)
    inds = np.array([entry[4] for entry in layout], dtype=int)

    cov_data = numerics.sample_cov_matrix(data)
    cov_r = numerics.sample_cov_matrix(r)
    lam = cov_data[np.ix_(cols, cols)] * cov_r[np.ix_(inds, inds)]
    return LambdaMatrix(matrix=lam, inverse=numerics.invert_or_pseudo(lam, tol))


def lambda_hat(
    m: IncompleteMatrix, roles: ColumnRoles, tol: Optional[float] = None
) -> LambdaMatrix:
    """
    Entry ((a, v), (b, s)) = Cov(col_a, col_b) * Cov(R_v, R_s), with Y columns
    zero-filled and every covariance taken over all n rows.
    """
    if m.n < 2:
        raise InvalidInputError(f"Lambda estimate needs n >= 2 rows, got {m.n}.")
    return _lambda_hat(m, roles, include_y_pairs=True, tol=tol)


def _quadratic_test(
    method: Method,
    m: IncompleteMatrix,
    roles: ColumnRoles,
    include_y_pairs: bool,
    tol: Optional[float],
    df_mode: str,
) -> TestReport:
    if df_mode not in DF_MODES:
        raise InvalidInputError(f"df_mode must be one of {DF_MODES}, got '{df_mode}'.")
    if not _pair_layout(roles, include_y_pairs):
        raise NothingToTestError(
            "A single incomplete column and no complete one: no pair to test."
        )
    t = _stat_vector(m, roles, include_y_pairs)
    lam = _lambda_hat(m, roles, include_y_pairs, tol)
    inv = lam.inverse
    if inv.rank == 0:
        raise DegenerateSampleError(
            "Every singular value of the covariance estimate is zero."
        )
    if inv.used_pseudoinverse:
        logger.info(
            "%s: covariance estimate is singular (rank %d of %d), using pseudoinverse",
            method.value,
            inv.rank,
            inv.dim,
        )

    statistic = max(float(m.n * (t.values @ inv.matrix @ t.values)), 0.0)
    df = len(t) if df_mode == "nominal" else inv.rank
    return TestReport(
        method=method,
        statistic=statistic,
        df=df,
        p_value=numerics.chisq_sf(statistic, df),
        rank_deficient=inv.used_pseudoinverse,
        pair_stats=t.pairs,
        n=m.n,
        p=roles.p,
        q=roles.q,
        rank=inv.rank,
    )


def test_an_prime(
    m: IncompleteMatrix,
    roles: ColumnRoles,
    tol: Optional[float] = None,
    df_mode: str = "nominal",
) -> TestReport:
    """A_n' = n t' Lambda^- t over X- and Y-pairs, df = pq + q(q-1)."""
    _check_sample(m, roles)
    return _quadratic_test(Method.A_N_PRIME, m, roles, True, tol, df_mode)


def test_an(
    m: IncompleteMatrix,
    roles: ColumnRoles,
    tol: Optional[float] = None,
    df_mode: str = "nominal",
) -> TestReport:
    """A_n = n t_X' Sigma^- t_X over the pq X-pairs only."""
    if roles.p == 0:
        raise OldTestInapplicableError(
            "A_n needs at least one fully observed column (p = 0)."
        )
    _check_sample(m, roles)
    return _quadratic_test(Method.A_N, m, roles, False, tol, df_mode)


# keep pytest from collecting the two public tests as test functions
test_an_prime.__test__ = False
test_an.__test__ = False


def complete_case_table(
    m: IncompleteMatrix, roles: ColumnRoles
) -> List[Tuple[str, str, float, Optional[float]]]:
    """(Y column, indicator column, zero-filled statistic, complete-case statistic)."""
    r = indicators(m, roles)
    rows = []
    for u, col in enumerate(roles.y_indices):
        y = m.values[:, col]
        for v in range(roles.q):
            if v == u:
                continue
            hat = t_y_hat(y, r[:, u], r[:, v])
            try:
                cc: Optional[float] = t_y_complete_case(y, r[:, u], r[:, v])
            except InsufficientObservedError:
                cc = None
            rows.append((m.names[col], m.names[roles.y_indices[v]], hat, cc))
    return rows
