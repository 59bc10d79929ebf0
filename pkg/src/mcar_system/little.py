# -*- coding: utf-8 -*-
"""Little's d^2 MCAR test on top of an EM fit of the multivariate normal."""

from __future__ import annotations

import dataclasses
import logging
import math
from typing import List, Optional, Tuple

import numpy as np
from scipy import linalg

from mcar_system import numerics
from mcar_system.data_loader import IncompleteMatrix, classify_columns
from mcar_system.errors import (
    InvalidInputError,
    NumericalError,
    SinglePatternError,
    TestInapplicableError,
)
from mcar_system.report import Method, TestReport

logger = logging.getLogger(__name__)

EM_TOL = 1e-6
EM_MAX_ITER = 500
LOGLIK_SLACK = 1e-9


@dataclasses.dataclass(frozen=True)
class PatternGroup:
    """Rows sharing one missingness pattern."""

    pattern: np.ndarray  # bool over columns, True = observed
    row_indices: np.ndarray
    observed_mean: np.ndarray  # over the observed columns only

    @property
    def count(self) -> int:
        return len(self.row_indices)

    @property
    def observed_columns(self) -> np.ndarray:
        return np.flatnonzero(self.pattern)


@dataclasses.dataclass(frozen=True)
class MvnEstimate:
    mean: np.ndarray
    cov: np.ndarray
    loglik: float
    iterations: int
    converged: bool
    loglik_history: Tuple[float, ...] = ()


def retained_rows(m: IncompleteMatrix) -> IncompleteMatrix:
    """Drops rows with no observed cell, with a warning."""
    empty = m.fully_missing_rows()
    if len(empty):
        logger.warning("Dropping %d fully missing row(s) before pattern grouping", len(empty))
        m = m.drop_rows(empty)
    never = [m.names[j] for j in range(m.d) if not m.mask[:, j].any()]
    if never:
        raise InvalidInputError(f"Columns with no observed value: {never}")
    return m


def pattern_groups(m: IncompleteMatrix) -> List[PatternGroup]:
    """Groups rows by missingness pattern, patterns in lexicographic order."""
    patterns, inverse = np.unique(m.mask, axis=0, return_inverse=True)
    inverse = np.asarray(inverse).reshape(-1)
    groups = []
    for k, pattern in enumerate(patterns):
        if not pattern.any():
            continue
        rows = np.flatnonzero(inverse == k)
        obs = np.flatnonzero(pattern)
        groups.append(
            PatternGroup(
                pattern=pattern.copy(),
                row_indices=rows,
                observed_mean=m.values[np.ix_(rows, obs)].mean(axis=0),
            )
        )
    return groups


def _cho(sub_cov: np.ndarray, obs: np.ndarray):
    try:
        return linalg.cho_factor(sub_cov, lower=True)
    except linalg.LinAlgError:
        raise NumericalError("Observed sub-covariance is singular", pattern=obs.tolist())


def observed_loglik(
    m: IncompleteMatrix,
    mean: np.ndarray,
    cov: np.ndarray,
    groups: Optional[List[PatternGroup]] = None,
) -> float:
    """Observed-data log-likelihood of N(mean, cov) under ignorable missingness."""
    if groups is None:
        groups = pattern_groups(m)
    total = 0.0
    for g in groups:
        obs = g.observed_columns
        factor = _cho(cov[np.ix_(obs, obs)], obs)
        diff = m.values[np.ix_(g.row_indices, obs)] - mean[obs]
        quad = np.sum(diff * linalg.cho_solve(factor, diff.T).T)
        logdet = 2.0 * np.sum(np.log(np.diag(factor[0])))
        total -= 0.5 * (g.count * (len(obs) * math.log(2.0 * math.pi) + logdet) + quad)
    return float(total)


def _initial_moments(m: IncompleteMatrix) -> Tuple[np.ndarray, np.ndarray]:
    complete = m.mask.all(axis=1)
    if complete.sum() >= 2:
        rows = m.values[complete]
        mean = rows.mean(axis=0)
        centered = rows - mean
        cov = centered.T @ centered / rows.shape[0]
        if np.linalg.eigvalsh(cov).min() > 0:
            return mean, cov
        logger.debug("Complete-case covariance singular, using zero-filled moments")
    mean = np.array([m.values[m.mask[:, j], j].mean() for j in range(m.d)])
    filled = np.where(m.mask, m.values - mean, 0.0)
    return mean, filled.T @ filled / m.n


def _em_step(
    m: IncompleteMatrix, groups: List[PatternGroup], mean: np.ndarray, cov: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    d = m.d
    t1 = np.zeros(d)
    t2 = np.zeros((d, d))
    for g in groups:
        obs = g.observed_columns
        mis = np.flatnonzero(~g.pattern)
        x_obs = m.values[np.ix_(g.row_indices, obs)]
        x_hat = np.empty((g.count, d))
        x_hat[:, obs] = x_obs
        if len(mis):
            factor = _cho(cov[np.ix_(obs, obs)], obs)
            coef = linalg.cho_solve(factor, cov[np.ix_(obs, mis)])  # S_oo^-1 S_om
            x_hat[:, mis] = mean[mis] + (x_obs - mean[obs]) @ coef
            cond_cov = cov[np.ix_(mis, mis)] - cov[np.ix_(mis, obs)] @ coef
            t2[np.ix_(mis, mis)] += g.count * cond_cov
        t1 += x_hat.sum(axis=0)
        t2 += x_hat.T @ x_hat
    new_mean = t1 / m.n
    new_cov = t2 / m.n - np.outer(new_mean, new_mean)
    return new_mean, (new_cov + new_cov.T) / 2.0


def em_mvn(
    m: IncompleteMatrix, tol: float = EM_TOL, max_iter: int = EM_MAX_ITER
) -> MvnEstimate:
    """
    Maximum-likelihood mean and covariance (denominator n) of a multivariate
    normal from incomplete data. Stops when the relative change of the
    observed-data log-likelihood drops below `tol` or after `max_iter` steps.
    """
    m = retained_rows(m)
    return _fit_em(m, pattern_groups(m), tol, max_iter)


def _fit_em(
    m: IncompleteMatrix, groups: List[PatternGroup], tol: float, max_iter: int
) -> MvnEstimate:
    mean, cov = _initial_moments(m)
    loglik = observed_loglik(m, mean, cov, groups)
    history: List[float] = []
    converged = False
    iterations = 0

    for iterations in range(1, max_iter + 1):
        mean, cov = _em_step(m, groups, mean, cov)
        new_loglik = observed_loglik(m, mean, cov, groups)
        history.append(new_loglik)
        if new_loglik < loglik - LOGLIK_SLACK * abs(loglik):
            logger.warning(
                "EM log-likelihood decreased at iteration %d: %.12g -> %.12g",
                iterations,
                loglik,
                new_loglik,
            )
        change = abs(new_loglik - loglik)
        loglik = new_loglik
        if change <= tol * max(abs(loglik), 1.0):
            converged = True
            break

    if converged:
        logger.debug("EM converged after %d iteration(s), loglik %.6f", iterations, loglik)
    else:
        logger.warning("EM did not converge in %d iterations", max_iter)
    return MvnEstimate(
        mean=mean,
        cov=cov,
        loglik=loglik,
        iterations=iterations,
        converged=converged,
        loglik_history=tuple(history),
    )


def little_d2(
    m: IncompleteMatrix,
    tol: float = EM_TOL,
    max_iter: int = EM_MAX_ITER,
    rcond: Optional[float] = None,
) -> TestReport:
    """
    d^2 = sum_J n_J (xbar_J - mu_J)' Sigma_J^-1 (xbar_J - mu_J) over the
    missingness patterns J, with EM estimates restricted to the observed
    columns of J; df = sum_J d_J - d.
    """
    m = retained_rows(m)
    groups = pattern_groups(m)
    if len(groups) < 2:
        raise SinglePatternError("Only one missingness pattern: Little's test has df = 0.")

    df = sum(len(g.observed_columns) for g in groups) - m.d
    if df < 1:
        raise TestInapplicableError(f"Little's test has df = {df} for these patterns.")

    est = _fit_em(m, groups, tol, max_iter)
    d2 = 0.0
    rank_deficient = False
    for g in groups:
        obs = g.observed_columns
        diff = g.observed_mean - est.mean[obs]
        inv = numerics.invert_or_pseudo(est.cov[np.ix_(obs, obs)], rcond)
        rank_deficient = rank_deficient or inv.used_pseudoinverse
        d2 += g.count * float(diff @ inv.matrix @ diff)

    d2 = max(d2, 0.0)
    roles = classify_columns(m)
    return TestReport(
        method=Method.LITTLE_D2,
        statistic=d2,
        df=df,
        p_value=numerics.chisq_sf(d2, df),
        rank_deficient=rank_deficient,
        pair_stats=[],
        n=m.n,
        p=roles.p,
        q=roles.q,
    )
