# -*- coding: utf-8 -*-
"""Symmetric linear algebra and chi-square tails used by every test."""

from __future__ import annotations

import dataclasses
import logging
from typing import Optional, Sequence

import numpy as np
from scipy import special

from mcar_system.errors import InvalidInputError

logger = logging.getLogger(__name__)

SYMMETRY_RTOL = 1e-10


@dataclasses.dataclass(frozen=True)
class InverseResult:
    """Inverse (or Moore-Penrose pseudoinverse) of a symmetric matrix."""

    matrix: np.ndarray
    rank: int
    used_pseudoinverse: bool
    singular_values: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def as_sym_matrix(m: np.ndarray | Sequence[Sequence[float]]) -> np.ndarray:
    """Validates a square, finite, symmetric matrix and returns it as float64."""
    arr = np.asarray(m, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise InvalidInputError(f"Expected a square matrix, got shape {arr.shape}.")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError("Matrix contains non-finite entries.")
    scale = max(float(np.max(np.abs(arr))) if arr.size else 0.0, 1.0)
    if np.max(np.abs(arr - arr.T), initial=0.0) > SYMMETRY_RTOL * scale:
        raise InvalidInputError("Matrix is not symmetric.")
    return arr


def invert_or_pseudo(m: np.ndarray, tol: Optional[float] = None) -> InverseResult:
    """
    Inverts a symmetric matrix, falling back to the pseudoinverse.

    Singular values below `tol * sigma_max` are treated as zero. With the
    default `tol = dim * eps` a well-conditioned matrix gets its exact inverse
    and `used_pseudoinverse=False`.
    """
    arr = as_sym_matrix(m)
    dim = arr.shape[0]
    if dim == 0:
        raise InvalidInputError("Cannot invert an empty matrix.")
    rcond = dim * np.finfo(np.float64).eps if tol is None else float(tol)

    # symmetric: singular values are |eigenvalues|
    eigvals, eigvecs = np.linalg.eigh((arr + arr.T) / 2.0)
    singular = np.abs(eigvals)
    sigma_max = float(singular.max())
    cutoff = rcond * sigma_max
    keep = singular > cutoff if sigma_max > 0 else np.zeros(dim, dtype=bool)
    rank = int(keep.sum())

    if rank == dim:
        inv = np.linalg.inv(arr)
        inv = (inv + inv.T) / 2.0
        return InverseResult(inv, rank, False, np.sort(singular)[::-1])

    inv_vals = np.zeros_like(eigvals)
    inv_vals[keep] = 1.0 / eigvals[keep]
    pinv = (eigvecs * inv_vals) @ eigvecs.T
    pinv = (pinv + pinv.T) / 2.0
    logger.debug("Pseudoinverse used: rank %d of %d", rank, dim)
    return InverseResult(pinv, rank, True, np.sort(singular)[::-1])


def chisq_sf(x: float, df: int) -> float:
    """P(chi^2_df > x) via the regularized upper incomplete gamma function."""
    _check_chisq_args(x, df)
    return float(special.gammaincc(df / 2.0, x / 2.0))


def chisq_cdf(x: float, df: int) -> float:
    """P(chi^2_df <= x)."""
    _check_chisq_args(x, df)
    return float(special.gammainc(df / 2.0, x / 2.0))


def _check_chisq_args(x: float, df: int) -> None:
    if not np.isfinite(x) or x < 0:
        raise InvalidInputError(f"Chi-square argument must be finite and >= 0, got {x}.")
    if int(df) != df or df < 1:
        raise InvalidInputError(f"Degrees of freedom must be a positive integer, got {df}.")


def sample_cov(a: Sequence[float], b: Sequence[float]) -> float:
    """Unbiased sample covariance sum((a - mean a)(b - mean b)) / (n - 1)."""
    a_arr = np.asarray(a, dtype=np.float64)
    b_arr = np.asarray(b, dtype=np.float64)
    if a_arr.shape != b_arr.shape or a_arr.ndim != 1:
        raise InvalidInputError("sample_cov needs two 1D vectors of equal length.")
    return float(sample_cov_matrix(np.column_stack([a_arr, b_arr]))[0, 1])


def sample_cov_matrix(columns: np.ndarray) -> np.ndarray:
    """(n-1)-denominator covariance matrix of the columns of an (n, k) array."""
    arr = np.asarray(columns, dtype=np.float64)
    if arr.ndim != 2:
        raise InvalidInputError("Expected an (n, k) array of columns.")
    n = arr.shape[0]
    if n < 2:
        raise InvalidInputError(f"Covariance needs n >= 2 rows, got {n}.")
    centered = arr - arr.mean(axis=0)
    cov = centered.T @ centered / (n - 1)
    return (cov + cov.T) / 2.0
