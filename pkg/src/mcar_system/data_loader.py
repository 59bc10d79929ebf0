# -*- coding: utf-8 -*-
"""Incomplete samples: storage, column roles, indicators and CSV I/O."""

from __future__ import annotations

import csv
import dataclasses
import logging
import os
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import stats

from mcar_system.errors import CsvParseError, InvalidInputError

logger = logging.getLogger(__name__)

ColumnRef = Union[int, str]

TRANSFORMS = ("identity", "log", "rank")


@dataclasses.dataclass(frozen=True)
class IncompleteMatrix:
    """n x d table of reals with an observation mask (True = observed)."""

    values: np.ndarray  # (n, d) float64, NaN wherever mask is False
    mask: np.ndarray  # (n, d) bool
    names: Tuple[str, ...]

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64)
        mask = np.array(self.mask, dtype=bool)
        if values.ndim != 2 or values.shape != mask.shape:
            raise InvalidInputError(
                f"Values {values.shape} and mask {mask.shape} must be equal 2D shapes."
            )
        if len(self.names) != values.shape[1]:
            raise InvalidInputError(
                f"Expected {values.shape[1]} column names, got {len(self.names)}."
            )
        if not np.all(np.isfinite(values[mask])):
            raise InvalidInputError("Observed cells must hold finite values.")
        # masked-off cells never carry a usable value
        values[~mask] = np.nan
        values.setflags(write=False)
        mask.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "mask", mask)
        object.__setattr__(self, "names", tuple(str(n) for n in self.names))

    @classmethod
    def from_array(
        cls, values: np.ndarray, names: Optional[Sequence[str]] = None
    ) -> "IncompleteMatrix":
        """Builds a matrix where NaN cells are the missing ones."""
        arr = np.asarray(values, dtype=np.float64)
        if arr.ndim != 2:
            raise InvalidInputError("Expected a 2D array.")
        if names is None:
            names = [f"V{j + 1}" for j in range(arr.shape[1])]
        return cls(values=arr, mask=~np.isnan(arr), names=tuple(names))

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def d(self) -> int:
        return self.values.shape[1]

    def column_index(self, ref: ColumnRef) -> int:
        """Resolves a column name or 0-based index."""
        if isinstance(ref, (int, np.integer)):
            if not 0 <= ref < self.d:
                raise InvalidInputError(f"Column index {ref} out of range 0..{self.d - 1}.")
            return int(ref)
        if ref in self.names:
            return self.names.index(ref)
        if str(ref).isdigit():
            return self.column_index(int(ref))
        raise InvalidInputError(f"Unknown column '{ref}'. Known: {list(self.names)}")

    def fully_missing_rows(self) -> np.ndarray:
        """Indices of rows with no observed cell."""
        return np.flatnonzero(~self.mask.any(axis=1))

    def drop_rows(self, rows: Iterable[int]) -> "IncompleteMatrix":
        keep = np.ones(self.n, dtype=bool)
        keep[list(rows)] = False
        return IncompleteMatrix(self.values[keep], self.mask[keep], self.names)


@dataclasses.dataclass(frozen=True)
class ColumnRoles:
    """Partition of the columns into complete X and incomplete Y."""

    x_indices: Tuple[int, ...]
    y_indices: Tuple[int, ...]

    def __post_init__(self):
        both = list(self.x_indices) + list(self.y_indices)
        if not both:
            raise InvalidInputError("At least one column is required.")
        if len(set(both)) != len(both):
            raise InvalidInputError("X and Y column sets must be disjoint.")

    @property
    def p(self) -> int:
        return len(self.x_indices)

    @property
    def q(self) -> int:
        return len(self.y_indices)

    def validate_for(self, m: IncompleteMatrix) -> None:
        both = sorted(self.x_indices + self.y_indices)
        if both != list(range(m.d)):
            raise InvalidInputError(f"Roles do not partition the {m.d} columns.")
        holed_x = [j for j in self.x_indices if not m.mask[:, j].all()]
        if holed_x:
            raise InvalidInputError(f"X columns {holed_x} contain missing cells.")


def classify_columns(
    m: IncompleteMatrix, force_y: Optional[Sequence[ColumnRef]] = None
) -> ColumnRoles:
    """Complete columns become X, holed ones (and any forced ones) become Y."""
    forced = {m.column_index(ref) for ref in (force_y or [])}
    complete = m.mask.all(axis=0)
    x_idx = tuple(j for j in range(m.d) if complete[j] and j not in forced)
    y_idx = tuple(j for j in range(m.d) if not complete[j] or j in forced)
    return ColumnRoles(x_indices=x_idx, y_indices=y_idx)


def indicators(m: IncompleteMatrix, roles: ColumnRoles) -> np.ndarray:
    """n x q matrix of response indicators R (1.0 observed, 0.0 missing)."""
    return m.mask[:, list(roles.y_indices)].astype(np.float64)


def zero_fill(m: IncompleteMatrix, roles: ColumnRoles) -> np.ndarray:
    """Data matrix in original column order with missing Y cells set to 0."""
    roles.validate_for(m)
    return np.where(m.mask, m.values, 0.0)


def transform_columns(m: IncompleteMatrix, kind: str = "identity") -> IncompleteMatrix:
    """Applies a monotone per-column transform to the observed values."""
    if kind == "identity":
        return m
    if kind not in TRANSFORMS:
        raise InvalidInputError(f"Unknown transform '{kind}'. Choose from {TRANSFORMS}.")
    values = np.array(m.values)
    for j in range(m.d):
        obs = m.mask[:, j]
        col = values[obs, j]
        if kind == "log":
            if np.any(col <= 0):
                raise InvalidInputError(
                    f"Log transform needs positive values; column '{m.names[j]}' has some <= 0."
                )
            values[obs, j] = np.log(col)
        else:
            values[obs, j] = stats.rankdata(col, method="average")
    return IncompleteMatrix(values, m.mask, m.names)


def missingness_summary(m: IncompleteMatrix) -> List[Tuple[str, float]]:
    """Realized missing fraction of every column."""
    frac = 1.0 - m.mask.mean(axis=0)
    return list(zip(m.names, (float(f) for f in frac)))


def read_csv(path: str, na_marker: str = "NA") -> IncompleteMatrix:
    """
    Loads a numeric CSV with a header row using Python's built-in csv module.
    Cells equal to `na_marker` or empty are missing.
    """
    if not os.path.exists(path):
        raise FileNotFoundError(f"CSV not found: {path}")

    with open(path, "r", encoding="utf-8-sig", newline="") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise CsvParseError("file is empty, a header row is required", row=1)
        header = [h.strip() for h in header]
        if not header or any(h == "" for h in header):
            raise CsvParseError("header contains an empty column name", row=1)

        rows: List[List[float]] = []
        for line_no, record in enumerate(reader, start=2):
            if not record:
                continue  # blank line
            if len(record) != len(header):
                raise CsvParseError(
                    f"expected {len(header)} fields, found {len(record)}", row=line_no
                )
            parsed = []
            for name, field in zip(header, record):
                field = field.strip()
                if field == "" or field == na_marker:
                    parsed.append(np.nan)
                    continue
                try:
                    value = float(field)
                except ValueError:
                    raise CsvParseError(f"non-numeric value '{field}'", line_no, name)
                if not np.isfinite(value):
                    raise CsvParseError(f"non-finite value '{field}'", line_no, name)
                parsed.append(value)
            rows.append(parsed)

    if not rows:
        raise CsvParseError("no data rows after the header", row=2)
    values = np.array(rows, dtype=np.float64).reshape(len(rows), len(header))
    logger.info("Loaded %d rows x %d columns from %s", values.shape[0], len(header), path)
    return IncompleteMatrix.from_array(values, names=header)


def write_csv(m: IncompleteMatrix, path: str, na_marker: str = "NA") -> str:
    """Writes values with 17 significant digits so a re-read is bit-exact."""
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(m.names)
        for i in range(m.n):
            writer.writerow(
                format(m.values[i, j], ".17g") if m.mask[i, j] else na_marker
                for j in range(m.d)
            )
    return path
