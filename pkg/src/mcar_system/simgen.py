# -*- coding: utf-8 -*-
"""Complete-data generators and amputation mechanisms for simulation studies."""

from __future__ import annotations

import enum
import logging
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy import stats

from mcar_system.data_loader import IncompleteMatrix
from mcar_system.errors import AmputationError

logger = logging.getLogger(__name__)


class DistributionKind(str, enum.Enum):
    STD_NORMAL = "std_normal"
    CLAYTON_EXP1 = "clayton_exp1"
    CLAYTON_CHISQ4 = "clayton_chisq4"
    STUDENT_T2 = "student_t2"


class MechanismKind(str, enum.Enum):
    MCAR = "mcar"
    MAR_1_TO_X = "mar_1_to_x"
    MAR_RANK = "mar_rank"
    MNAR_UPPER_CENSOR = "mnar_upper_censor"


MAR_KINDS = (MechanismKind.MAR_1_TO_X, MechanismKind.MAR_RANK)


class DistributionSpec(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: DistributionKind
    dim: int = Field(ge=1)
    scale_offdiag: float = Field(default=0.0, ge=0.0, lt=1.0)
    theta: float = Field(default=1.0, gt=0.0)


class MechanismSpec(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: MechanismKind
    targets: Tuple[int, ...]
    controls: Tuple[int, ...] = ()
    rate: float = Field(default=0.1, gt=0.0, lt=1.0)
    x: float = Field(default=9.0, gt=0.0)

    @model_validator(mode="after")
    def _check_columns(self) -> "MechanismSpec":
        if not self.targets:
            raise ValueError("A mechanism needs at least one target column.")
        if self.kind in MAR_KINDS:
            if len(self.controls) != len(self.targets):
                raise ValueError(
                    f"{self.kind.value} needs one control per target "
                    f"({len(self.targets)} targets, {len(self.controls)} controls)."
                )
            if set(self.controls) & set(self.targets):
                raise ValueError("Control columns must be disjoint from target columns.")
        elif self.controls:
            raise ValueError(f"{self.kind.value} takes no control columns.")
        return self


class ScenarioSpec(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str = ""
    description: str = ""
    distribution: DistributionSpec
    n: int = Field(ge=1)
    mechanisms: Tuple[MechanismSpec, ...] = ()
    seed: int = Field(default=0, ge=0, lt=2**64)

    @model_validator(mode="after")
    def _check_indices(self) -> "ScenarioSpec":
        dim = self.distribution.dim
        for mech in self.mechanisms:
            bad = [j for j in mech.targets + mech.controls if not 0 <= j < dim]
            if bad:
                raise ValueError(f"Column indices {bad} outside 0..{dim - 1}.")
        return self

    def with_rate(self, rate: float) -> "ScenarioSpec":
        mechs = tuple(
            MechanismSpec(**{**mech.model_dump(), "rate": rate}) for mech in self.mechanisms
        )
        return self.model_copy(update={"mechanisms": mechs})

    def with_n(self, n: int) -> "ScenarioSpec":
        return ScenarioSpec(**{**self.model_dump(), "n": n})

    def with_seed(self, seed: int) -> "ScenarioSpec":
        return ScenarioSpec(**{**self.model_dump(), "seed": seed})


def make_rng(seed: int, *spawn_key: int) -> np.random.Generator:
    """Counter-based generator for the substream (seed, *spawn_key)."""
    seq = np.random.SeedSequence(entropy=seed, spawn_key=tuple(int(k) for k in spawn_key))
    return np.random.Generator(np.random.Philox(seq))


def sample(dist: DistributionSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draws an (n, dim) complete sample."""
    d = dist.dim
    if dist.kind == DistributionKind.STD_NORMAL:
        return rng.standard_normal((n, d))

    if dist.kind in (DistributionKind.CLAYTON_EXP1, DistributionKind.CLAYTON_CHISQ4):
        # Marshall-Olkin: V ~ Gamma(1/theta), U_k = (1 + E_k / V)^(-1/theta)
        frailty = rng.gamma(1.0 / dist.theta, 1.0, size=n)
        shocks = rng.exponential(1.0, size=(n, d))
        log_u = -np.log1p(shocks / frailty[:, None]) / dist.theta
        upper_tail = -np.expm1(log_u)  # 1 - U, kept exact near U = 1
        if dist.kind == DistributionKind.CLAYTON_EXP1:
            return -np.log(upper_tail)
        return stats.chi2.isf(upper_tail, 4)

    scale = np.full((d, d), dist.scale_offdiag)
    np.fill_diagonal(scale, 1.0)
    z = rng.standard_normal((n, d)) @ np.linalg.cholesky(scale).T
    w = rng.chisquare(2.0, size=n)
    return z / np.sqrt(w / 2.0)[:, None]


def holes_per_column(rate: float, n: int) -> int:
    """Exact number of deleted cells per target column."""
    return int(round(rate * n))


def deletion_rows(
    data: np.ndarray, mech: MechanismSpec, rng: np.random.Generator
) -> Dict[int, np.ndarray]:
    """Rows to delete in every target column; controls read `data` as given."""
    n = data.shape[0]
    k = holes_per_column(mech.rate, n)
    if k < 1:
        raise AmputationError(f"Rate {mech.rate} on n = {n} deletes no cell.")
    if k >= n:
        raise AmputationError(f"Rate {mech.rate} on n = {n} would empty the column.")

    controls: Sequence[Optional[int]] = mech.controls or [None] * len(mech.targets)
    out: Dict[int, np.ndarray] = {}
    for target, control in zip(mech.targets, controls):
        if mech.kind == MechanismKind.MCAR:
            rows = rng.choice(n, size=k, replace=False)
        elif mech.kind == MechanismKind.MNAR_UPPER_CENSOR:
            rows = np.argsort(-data[:, target], kind="stable")[:k]
        else:
            ctrl = data[:, control]
            if mech.kind == MechanismKind.MAR_1_TO_X:
                # ties at the median stay in the low group
                weights = np.where(ctrl <= np.median(ctrl), 1.0, mech.x)
            else:
                weights = stats.rankdata(ctrl, method="average")
            rows = rng.choice(n, size=k, replace=False, p=weights / weights.sum())
        out[target] = np.sort(rows)
    return out


def _column_names(d: int) -> Tuple[str, ...]:
    return tuple(f"V{j + 1}" for j in range(d))


def ampute(
    data: np.ndarray,
    mech: MechanismSpec,
    rng: np.random.Generator,
    names: Optional[Sequence[str]] = None,
) -> IncompleteMatrix:
    """Deletes round(rate * n) cells per target column of a complete sample."""
    arr = np.asarray(data, dtype=np.float64)
    mask = np.ones(arr.shape, dtype=bool)
    for target, rows in deletion_rows(arr, mech, rng).items():
        mask[rows, target] = False
    return IncompleteMatrix(arr, mask, tuple(names) if names else _column_names(arr.shape[1]))


def run_scenario(
    s: ScenarioSpec, rng: Optional[np.random.Generator] = None
) -> IncompleteMatrix:
    """
    Samples the distribution and applies the mechanisms in order. MAR controls
    always read the complete values, even if an earlier or later mechanism
    deletes cells of the control column.
    """
    if rng is None:
        rng = make_rng(s.seed)
    data = sample(s.distribution, s.n, rng)
    mask = np.ones(data.shape, dtype=bool)
    for mech in s.mechanisms:
        for target, rows in deletion_rows(data, mech, rng).items():
            mask[rows, target] = False
    return IncompleteMatrix(data, mask, _column_names(s.distribution.dim))
