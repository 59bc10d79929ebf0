# -*- coding: utf-8 -*-
"""Result records returned by every MCAR test."""

from __future__ import annotations

import dataclasses
import enum
from typing import Any, Dict, List, Optional


class Method(str, enum.Enum):
    A_N = "A_n"
    A_N_PRIME = "A_n_prime"
    LITTLE_D2 = "little_d2"


class PairKind(str, enum.Enum):
    X = "X-pair"
    Y = "Y-pair"


@dataclasses.dataclass(frozen=True)
class PairStat:
    """One pairwise statistic; u indexes X (or Y) columns, v indexes indicators."""

    kind: PairKind
    u: int
    v: int
    value: float
    data_column: str = ""
    indicator_column: str = ""

    def label(self) -> str:
        return f"({self.data_column or self.u}, R[{self.indicator_column or self.v}])"


@dataclasses.dataclass(frozen=True)
class TestReport:
    """Outcome of one test on one sample."""

    __test__ = False

    method: Method
    statistic: float
    df: int
    p_value: float
    rank_deficient: bool
    pair_stats: List[PairStat] = dataclasses.field(default_factory=list)
    n: int = 0
    p: int = 0
    q: int = 0
    rank: Optional[int] = None

    def __post_init__(self):
        if not 0.0 <= self.p_value <= 1.0:
            raise ValueError(f"p-value {self.p_value} outside [0, 1].")
        if self.df < 1:
            raise ValueError(f"df must be >= 1, got {self.df}.")

    def rejects(self, alpha: float) -> bool:
        return self.p_value < alpha

    def to_dict(self) -> Dict[str, Any]:
        return {
            "method": self.method.value,
            "statistic": self.statistic,
            "df": self.df,
            "p_value": self.p_value,
            "rank_deficient": self.rank_deficient,
            "rank": self.rank,
            "n": self.n,
            "p": self.p,
            "q": self.q,
            "pair_stats": [
                {
                    "kind": ps.kind.value,
                    "u": ps.u,
                    "v": ps.v,
                    "data_column": ps.data_column,
                    "indicator_column": ps.indicator_column,
                    "value": ps.value,
                }
                for ps in self.pair_stats
            ],
        }

    def summary(self) -> str:
        flag = " (pseudoinverse)" if self.rank_deficient else ""
        return (
            f"{self.method.value}: statistic={self.statistic:.6g}, df={self.df}, "
            f"p-value={self.p_value:.6g}{flag}"
        )
