# -*- coding: utf-8 -*-
"""
Monte Carlo harness for empirical size and power.

Every grid cell (scenario, n, rate) runs `replications` independent datasets;
all methods are applied to the same dataset of a replication. Replication
(cell, rep) draws from the substream make_rng(master_seed, cell, rep), so the
result does not depend on the worker count or scheduling.
"""

from __future__ import annotations

import dataclasses
import logging
import math
import time
from collections import Counter
from typing import TYPE_CHECKING, Annotated, Any, Dict, List, Optional, Sequence

import pandas as pd
from joblib import Parallel, delayed
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator
from tqdm import tqdm

from mcar_system import scenarios, utils
from mcar_system.errors import InvalidInputError, MCARError
from mcar_system.simgen import ScenarioSpec, make_rng, run_scenario
from mcar_system.testers import expand_methods, get_tester

if TYPE_CHECKING:
    from mcar_system.testers.base import MCARTester

logger = logging.getLogger(__name__)

BENCH_PROFILES: Dict[str, Dict[str, Any]] = {
    "desk": {
        "replications": 500,
        "sample_sizes": [100, 200],
        "rates": [0.05, 0.15, 0.30],
    },
    "paper": {
        "replications": 2000,
        "sample_sizes": [100, 200, 300],
        "rates": [0.03, 0.05, 0.10, 0.15, 0.20, 0.25, 0.30],
    },
}

Rate = Annotated[float, Field(gt=0.0, lt=1.0)]
SampleSize = Annotated[int, Field(ge=2)]


class BenchConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    scenarios: List[ScenarioSpec] = Field(min_length=1)
    rates: List[Rate] = Field(min_length=1)
    sample_sizes: List[SampleSize] = Field(min_length=1)
    methods: List[str] = Field(default_factory=lambda: ["an-prime", "an", "little"])
    replications: int = Field(ge=1)
    alpha: float = Field(default=0.05, gt=0.0, lt=1.0)
    master_seed: int = Field(default=0, ge=0, lt=2**64)
    workers: int = 1
    df_mode: str = "nominal"
    transform: str = "identity"

    @field_validator("scenarios", mode="before")
    @classmethod
    def _resolve_scenarios(cls, value):
        # built-in names and {"builtin": ...} mappings are expanded here
        out = []
        for item in value or []:
            if isinstance(item, str):
                out.append(scenarios.get_scenario(item))
            elif isinstance(item, dict) and "builtin" in item:
                out.append(scenarios.scenario_from_dict(item))
            else:
                out.append(item)
        return out

    @field_validator("methods")
    @classmethod
    def _canonical_methods(cls, value: List[str]) -> List[str]:
        methods = expand_methods(value)
        if not methods:
            raise ValueError("At least one method is required.")
        return methods

    @field_validator("workers")
    @classmethod
    def _check_workers(cls, value: int) -> int:
        if value == 0 or value < -1:
            raise ValueError("workers must be >= 1, or -1 for all cores.")
        return value

    @classmethod
    def from_profile(cls, profile: str, scenario_names: Sequence[str], **overrides) -> "BenchConfig":
        if profile not in BENCH_PROFILES:
            raise InvalidInputError(
                f"Unknown profile '{profile}'. Choose from {sorted(BENCH_PROFILES)}."
            )
        data = {**BENCH_PROFILES[profile], "scenarios": list(scenario_names)}
        data.update({k: v for k, v in overrides.items() if v is not None})
        return build_config(data)

    def cells(self) -> List[ScenarioSpec]:
        """Grid cells in canonical order: scenario, then n, then rate."""
        return [
            template.with_n(n).with_rate(rate)
            for template in self.scenarios
            for n in self.sample_sizes
            for rate in self.rates
        ]


def build_config(data: Dict[str, Any]) -> BenchConfig:
    try:
        return BenchConfig.model_validate(data)
    except ValidationError as e:
        raise InvalidInputError(f"Invalid bench config: {e}")


def load_bench_config(path: str, **overrides) -> BenchConfig:
    """
    Reads a bench config (JSON or YAML). A "profile" key fills in the grid of
    that profile; explicit keys and non-None `overrides` win.
    """
    data = scenarios.load_config_file(path)
    profile = data.pop("profile", None)
    if profile is not None:
        if profile not in BENCH_PROFILES:
            raise InvalidInputError(
                f"Unknown profile '{profile}'. Choose from {sorted(BENCH_PROFILES)}."
            )
        data = {**BENCH_PROFILES[profile], **data}
    data.update({k: v for k, v in overrides.items() if v is not None})
    return build_config(data)


@dataclasses.dataclass(frozen=True)
class ReplicationRecord:
    method: str
    scenario: str
    n: int
    rate: float
    replication: int
    p_value: Optional[float]
    rejected: Optional[bool]
    failure: Optional[str]  # error class name when the test could not run
    runtime: float


@dataclasses.dataclass(frozen=True)
class CellResult:
    method: str
    scenario: str
    n: int
    rate: float
    replications: int
    successes: int
    rejections: int
    failure_count: int
    rejection_rate: float  # NaN when no replication succeeded
    se: float
    mean_runtime: float
    failure_kinds: Dict[str, int] = dataclasses.field(default_factory=dict)

    @property
    def all_failed(self) -> bool:
        return self.successes == 0


@dataclasses.dataclass
class BenchResult:
    config: BenchConfig
    cells: List[CellResult]
    records: List[ReplicationRecord]
    elapsed: float = 0.0

    def failed_cells(self) -> List[CellResult]:
        return [c for c in self.cells if c.all_failed]

    def cell(self, method: str, scenario: str, n: int, rate: float) -> CellResult:
        for c in self.cells:
            if (c.method, c.scenario, c.n) == (method, scenario, n) and math.isclose(c.rate, rate):
                return c
        raise KeyError((method, scenario, n, rate))

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [
                {
                    "method": c.method,
                    "scenario": c.scenario,
                    "n": c.n,
                    "rate_m": c.rate,
                    "rejection_rate": c.rejection_rate,
                    "se": c.se,
                    "failures": c.failure_count,
                    "successes": c.successes,
                    "replications": c.replications,
                    "mean_runtime": c.mean_runtime,
                }
                for c in self.cells
            ]
        )


def _replicate(
    spec: ScenarioSpec,
    testers: List["MCARTester"],
    alpha: float,
    master_seed: int,
    cell_index: int,
    rep: int,
) -> List[ReplicationRecord]:
    rng = make_rng(master_seed, cell_index, rep)
    rate = spec.mechanisms[0].rate if spec.mechanisms else 0.0

    def record(tester, p_value=None, rejected=None, failure=None, runtime=0.0):
        return ReplicationRecord(
            method=tester.name,
            scenario=spec.name,
            n=spec.n,
            rate=rate,
            replication=rep,
            p_value=p_value,
            rejected=rejected,
            failure=failure,
            runtime=runtime,
        )

    try:
        data = run_scenario(spec, rng)
    except MCARError as e:
        return [record(t, failure=type(e).__name__) for t in testers]

    records = []
    for tester in testers:
        start = time.perf_counter()
        try:
            report = tester.run(data)
        except MCARError as e:
            records.append(
                record(tester, failure=type(e).__name__, runtime=time.perf_counter() - start)
            )
            continue
        records.append(
            record(
                tester,
                p_value=report.p_value,
                rejected=report.rejects(alpha),
                runtime=time.perf_counter() - start,
            )
        )
    return records


def summarize_cell(records: Sequence[ReplicationRecord]) -> CellResult:
    """Rate and binomial standard error over the successful replications."""
    first = records[0]
    done = [r for r in records if r.failure is None]
    rejections = sum(1 for r in done if r.rejected)
    successes = len(done)
    if successes:
        rate = rejections / successes
        se = math.sqrt(rate * (1.0 - rate) / successes)
    else:
        rate = se = float("nan")
    return CellResult(
        method=first.method,
        scenario=first.scenario,
        n=first.n,
        rate=first.rate,
        replications=len(records),
        successes=successes,
        rejections=rejections,
        failure_count=len(records) - successes,
        rejection_rate=rate,
        se=se,
        mean_runtime=sum(r.runtime for r in records) / len(records),
        failure_kinds=dict(Counter(r.failure for r in records if r.failure is not None)),
    )


def run_bench(
    cfg: BenchConfig,
    progress: bool = True,
    backend: Optional[str] = None,
) -> BenchResult:
    """
    Runs every (scenario, n, rate) cell of `cfg`. Test errors of a single
    replication are recorded as failures and never abort the run.
    """
    testers = [
        get_tester(name, transform=cfg.transform, df_mode=cfg.df_mode) for name in cfg.methods
    ]
    cells = cfg.cells()
    logger.info(
        "Bench: %d cell(s) x %d replication(s), methods %s, %s worker(s)",
        len(cells),
        cfg.replications,
        ",".join(t.name for t in testers),
        cfg.workers,
    )

    start = time.perf_counter()
    all_records: List[ReplicationRecord] = []
    summaries: List[CellResult] = []
    with Parallel(n_jobs=cfg.workers, backend=backend) as parallel:
        for cell_index, spec in enumerate(tqdm(cells, desc="bench cells", disable=not progress)):
            batches = parallel(
                delayed(_replicate)(spec, testers, cfg.alpha, cfg.master_seed, cell_index, rep)
                for rep in range(cfg.replications)
            )
            # Parallel returns in submission order
            for k, tester in enumerate(testers):
                per_method = [batch[k] for batch in batches]
                summary = summarize_cell(per_method)
                summaries.append(summary)
                all_records.extend(per_method)
                logger.info(
                    "%s n=%d m=%.2f %s: rate %s (se %s), %d failure(s)",
                    spec.name,
                    spec.n,
                    summary.rate,
                    tester.name,
                    utils.fmt_sig(summary.rejection_rate, 4),
                    utils.fmt_sig(summary.se, 3),
                    summary.failure_count,
                )
                if summary.failure_kinds:
                    logger.info("  failures by kind: %s", summary.failure_kinds)

    elapsed = time.perf_counter() - start
    result = BenchResult(config=cfg, cells=summaries, records=all_records, elapsed=elapsed)
    failed = result.failed_cells()
    if failed:
        logger.warning("%d cell(s) failed in every replication", len(failed))
    logger.info("Bench finished in %.1fs", elapsed)
    return result


def export_csv(r: BenchResult, path: str) -> str:
    """Long format: one row per (method, scenario, n, rate_m)."""
    utils.ensure_parent_dir(path)
    r.to_frame().to_csv(path, index=False)
    return path


def export_plotdata(r: BenchResult, path: str) -> str:
    """
    One row per (panel, rate_m) with a rate and an se column per method,
    a panel being one scenario at one sample size.
    """
    utils.ensure_parent_dir(path)
    frame = r.to_frame()
    wide = frame.set_index(["scenario", "n", "rate_m", "method"])[
        ["rejection_rate", "se"]
    ].unstack("method")
    # restore grid order, unstack sorts the index
    order = frame[["scenario", "n", "rate_m"]].drop_duplicates()
    wide = wide.reindex(pd.MultiIndex.from_frame(order))
    columns = {}
    for method in dict.fromkeys(frame["method"]):
        columns[method] = wide[("rejection_rate", method)]
        columns[f"{method}_se"] = wide[("se", method)]
    out = pd.DataFrame(columns).reset_index()
    out.insert(0, "panel", out["scenario"] + " n=" + out["n"].astype(str))
    out.to_csv(path, index=False)
    return path


def summary_table(r: BenchResult) -> str:
    """Plain-text table of every cell, for the terminal."""
    header = f"{'method':<10} {'scenario':<32} {'n':>5} {'m':>5} {'rate':>8} {'se':>8} {'fail':>5}"
    lines = [header, "-" * len(header)]
    for c in r.cells:
        lines.append(
            f"{c.method:<10} {c.scenario:<32} {c.n:>5} {c.rate:>5.2f} "
            f"{utils.fmt_sig(c.rejection_rate, 4):>8} {utils.fmt_sig(c.se, 3):>8} {c.failure_count:>5}"
        )
    return "\n".join(lines)
