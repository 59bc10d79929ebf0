import itertools
from collections import Counter

import numpy as np
import pytest
from pydantic import ValidationError
from scipy import stats

from mcar_system import simgen
from mcar_system.errors import AmputationError
from mcar_system.simgen import (
    DistributionKind,
    DistributionSpec,
    MechanismKind,
    MechanismSpec,
    ScenarioSpec,
)


def _dist(kind, dim=2, **kw):
    return DistributionSpec(kind=kind, dim=dim, **kw)


def test_standard_normal_moments():
    data = simgen.sample(_dist(DistributionKind.STD_NORMAL, 3), 10_000, simgen.make_rng(1))
    assert data.shape == (10_000, 3)
    assert np.all(np.abs(data.mean(axis=0)) < 0.05)
    assert np.all(np.abs(data.var(axis=0) - 1.0) < 0.08)


def test_clayton_kendall_tau():
    data = simgen.sample(_dist(DistributionKind.CLAYTON_EXP1), 10_000, simgen.make_rng(2))
    tau = stats.kendalltau(data[:, 0], data[:, 1])[0]
    assert abs(tau - 1.0 / 3.0) < 0.03
    assert np.all(data > 0)
    assert np.all(np.abs(data.mean(axis=0) - 1.0) < 0.06)


def test_clayton_theta_changes_dependence():
    data = simgen.sample(
        _dist(DistributionKind.CLAYTON_EXP1, theta=4.0), 10_000, simgen.make_rng(2)
    )
    tau = stats.kendalltau(data[:, 0], data[:, 1])[0]
    assert abs(tau - 4.0 / 6.0) < 0.03


def test_clayton_chisq4_margins():
    data = simgen.sample(_dist(DistributionKind.CLAYTON_CHISQ4), 10_000, simgen.make_rng(3))
    assert np.all(np.abs(data.mean(axis=0) - 4.0) < 0.15)
    assert np.all(np.abs(data.var(axis=0) - 8.0) < 0.8)


def test_student_t2_is_centered_and_heavy_tailed():
    data = simgen.sample(_dist(DistributionKind.STUDENT_T2, 3), 10_000, simgen.make_rng(4))
    assert np.all(np.abs(np.median(data, axis=0)) < 0.06)
    # P(|t2| > 10) is about 0.0098
    assert 0.005 < np.mean(np.abs(data) > 10.0) < 0.015


def test_student_t2_scale_offdiagonal_adds_correlation():
    data = simgen.sample(
        _dist(DistributionKind.STUDENT_T2, 2, scale_offdiag=0.5), 10_000, simgen.make_rng(5)
    )
    tau = stats.kendalltau(data[:, 0], data[:, 1])[0]
    # elliptical: tau = 2 / pi * arcsin(0.5)
    assert abs(tau - 1.0 / 3.0) < 0.03


@pytest.mark.parametrize("kind", list(MechanismKind))
def test_exact_hole_counts(kind):
    data = simgen.sample(_dist(DistributionKind.STD_NORMAL, 3), 100, simgen.make_rng(6))
    controls = (0, 0) if kind in simgen.MAR_KINDS else ()
    mech = MechanismSpec(kind=kind, targets=(1, 2), controls=controls, rate=0.1)
    m = simgen.ampute(data, mech, simgen.make_rng(7))
    assert (~m.mask).sum(axis=0).tolist() == [0, 10, 10]


def test_mar_one_to_nine_targets_upper_half():
    rng = simgen.make_rng(8)
    mech = MechanismSpec(
        kind=MechanismKind.MAR_1_TO_X, targets=(1,), controls=(0,), rate=0.1
    )
    upper, total = 0, 0
    for _ in range(300):
        data = simgen.sample(_dist(DistributionKind.STD_NORMAL), 200, rng)
        rows = simgen.deletion_rows(data, mech, rng)[1]
        upper += int(np.sum(data[rows, 0] > np.median(data[:, 0])))
        total += len(rows)
    assert 0.86 < upper / total < 0.93


def test_mar_rank_prefers_large_controls():
    rng = simgen.make_rng(9)
    mech = MechanismSpec(kind=MechanismKind.MAR_RANK, targets=(1,), controls=(0,), rate=0.2)
    data = simgen.sample(_dist(DistributionKind.STD_NORMAL), 500, rng)
    rows = simgen.deletion_rows(data, mech, rng)[1]
    assert np.mean(data[rows, 0]) > 0.2


def test_upper_censoring_removes_largest_values():
    data = simgen.sample(_dist(DistributionKind.STD_NORMAL), 200, simgen.make_rng(10))
    mech = MechanismSpec(kind=MechanismKind.MNAR_UPPER_CENSOR, targets=(1,), rate=0.2)
    m = simgen.ampute(data, mech, simgen.make_rng(11))
    deleted = data[~m.mask[:, 1], 1]
    kept = data[m.mask[:, 1], 1]
    assert len(deleted) == 40
    assert deleted.min() >= kept.max()


def test_mcar_amputation_is_exchangeable():
    rng = simgen.make_rng(12)
    data = np.zeros((10, 1))
    mech = MechanismSpec(kind=MechanismKind.MCAR, targets=(0,), rate=0.3)
    counts = Counter(
        tuple(simgen.deletion_rows(data, mech, rng)[0]) for _ in range(10_000)
    )
    subsets = list(itertools.combinations(range(10), 3))
    observed = [counts.get(s, 0) for s in subsets]
    assert sum(observed) == 10_000
    assert stats.chisquare(observed).pvalue > 0.001


@pytest.mark.parametrize("rate, n", [(0.01, 10), (0.99, 10)])
def test_amputation_count_out_of_range(rate, n):
    data = np.zeros((n, 2))
    mech = MechanismSpec(kind=MechanismKind.MCAR, targets=(1,), rate=rate)
    with pytest.raises(AmputationError):
        simgen.ampute(data, mech, simgen.make_rng(0))


def test_holes_per_column_rounds_half_to_even():
    assert simgen.holes_per_column(0.1, 100) == 10
    assert simgen.holes_per_column(0.5, 5) == 2
    assert simgen.holes_per_column(0.5, 7) == 4


def _composite(seed=5):
    return ScenarioSpec(
        name="composite",
        distribution=_dist(DistributionKind.STD_NORMAL, 5),
        n=200,
        mechanisms=(
            MechanismSpec(kind=MechanismKind.MAR_RANK, targets=(3, 4), controls=(2, 2), rate=0.3),
            MechanismSpec(kind=MechanismKind.MCAR, targets=(2,), rate=0.3),
        ),
        seed=seed,
    )


def test_run_scenario_is_deterministic():
    a = simgen.run_scenario(_composite())
    b = simgen.run_scenario(_composite())
    assert np.array_equal(a.values, b.values, equal_nan=True)
    assert np.array_equal(a.mask, b.mask)
    c = simgen.run_scenario(_composite(seed=6))
    assert not np.array_equal(a.mask, c.mask)


def test_composite_scenario_hole_counts():
    m = simgen.run_scenario(_composite())
    assert (~m.mask).sum(axis=0).tolist() == [0, 0, 60, 60, 60]
    assert m.names == ("V1", "V2", "V3", "V4", "V5")


def test_rng_substreams_differ():
    a = simgen.make_rng(3, 0, 1).standard_normal(4)
    b = simgen.make_rng(3, 1, 0).standard_normal(4)
    assert not np.array_equal(a, b)
    assert np.array_equal(a, simgen.make_rng(3, 0, 1).standard_normal(4))


def test_with_rate_updates_every_mechanism():
    spec = _composite().with_rate(0.05).with_n(100)
    assert all(mech.rate == 0.05 for mech in spec.mechanisms)
    assert spec.n == 100


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(kind=MechanismKind.MAR_RANK, targets=(1,)),
        dict(kind=MechanismKind.MAR_RANK, targets=(1,), controls=(1,)),
        dict(kind=MechanismKind.MCAR, targets=(1,), controls=(0,)),
        dict(kind=MechanismKind.MCAR, targets=()),
        dict(kind=MechanismKind.MCAR, targets=(1,), rate=1.5),
    ],
)
def test_invalid_mechanisms(kwargs):
    with pytest.raises(ValidationError):
        MechanismSpec(**kwargs)


def test_scenario_index_out_of_range():
    with pytest.raises(ValidationError):
        ScenarioSpec(
            distribution=_dist(DistributionKind.STD_NORMAL, 2),
            n=10,
            mechanisms=(MechanismSpec(kind=MechanismKind.MCAR, targets=(5,)),),
        )
