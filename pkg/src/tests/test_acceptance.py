"""Monte Carlo calibration and power checks (run with `pytest -m slow`)."""

import math

import numpy as np
import pytest
from scipy import stats

from mcar_system import bench

pytestmark = pytest.mark.slow

N = 2000


def _run(scenario, n, rates, methods, seed, workers=1, replications=N):
    cfg = bench.build_config(
        {
            "scenarios": [scenario],
            "rates": rates,
            "sample_sizes": [n],
            "methods": methods,
            "replications": replications,
            "master_seed": seed,
            "workers": workers,
        }
    )
    return bench.run_bench(cfg, progress=False)


def _at_least(a, b):
    """a >= b, or a tie within two standard errors of the difference."""
    return a.rejection_rate >= b.rejection_rate - 2.0 * math.hypot(a.se, b.se)


def test_size_of_generalized_test_under_normal_mcar():
    result = _run("2x3y-normal-mcar", 200, [0.05, 0.15, 0.30], ["an-prime"], seed=101)
    for cell in result.cells:
        assert cell.failure_count == 0
        assert 0.03 <= cell.rejection_rate <= 0.07, cell


def test_little_miscalibrated_under_clayton_exp1():
    result = _run("2x3y-clayton-exp1-mcar", 200, [0.15], ["an-prime", "little"], seed=102)
    little = result.cell("little_d2", "2x3y-clayton-exp1-mcar", 200, 0.15)
    new = result.cell("A_n_prime", "2x3y-clayton-exp1-mcar", 200, 0.15)
    assert little.rejection_rate > 0.07
    assert 0.03 <= new.rejection_rate <= 0.08


def test_power_ordering_under_mar_one_to_nine():
    result = _run("2x3y-normal-mar1to9", 100, [0.15], ["all"], seed=103)
    old = result.cell("A_n", "2x3y-normal-mar1to9", 100, 0.15)
    new = result.cell("A_n_prime", "2x3y-normal-mar1to9", 100, 0.15)
    little = result.cell("little_d2", "2x3y-normal-mar1to9", 100, 0.15)
    assert _at_least(old, new)
    assert _at_least(new, little)


def test_alternative_invisible_to_old_test():
    result = _run("2x3y-normal-marrank-mcar3", 200, [0.30], ["an", "an-prime"], seed=104)
    old = result.cell("A_n", "2x3y-normal-marrank-mcar3", 200, 0.30)
    new = result.cell("A_n_prime", "2x3y-normal-marrank-mcar3", 200, 0.30)
    assert new.rejection_rate > old.rejection_rate + 0.05
    assert abs(old.rejection_rate - 0.05) <= 3.0 * math.sqrt(0.05 * 0.95 / N)


def test_p_values_uniform_under_null():
    result = _run("2x3y-normal-mcar", 300, [0.10], ["an-prime"], seed=105)
    p_values = [r.p_value for r in result.records]
    assert len(p_values) == N
    assert stats.kstest(p_values, "uniform").statistic < 0.05


def test_rejection_rate_spread_across_seeds_matches_binomial_se():
    cells = [
        _run("2x3y-normal-mcar", 100, [0.15], ["an-prime"], seed=200 + k, replications=500).cells[0]
        for k in range(20)
    ]
    rates = np.array([c.rejection_rate for c in cells])
    se = float(np.mean([c.se for c in cells]))
    spread = float(np.std(rates, ddof=1))
    assert se / 2.0 <= spread <= 2.0 * se, (spread, se)


def test_pipeline_deterministic_across_thread_counts():
    cfg = bench.build_config(
        {
            "scenarios": ["2x3y-clayton-chisq4-marrank"],
            "rates": [0.2],
            "sample_sizes": [100],
            "methods": ["all"],
            "replications": 200,
            "master_seed": 106,
        }
    )
    one = bench.run_bench(cfg, progress=False, backend="threading")
    eight = bench.run_bench(cfg.model_copy(update={"workers": 8}), progress=False, backend="threading")
    assert [r.p_value for r in one.records] == [r.p_value for r in eight.records]
