import numpy as np
import pytest

from mcar_system import numerics
from mcar_system.errors import InvalidInputError


def test_identity_inverse_is_exact():
    res = numerics.invert_or_pseudo(np.eye(3))
    assert np.allclose(res.matrix, np.eye(3))
    assert res.rank == 3
    assert not res.used_pseudoinverse


def test_diagonal_pseudoinverse():
    res = numerics.invert_or_pseudo(np.diag([2.0, 0.0]))
    assert np.allclose(res.matrix, np.diag([0.5, 0.0]))
    assert res.rank == 1
    assert res.used_pseudoinverse
    assert list(res.singular_values) == [2.0, 0.0]


def test_random_spd_multiplies_back_to_identity():
    rng = np.random.default_rng(7)
    a = rng.standard_normal((5, 5))
    spd = a @ a.T + 5.0 * np.eye(5)
    res = numerics.invert_or_pseudo(spd)
    assert np.max(np.abs(spd @ res.matrix - np.eye(5))) < 1e-8


def test_pseudoinverse_satisfies_penrose_identities():
    rng = np.random.default_rng(3)
    b = rng.standard_normal((4, 2))
    low_rank = b @ b.T
    res = numerics.invert_or_pseudo(low_rank)
    assert res.rank == 2
    assert np.allclose(low_rank @ res.matrix @ low_rank, low_rank, atol=1e-10)
    assert np.allclose(res.matrix, np.linalg.pinv(low_rank), atol=1e-8)


def test_zero_matrix_has_rank_zero():
    res = numerics.invert_or_pseudo(np.zeros((3, 3)))
    assert res.rank == 0
    assert res.used_pseudoinverse
    assert np.all(res.matrix == 0.0)


def test_custom_tolerance_drops_small_singular_value():
    m = np.diag([1.0, 1e-3])
    assert numerics.invert_or_pseudo(m).rank == 2
    assert numerics.invert_or_pseudo(m, tol=1e-2).rank == 1


@pytest.mark.parametrize(
    "bad",
    [
        [[1.0, np.nan], [np.nan, 1.0]],
        [[1.0, 2.0, 3.0]],
        [[1.0, 2.0], [0.0, 1.0]],
    ],
)
def test_invalid_matrices_rejected(bad):
    with pytest.raises(InvalidInputError):
        numerics.invert_or_pseudo(np.array(bad))


@pytest.mark.parametrize("k", [1, 2, 3, 6, 12])
def test_chisq_sf_at_zero_is_one(k):
    assert numerics.chisq_sf(0.0, k) == 1.0


def test_chisq_sf_known_quantile():
    assert abs(numerics.chisq_sf(3.841, 1) - 0.05) < 1e-3


def test_chisq_sf_decreasing_and_complements_cdf():
    xs = [0.5, 2.0, 6.0, 12.0, 30.0]
    tails = [numerics.chisq_sf(x, 6) for x in xs]
    assert all(0.0 < t < 1.0 for t in tails)
    assert all(a > b for a, b in zip(tails, tails[1:]))
    for x in xs:
        assert abs(numerics.chisq_sf(x, 6) + numerics.chisq_cdf(x, 6) - 1.0) < 1e-12


@pytest.mark.parametrize("x, df", [(-1.0, 2), (np.inf, 2), (1.0, 0)])
def test_chisq_bad_arguments(x, df):
    with pytest.raises(InvalidInputError):
        numerics.chisq_sf(x, df)


def test_sample_cov_examples():
    assert numerics.sample_cov([1, 1, 1], [1, 1, 1]) == 0.0
    assert numerics.sample_cov([1, 2, 3], [1, 2, 3]) == pytest.approx(1.0)
    assert numerics.sample_cov([1, 2, 3], [1, 1, 0]) == pytest.approx(-0.5)


def test_sample_cov_needs_two_rows():
    with pytest.raises(InvalidInputError):
        numerics.sample_cov([1.0], [2.0])


def test_sample_cov_matrix_matches_numpy():
    rng = np.random.default_rng(11)
    data = rng.standard_normal((20, 4))
    assert np.allclose(numerics.sample_cov_matrix(data), np.cov(data, rowvar=False))
