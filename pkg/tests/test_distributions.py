import numpy as np
import pytest
from scipy import stats

from asymscore.distributions import Beta, EmpiricalCdf, Gamma, Normal, StudentT


def test_normal_is_parameterized_by_variance():
    d = Normal(1.0, 4.0)
    assert d.cdf(3.0) == pytest.approx(stats.norm.cdf(1.0))
    assert d.pdf(1.0) == pytest.approx(stats.norm.pdf(0.0) / 2.0)
    assert d.quantile(0.975) == pytest.approx(1.0 + 2.0 * stats.norm.ppf(0.975))


def test_analytic_cdf_quantile_round_trip():
    dists = [Normal(-0.3, 2.5), StudentT(1.0, 0.7, 6.0), Gamma(2.0, 1.5), Beta(2.0, 3.0)]
    rng = np.random.default_rng(0)
    for d in dists:
        for alpha in rng.uniform(0.01, 0.99, size=50):
            assert d.cdf(d.quantile(alpha)) == pytest.approx(alpha, abs=1e-9)


def test_labels():
    assert Normal(0.0, 1.0).label() == "N(0,1)"
    assert Normal(0.0, 16.0).label() == "N(0,16)"
    assert StudentT(0.0, 1.0, 5.0).label() == "t(0,1,5)"
    assert Gamma(2.0, 1.0).label() == "Ga(2,1)"
    assert Beta(1.0, 2.0).label() == "Be(1,2)"
    assert EmpiricalCdf([1.0, 2.0]).label() == "ecdf(n=2)"


@pytest.mark.parametrize(
    "build",
    [
        lambda: Normal(0.0, 0.0),
        lambda: Normal(0.0, -1.0),
        lambda: StudentT(0.0, -1.0, 5.0),
        lambda: StudentT(0.0, 1.0, 0.0),
        lambda: Gamma(0.0, 1.0),
        lambda: Gamma(1.0, -2.0),
        lambda: Beta(0.0, 1.0),
        lambda: Beta(1.0, 0.0),
    ],
)
def test_invalid_parameters_raise(build):
    with pytest.raises(ValueError):
        build()


def test_quantile_rejects_boundary_alpha():
    d = Normal(0.0, 1.0)
    for alpha in (0.0, 1.0, -0.1, 1.1):
        with pytest.raises(ValueError):
            d.quantile(alpha)
    with pytest.raises(ValueError):
        EmpiricalCdf([1.0, 2.0]).quantile(0.0)


def test_cdf_rejects_non_finite_input():
    with pytest.raises(ValueError):
        Normal(0.0, 1.0).cdf(np.inf)
    with pytest.raises(ValueError):
        EmpiricalCdf([1.0]).cdf(np.nan)


def test_sampling_is_seed_deterministic():
    d = Gamma(2.0, 1.0)
    a = d.sample(10, 123)
    b = d.sample(10, 123)
    np.testing.assert_array_equal(a, b)
    c = d.sample(10, np.random.default_rng(123))
    np.testing.assert_array_equal(a, c)
    assert not np.array_equal(a, d.sample(10, 124))


def test_sample_matches_distribution_moments():
    d = Normal(2.0, 9.0)
    x = d.sample(200_000, 7)
    assert x.mean() == pytest.approx(2.0, abs=0.05)
    assert x.var() == pytest.approx(9.0, rel=0.03)


def test_empirical_cdf_step_values():
    e = EmpiricalCdf([3.0, 1.0, 2.0])
    assert e.cdf(0.5) == 0.0
    assert e.cdf(1.0) == pytest.approx(1.0 / 3.0)
    assert e.cdf(1.5) == pytest.approx(1.0 / 3.0)
    assert e.cdf(2.5) == pytest.approx(2.0 / 3.0)
    assert e.cdf(3.0) == 1.0
    assert e.cdf(99.0) == 1.0
    np.testing.assert_allclose(e.cdf([0.0, 2.0]), [0.0, 2.0 / 3.0])


def test_empirical_quantile_is_order_statistic():
    draws = np.array([5.0, 1.0, 4.0, 2.0, 3.0])
    e = EmpiricalCdf(draws)
    s = np.sort(draws)
    # quantile(k/n) must be the k-th order statistic, no interpolation
    for k in range(1, 5):
        assert e.quantile(k / 5.0) == s[k - 1]
    assert e.quantile(0.41) == s[2]
    assert e.quantile(1e-9) == s[0]
    assert e.quantile(1.0 - 1e-9) == s[4]


def test_empirical_quantile_inverts_cdf():
    rng = np.random.default_rng(42)
    e = EmpiricalCdf(rng.standard_normal(40))
    for alpha in rng.uniform(0.01, 0.99, size=100):
        q = e.quantile(alpha)
        assert e.cdf(q) >= alpha
        # the next smaller support point has cdf below alpha
        below = e.draws[e.draws < q]
        if below.size:
            assert e.cdf(below.max()) < alpha


def test_empirical_pdf_not_available():
    with pytest.raises(NotImplementedError):
        EmpiricalCdf([1.0]).pdf(0.5)


def test_empirical_validation():
    with pytest.raises(ValueError):
        EmpiricalCdf([])
    with pytest.raises(ValueError):
        EmpiricalCdf([1.0, np.nan])
    with pytest.raises(ValueError):
        EmpiricalCdf([[1.0, 2.0]])


def test_empirical_sample_resamples_support():
    e = EmpiricalCdf([1.0, 2.0, 3.0])
    x = e.sample(500, 5)
    assert set(np.unique(x)) <= {1.0, 2.0, 3.0}
    np.testing.assert_array_equal(x, e.sample(500, 5))
