import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import digamma, gammaln, polygamma

from iatpcs.bayes import (
    STUDY_LOSSES,
    PRIOR_0,
    PRIOR_I,
    GammaPrior,
    Loss,
    PosteriorParams,
    bayes_estimate,
    credible_intervals,
    estimate_gelf,
    estimate_linex,
    estimate_self,
    hpd,
    hpd_window,
    log_gamma,
    posterior,
    posterior_stats,
    sample_gamma,
    sample_posterior,
)
from iatpcs.errors import DomainError, NonexistenceError, ValidationError
from iatpcs.estimate import mle

from oracles import posterior_expectation

# High-precision references (mpmath, 30 digits) for Gamma(5, 15.5).
G5 = PosteriorParams(5.0, 15.5, 5.0, 15.5)
SELF_REF = 0.32258064516129032
LINEX_POS_REF = 0.317486983145803012   # p = 0.5
LINEX_NEG_REF = 0.323102058144646778   # p = -0.05
GELF_POS_REF = 0.274664341026213370    # q = 0.5
GEOMETRIC_REF = 0.290915522252701609
MODE_REF = 0.258064516129032258
EXP2_MEDIAN = 0.346573590279972655


def test_posterior_examples(toy_sample):
    assert posterior(toy_sample, PRIOR_0) == PosteriorParams(2.0, 10.5, 1.0, 10.5)
    assert posterior(toy_sample, PRIOR_I) == PosteriorParams(5.0, 15.5, 5.0, 15.5)
    assert posterior(toy_sample, PRIOR_I, "corrected").rate1 == 19.0


def test_improper_posterior_names_cause():
    with pytest.raises(NonexistenceError, match="τ1"):
        posterior_stats(0, 2, 3.0, PRIOR_0)
    with pytest.raises(NonexistenceError, match="τ2"):
        posterior_stats(2, 0, 3.0, PRIOR_0)
    # an informative prior rescues a cause with no failures
    assert posterior_stats(0, 2, 3.0, PRIOR_I).shape1 == 3.0


def test_prior_and_loss_validation():
    with pytest.raises(ValidationError):
        GammaPrior(-1, 0, 0, 0)
    with pytest.raises(ValidationError):
        Loss("LINEX", 0.0)
    with pytest.raises(ValidationError):
        Loss("quadratic")
    assert Loss("linex", -0.05).label == "LINEX(p=-0.05)"
    assert GammaPrior(1, 2, 3, 4).label == "Gamma(1,2;3,4)"


def test_point_estimate_examples():
    assert estimate_self(G5) == (SELF_REF, SELF_REF)
    assert estimate_self(PosteriorParams(1, 1, 1, 1)) == (1.0, 1.0)
    assert estimate_linex(G5, 0.5)[0] == pytest.approx(LINEX_POS_REF, rel=1e-14)
    assert estimate_linex(G5, -0.05)[0] == pytest.approx(LINEX_NEG_REF, rel=1e-13)
    assert estimate_gelf(G5, 0.5)[0] == pytest.approx(GELF_POS_REF, rel=1e-13)


def test_existence_conditions():
    post = PosteriorParams(2.0, 3.0, 0.4, 10.0)
    with pytest.raises(NonexistenceError, match="p > -rate"):
        estimate_linex(post, -3.0)
    with pytest.raises(NonexistenceError, match="q < shape"):
        estimate_gelf(post, 0.5)
    with pytest.raises(DomainError):
        estimate_gelf(post, 0.0)
    with pytest.raises(DomainError):
        estimate_linex(post, 0.0)


def test_prior0_self_equals_mle(toy_sample):
    for mode in ("paper", "corrected"):
        fit = mle(toy_sample, mode)
        assert estimate_self(posterior(toy_sample, PRIOR_0, mode)) == (fit.tau1_hat, fit.tau2_hat)


def test_consistency_chain():
    rng = np.random.default_rng(5)
    for _ in range(200):
        s, r = rng.uniform(0.2, 60), rng.uniform(0.1, 80)
        post = PosteriorParams(s, r, s, r)
        self_est = estimate_self(post)[0]
        assert estimate_gelf(post, -1.0)[0] == self_est
        # the leading term of linex(p) - self is -p shape / (2 rate**2)
        assert abs(estimate_linex(post, 1e-6)[0] - self_est) <= 1e-6 * s / r**2
        geo = math.exp(float(digamma(s)) - math.log(r))
        # next-order term in q is q * trigamma(shape) / 2
        tol = 1e-5 + 1e-6 * float(polygamma(1, s))
        assert estimate_gelf(post, 1e-6)[0] == pytest.approx(geo, rel=tol)
        qs = [-3.0, -1.0, -0.05, 0.05, 0.5, min(0.9 * s, 0.99 * s)]
        vals = [estimate_gelf(post, q)[0] for q in sorted(set(qs)) if q < s]
        assert all(a >= b for a, b in zip(vals, vals[1:]))
    assert estimate_gelf(G5, 1e-6)[0] == pytest.approx(GEOMETRIC_REF, rel=1e-5)
    assert abs(estimate_linex(G5, 1e-6)[0] - SELF_REF) < 1e-6


@pytest.mark.parametrize("loss", STUDY_LOSSES, ids=lambda l: l.label)
def test_closed_forms_match_quadrature(loss):
    rng = np.random.default_rng(17)
    for _ in range(60):
        s, r = rng.uniform(1.0, 40.0), rng.uniform(0.5, 60.0)
        est = bayes_estimate(PosteriorParams(s, r, s, r), loss)[0]
        if loss.kind == "SELF":
            oracle = posterior_expectation(s, r, "mean")
        elif loss.kind == "LINEX":
            oracle = -math.log(posterior_expectation(s, r, "linex", loss.param)) / loss.param
        else:
            oracle = math.exp(-math.log(posterior_expectation(s, r, "gelf", loss.param)) / loss.param)
        assert est == pytest.approx(oracle, rel=1e-6)


@settings(max_examples=40, deadline=None)
@given(st.floats(1.01, 200.0), st.floats(0.01, 100.0))
def test_log_posterior_is_concave(shape, rate):
    # d2/dtau2 of (shape - 1) log tau - rate tau
    for tau in np.logspace(-4, 4, 30):
        h = 1e-4 * tau
        f = lambda t: (shape - 1) * math.log(t) - rate * t
        second = (f(tau + h) - 2 * f(tau) + f(tau - h)) / h**2
        assert -(shape - 1) / tau**2 < 0
        assert second < 0 or abs(second) < 1e-3 * (shape - 1) / tau**2


def test_log_gamma_examples():
    assert log_gamma(1.0) == 0.0 and log_gamma(2.0) == 0.0
    assert log_gamma(5.0) == pytest.approx(3.17805383034794562, rel=1e-14)
    assert log_gamma(4.5) == pytest.approx(2.45373657084244222, rel=1e-14)
    for x in (0.0, -1.0):
        with pytest.raises(DomainError):
            log_gamma(x)


def test_log_gamma_accuracy_on_grid():
    grid = [k / 2 for k in range(1, 61)]
    for x in grid:
        ref = float(gammaln(x))
        assert abs(log_gamma(x) - ref) <= 1e-10 * max(1.0, abs(ref))
    for x in np.linspace(0.01, 200, 1000):
        ref = float(gammaln(x))
        assert abs(log_gamma(float(x)) - ref) <= 1e-10 * max(1.0, abs(ref))


def test_hpd_tie_case():
    ci = hpd(np.arange(1, 101, dtype=float), 0.05)
    assert hpd_window(100, 0.05) == 95
    assert (ci.lower, ci.upper) == (1.0, 96.0)


def test_hpd_errors():
    with pytest.raises(ValidationError):
        hpd([1.0], 0.05)
    with pytest.raises(ValidationError):
        hpd([1.0, 2.0, 3.0], 0.9)
    with pytest.raises(DomainError):
        hpd([1.0, 2.0, 3.0], 1.0)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-1e6, 1e6), min_size=5, max_size=200), st.sampled_from([0.05, 0.1, 0.5]))
def test_hpd_is_minimal(draws, gamma):
    s = np.sort(np.array(draws))
    w = hpd_window(s.size, gamma)
    if w < 1 or w >= s.size:
        return
    ci = hpd(draws, gamma)
    widths = s[w:] - s[: s.size - w]
    assert ci.upper - ci.lower == widths.min()
    assert ci.lower == s[int(np.argmin(widths))]


def test_hpd_gamma_posterior(rng, backend):
    draws = sample_gamma(5.0, 15.5, 100_000, rng, backend=backend)
    ci = hpd(draws, 0.05, backend=backend)
    assert MODE_REF in ci
    lo, hi = np.quantile(draws, [0.025, 0.975])
    assert ci.length <= hi - lo


@pytest.mark.parametrize("shape,rate", [(0.5, 1.0), (1.0, 1.0), (5.0, 15.5)])
def test_sampler_moments(shape, rate, backend):
    n = 100_000
    x = sample_gamma(shape, rate, n, np.random.default_rng(99), backend=backend)
    mean, var = shape / rate, shape / rate**2
    assert abs(x.mean() - mean) <= 4 * math.sqrt(var / n)
    # variance of the sample variance from the fourth central moment 3 s (s + 2) / rate**4
    mu4 = 3 * shape * (shape + 2) / rate**4
    assert abs(x.var(ddof=1) - var) <= 4 * math.sqrt((mu4 - var**2) / n)
    assert (x > 0).all()


def test_sampler_exponential_median(backend):
    x = sample_gamma(1.0, 2.0, 100_000, np.random.default_rng(3), backend=backend)
    # the sample median of Exp(2) has standard error 1 / (2 f(m) sqrt(n)) with f(m) = 1
    assert abs(np.median(x) - EXP2_MEDIAN) <= 4 / (2 * math.sqrt(100_000))


def test_sampler_determinism(backend):
    a = sample_posterior(G5, 1000, np.random.default_rng(8), backend=backend)
    b = sample_posterior(G5, 1000, np.random.default_rng(8), backend=backend)
    assert all(np.array_equal(x, y) for x, y in zip(a, b))
    with pytest.raises(ValidationError):
        sample_posterior(G5, 0, np.random.default_rng(8))
    with pytest.raises(DomainError):
        sample_gamma(0.0, 1.0, 10, np.random.default_rng(8))


def test_credible_intervals_contain_posterior_mean(rng):
    ci1, ci2 = credible_intervals(PosteriorParams(20, 40, 30, 40), 0.05, 5000, rng)
    assert 0.5 in ci1 and 0.75 in ci2
    assert ci1.level == 0.95
