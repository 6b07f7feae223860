"""Independent numerical oracles used by the tests (never by the package)."""

import math

import numpy as np
from scipy import integrate, optimize

from iatpcs.censoring import CensoringPlan, generate
from iatpcs.model import RatePair


def numerical_mle(loglik, start):
    """Maximise ``loglik(tau1, tau2)`` by Nelder-Mead on the log scale."""

    def neg(u):
        return -loglik(math.exp(u[0]), math.exp(u[1]))

    x0 = np.log(start)
    res = None
    for _ in range(2):  # restart from the previous optimum to shake off simplex collapse
        res = optimize.minimize(
            neg, x0, method="Nelder-Mead",
            options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 20_000},
        )
        x0 = res.x
    return math.exp(res.x[0]), math.exp(res.x[1])


def posterior_expectation(shape, rate, kind, param=0.0):
    """E[g(tau)] under Gamma(shape, rate) by adaptive quadrature.

    ``kind``: "mean" -> tau, "linex" -> exp(-p tau), "gelf" -> tau**(-q).
    The density is normalised numerically, so no gamma function is involved.
    Each integrand ``t**alpha exp(-beta t)`` is evaluated in log space and
    scaled by its own peak, and the range is split at the peak.
    """

    def log_integral(alpha, beta):
        peak = max(alpha, 0.0) / beta
        log_peak = alpha * math.log(peak) - beta * peak if peak > 0 else 0.0
        spread = (math.sqrt(alpha + 1.0) + 1.0) / beta
        upper = peak + 80.0 * spread

        def f(t):
            if t <= 0.0:
                return 0.0
            return math.exp(alpha * math.log(t) - beta * t - log_peak)

        total = 0.0
        for lo, hi in ((0.0, peak), (peak, peak + 8.0 * spread), (peak + 8.0 * spread, upper)):
            if hi > lo:
                val, _ = integrate.quad(f, lo, hi, epsabs=0.0, epsrel=1e-12, limit=500)
                total += val
        return math.log(total) + log_peak

    log_norm = log_integral(shape - 1.0, rate)
    if kind == "mean":
        return math.exp(log_integral(shape, rate) - log_norm)
    if kind == "linex":
        return math.exp(log_integral(shape - 1.0, rate + param) - log_norm)
    if kind == "gelf":
        return math.exp(log_integral(shape - 1.0 - param, rate) - log_norm)
    raise ValueError(kind)


def random_samples(count, seed, max_n=20):
    """Small random IAT-II samples with both causes observed."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        m = int(rng.integers(2, 11))
        n = int(rng.integers(m, max_n + 1))
        cuts = np.sort(rng.integers(0, n - m + 1, size=m - 1))
        removals = np.diff(np.concatenate(([0], cuts, [n - m])))
        t1 = float(rng.uniform(0.1, 2.0))
        t2 = t1 + float(rng.uniform(0.1, 2.0))
        rates = RatePair(float(rng.uniform(0.2, 3.0)), float(rng.uniform(0.2, 3.0)))
        s = generate(CensoringPlan(n, m, tuple(removals), t1, t2), rates, rng)
        if s.d1 > 0 and s.d2 > 0:
            out.append(s)
    return out
