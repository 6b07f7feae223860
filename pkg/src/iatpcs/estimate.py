"""Maximum-likelihood estimation and asymptotic intervals.

Under the exponential model the log-likelihood depends on the data only
through ``(D1, D2, A)``::

    l(tau1, tau2) = D1 log tau1 + D2 log tau2 - (tau1 + tau2) A

so the MLEs are ``D_j / A`` and the observed information is diagonal with
entries ``D_j / tau_j**2``.

Two versions of the total-time-on-test statistic ``A`` are available:

``"paper"``
    ``sum((r_i + 1) x_i) + T*``. The terminal term is added once,
    whatever the number of units withdrawn at termination.
``"corrected"``
    ``sum((r_i + 1) x_i) + r_star * T*``, the exponent actually carried by
    the survival factor of the ``r_star`` units censored at ``T*``.
"""

import math
from dataclasses import dataclass
from typing import Literal

from .censoring import IatSample
from .errors import DomainError, NonexistenceError

AMode = Literal["paper", "corrected"]
A_MODES = ("paper", "corrected")


@dataclass(frozen=True)
class MleResult:
    tau1_hat: float
    tau2_hat: float
    a_stat: float
    var1: float
    var2: float
    d1: int
    d2: int


@dataclass(frozen=True)
class IntervalEstimate:
    lower: float
    upper: float
    level: float

    @property
    def length(self) -> float:
        return self.upper - self.lower

    def __contains__(self, value: float) -> bool:
        return self.lower <= value <= self.upper


def stat_a(sample: IatSample, mode: AMode = "paper") -> float:
    """Total time on test ``A`` built from the effective removals."""
    weighted = math.fsum(((sample.effective_removals + 1) * sample.times).tolist())
    if mode == "paper":
        return weighted + sample.t_star
    if mode == "corrected":
        return weighted + sample.r_star * sample.t_star
    raise DomainError(f"unknown A mode {mode!r}; expected one of {A_MODES}")


def log_likelihood_stats(tau1: float, tau2: float, d1: int, d2: int, a_stat: float) -> float:
    if tau1 <= 0 or tau2 <= 0:
        raise DomainError(f"rates must be positive, got ({tau1}, {tau2})")
    return d1 * math.log(tau1) + d2 * math.log(tau2) - (tau1 + tau2) * a_stat


def log_likelihood(tau1: float, tau2: float, sample: IatSample, mode: AMode = "paper") -> float:
    return log_likelihood_stats(tau1, tau2, sample.d1, sample.d2, stat_a(sample, mode))


def score(tau1: float, tau2: float, d1: int, d2: int, a_stat: float) -> tuple[float, float]:
    """Gradient of the log-likelihood."""
    return d1 / tau1 - a_stat, d2 / tau2 - a_stat


def hessian(tau1: float, tau2: float, d1: int, d2: int) -> tuple[tuple[float, float], tuple[float, float]]:
    return ((-d1 / tau1**2, 0.0), (0.0, -d2 / tau2**2))


def mle_stats(d1: int, d2: int, a_stat: float) -> MleResult:
    for j, dj in ((1, d1), (2, d2)):
        if dj <= 0:
            raise NonexistenceError(f"MLE for τ{j} does not exist: no failures due to cause {j}")
    if a_stat <= 0:
        raise NonexistenceError(f"MLE does not exist: A must be positive, got {a_stat}")
    t1 = d1 / a_stat
    t2 = d2 / a_stat
    return MleResult(t1, t2, a_stat, t1 * t1 / d1, t2 * t2 / d2, d1, d2)


def mle(sample: IatSample, mode: AMode = "paper") -> MleResult:
    """Closed-form MLEs ``D_j / A`` with inverse-observed-information variances.

    Raises
    ------
    NonexistenceError
        If either cause has no observed failure.
    """
    return mle_stats(sample.d1, sample.d2, stat_a(sample, mode))


def asymptotic_ci(result: MleResult, gamma: float = 0.05) -> tuple[IntervalEstimate, IntervalEstimate]:
    """Wald intervals ``tau_hat -+ z_{gamma/2} sd``, lower bounds clamped at 0."""
    if not (0 < gamma < 1):
        raise DomainError(f"gamma must lie in (0, 1), got {gamma}")
    z = normal_quantile(1 - gamma / 2)
    out = []
    for est, var in ((result.tau1_hat, result.var1), (result.tau2_hat, result.var2)):
        half = z * math.sqrt(var)
        out.append(IntervalEstimate(max(est - half, 0.0), est + half, 1 - gamma))
    return out[0], out[1]


# Wichura (1988), algorithm AS 241, PPND16.
_A = (
    3.3871328727963666080e0, 1.3314166789178437745e2, 1.9715909503065514427e3,
    1.3731693765509461125e4, 4.5921953931549871457e4, 6.7265770927008700853e4,
    3.3430575583588128105e4, 2.5090809287301226727e3,
)
_B = (
    1.0, 4.2313330701600911252e1, 6.8718700749205790830e2, 5.3941960214247511077e3,
    2.1213794301586595867e4, 3.9307895800092710610e4, 2.8729085735721942674e4,
    5.2264952788528545610e3,
)
_C = (
    1.42343711074968357734e0, 4.63033784615654529590e0, 5.76949722146069140550e0,
    3.64784832476320460504e0, 1.27045825245236838258e0, 2.41780725177450611770e-1,
    2.27238449892691845833e-2, 7.74545014278341407640e-4,
)
_D = (
    1.0, 2.05319162663775882187e0, 1.67638483018380384940e0, 6.89767334985100004550e-1,
    1.48103976427480074590e-1, 1.51986665636164571966e-2, 5.47593808499534494600e-4,
    1.05075007164441684324e-9,
)
_E = (
    6.65790464350110377720e0, 5.46378491116411436990e0, 1.78482653991729133580e0,
    2.96560571828504891230e-1, 2.65321895265761230930e-2, 1.24266094738807843860e-3,
    2.71155556874348757815e-5, 2.01033439929228813265e-7,
)
_F = (
    1.0, 5.99832206555887937690e-1, 1.36929880922735805310e-1, 1.48753612908506148525e-2,
    7.86869131145613259100e-4, 1.84631831751005468180e-5, 1.42151175831644588870e-7,
    2.04426310338993978564e-15,
)


def _poly(coef, x):
    acc = 0.0
    for c in reversed(coef):
        acc = acc * x + c
    return acc


def normal_quantile(p: float) -> float:
    """Standard normal quantile ``Phi^{-1}(p)`` (AS 241, ~1e-16 relative)."""
    if not (0.0 < p < 1.0):
        raise DomainError(f"p must lie in (0, 1), got {p}")
    q = p - 0.5
    if abs(q) <= 0.425:
        r = 0.180625 - q * q
        return q * _poly(_A, r) / _poly(_B, r)
    r = p if q < 0 else 1.0 - p
    r = math.sqrt(-math.log(r))
    if r <= 5.0:
        r -= 1.6
        val = _poly(_C, r) / _poly(_D, r)
    else:
        r -= 5.0
        val = _poly(_E, r) / _poly(_F, r)
    return -val if q < 0 else val
