"""Two-cause exponential latent failure-time model.

Each unit carries independent latent lifetimes ``X1 ~ Exp(tau1)`` and
``X2 ~ Exp(tau2)`` (``tau`` are hazard *rates*). Only ``min(X1, X2)`` and the
index of the minimising cause are observed.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ValidationError


@dataclass(frozen=True)
class RatePair:
    """Hazard rates of cause 1 and cause 2, per unit time."""

    tau1: float
    tau2: float

    def __post_init__(self):
        for name in ("tau1", "tau2"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise ValidationError(f"{name} must be a positive finite rate, got {value!r}")

    def rate(self, cause: int) -> float:
        if cause == 1:
            return self.tau1
        if cause == 2:
            return self.tau2
        raise DomainError(f"cause must be 1 or 2, got {cause!r}")

    def as_tuple(self) -> tuple[float, float]:
        return (self.tau1, self.tau2)


def _check_x(x):
    arr = np.asarray(x, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < 0):
        raise DomainError(f"lifetime argument must be >= 0, got {x!r}")
    return arr


def _out(arr):
    return float(arr) if arr.ndim == 0 else arr


def cdf(cause: int, x, rates: RatePair):
    """``1 - exp(-tau_j x)``, evaluated with ``expm1`` for small arguments."""
    arr = _check_x(x)
    return _out(-np.expm1(-rates.rate(cause) * arr))


def survival(cause: int, x, rates: RatePair):
    arr = _check_x(x)
    return _out(np.exp(-rates.rate(cause) * arr))


def pdf(cause: int, x, rates: RatePair):
    tau = rates.rate(cause)
    arr = _check_x(x)
    return _out(tau * np.exp(-tau * arr))


def hazard(cause: int, x, rates: RatePair):
    """Constant hazard ``tau_j`` (broadcast to the shape of ``x``)."""
    arr = _check_x(x)
    return _out(np.full_like(arr, rates.rate(cause), dtype=float))


def min_law(rates: RatePair) -> tuple[float, float]:
    """Law of the observed minimum.

    Returns
    -------
    total_rate : float
        ``tau1 + tau2``; the minimum is ``Exp(total_rate)``.
    cause1_prob : float
        ``tau1 / (tau1 + tau2)``, the probability that cause 1 is the
        minimiser, independent of the minimum itself.
    """
    total = rates.tau1 + rates.tau2
    return total, rates.tau1 / total
