"""Improved adaptive type-II progressive censoring (IAT-II PCS).

An experiment puts ``n`` units on test with a planned removal vector
``R_1..R_m`` and two time thresholds ``t1 < t2``:

* at the i-th failure, ``R_i`` survivors are withdrawn, but only while the
  failure happens strictly before ``t1``;
* from ``t1`` on no intermediate removals take place;
* the test stops at ``min(X_{m:m:n}, t2)`` and every unit still running is
  withdrawn (``r_star`` of them).

Three terminal cases result: the m-th failure before ``t1`` (Case I), in
``[t1, t2)`` (Case II), or not before ``t2`` (Case III).

``D`` is the number of failures actually recorded: ``m`` in Cases I/II and
``k2`` in Case III.
"""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import _kernels
from .errors import ValidationError
from .model import RatePair, min_law


class CaseTag(str, Enum):
    I = "I"
    II = "II"
    III = "III"


@dataclass(frozen=True)
class Case:
    """Terminal configuration of a realized experiment.

    ``k1`` counts failures strictly before ``t1`` and ``k2`` failures
    strictly before ``t2`` (both among the first ``m``).
    """

    tag: CaseTag
    k1: int
    k2: int


@dataclass(frozen=True)
class CensoringPlan:
    n: int
    m: int
    removals: tuple[int, ...]
    t1: float
    t2: float

    def __post_init__(self):
        object.__setattr__(self, "removals", tuple(int(r) for r in self.removals))
        if self.n < 1 or self.m < 1 or self.m > self.n:
            raise ValidationError(f"need 1 <= m <= n, got n={self.n}, m={self.m}")
        if len(self.removals) != self.m:
            raise ValidationError(
                f"removal vector must have m={self.m} entries, got {len(self.removals)}"
            )
        if any(r < 0 for r in self.removals):
            raise ValidationError("removals must be nonnegative")
        if sum(self.removals) != self.n - self.m:
            raise ValidationError(
                f"removals must sum to n - m = {self.n - self.m}, got {sum(self.removals)}"
            )
        if not (0 < self.t1 < self.t2):
            raise ValidationError(f"need 0 < t1 < t2, got t1={self.t1}, t2={self.t2}")

    @classmethod
    def from_scheme(cls, kind: str, n: int, m: int, t1: float, t2: float) -> "CensoringPlan":
        return cls(n, m, scheme(kind, n, m), t1, t2)


def scheme(kind: str, n: int, m: int) -> tuple[int, ...]:
    """Standard removal schemes.

    ``I``: nothing removed until the m-th failure, which removes ``n - m``.
    ``II``: one unit at each of the first ``m - 1`` failures, ``n - 2m + 1`` at the last.
    ``III``: ``(n - m) / m`` at every failure.
    """
    kind = str(kind).upper()
    if not (1 <= m <= n):
        raise ValidationError(f"need 1 <= m <= n, got n={n}, m={m}")
    if kind == "I":
        return (0,) * (m - 1) + (n - m,)
    if kind == "II":
        if n < 2 * m - 1:
            raise ValidationError(f"scheme II requires n >= 2m - 1 (n={n}, m={m})")
        return (1,) * (m - 1) + (n - 2 * m + 1,)
    if kind == "III":
        if (n - m) % m != 0:
            raise ValidationError(f"scheme III requires m to divide n - m (n={n}, m={m})")
        return ((n - m) // m,) * m
    raise ValidationError(f"unknown scheme {kind!r}; expected I, II or III")


def classify(times, m: int, t1: float, t2: float) -> Case:
    times = np.asarray(times, dtype=float)[:m]
    if times.size > 1 and np.any(np.diff(times) <= 0):
        raise ValidationError("failure times must be strictly increasing")
    k1 = int(np.count_nonzero(times < t1))
    k2 = int(np.count_nonzero(times < t2))
    if times.size == m and times[-1] < t1:
        tag = CaseTag.I
    elif times.size == m and times[-1] < t2:
        tag = CaseTag.II
    else:
        tag = CaseTag.III
    return Case(tag, k1, k2)


def _frozen(arr, dtype):
    out = np.array(arr, dtype=dtype)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class IatSample:
    """One realized IAT-II PCS competing-risks dataset.

    Attributes
    ----------
    times : ndarray
        Observed failure times, strictly increasing (length ``D``).
    delta : ndarray
        1 where the failure was due to cause 1, 0 for cause 2.
    effective_removals : ndarray
        Units actually withdrawn at each failure.
    r_star, t_star
        Units withdrawn at termination and the termination time.
    """

    plan: CensoringPlan
    times: np.ndarray
    delta: np.ndarray
    effective_removals: np.ndarray
    case: Case
    r_star: int
    t_star: float
    _d1: int = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "times", _frozen(self.times, np.float64))
        object.__setattr__(self, "delta", _frozen(self.delta, np.int64))
        object.__setattr__(self, "effective_removals", _frozen(self.effective_removals, np.int64))
        object.__setattr__(self, "r_star", int(self.r_star))
        object.__setattr__(self, "t_star", float(self.t_star))
        object.__setattr__(self, "_d1", int(self.delta.sum()))

    @property
    def n(self) -> int:
        return self.plan.n

    @property
    def d(self) -> int:
        return int(self.times.size)

    @property
    def d1(self) -> int:
        return self._d1

    @property
    def d2(self) -> int:
        return self.d - self._d1

    @property
    def causes(self) -> np.ndarray:
        """Causes coded 1/2 as in data files."""
        return np.where(self.delta == 1, 1, 2)

    def check(self) -> None:
        """Raise :class:`ValidationError` unless every sample invariant holds."""
        p = self.plan
        if self.times.size != self.delta.size or self.times.size != self.effective_removals.size:
            raise ValidationError("times, delta and removals differ in length")
        if self.d + int(self.effective_removals.sum()) + self.r_star != p.n:
            raise ValidationError("unit accounting D + sum(r) + r_star != n")
        if self.d > 1 and np.any(np.diff(self.times) <= 0):
            raise ValidationError("failure times must be strictly increasing")
        if np.any(self.times >= p.t2):
            raise ValidationError("failure recorded at or after t2")
        planned = np.asarray(p.removals[: self.d])
        before = self.times < p.t1
        if np.any(self.effective_removals[~before] != 0):
            raise ValidationError("removal executed at a failure past t1")
        if np.any(self.effective_removals[before] > planned[before]):
            raise ValidationError("effective removal exceeds the planned one")
        if self.case != classify(self.times, p.m, p.t1, p.t2):
            raise ValidationError("case label inconsistent with the failure times")
        expected_t_star = self.times[-1] if self.d == p.m else p.t2
        if self.t_star != expected_t_star:
            raise ValidationError("t_star must equal min(X_m, t2)")
        if self.case.tag is CaseTag.I and (self.r_star != 0 or self.d != p.m):
            raise ValidationError("Case I requires D = m and r_star = 0")


def generate(plan: CensoringPlan, rates: RatePair, rng: np.random.Generator, backend=None) -> IatSample:
    """Draw one IAT-II PCS sample by sequential exponential spacings.

    With ``a`` units at risk the next failure arrives after an
    ``Exp(a * (tau1 + tau2))`` gap and is due to cause 1 with probability
    ``tau1 / (tau1 + tau2)``, independently of the time. Exactly ``m``
    standard exponentials and ``m`` uniforms are consumed from ``rng``.
    """
    total, p1 = min_law(rates)
    expo = rng.standard_exponential(plan.m)
    unif = rng.random(plan.m)
    times, delta, eff, r_star, t_star = _kernels.censored_path(
        plan.n, np.asarray(plan.removals), plan.t1, plan.t2, total, p1, expo, unif, backend=backend
    )
    return IatSample(
        plan=plan,
        times=times,
        delta=delta,
        effective_removals=eff,
        case=classify(times, plan.m, plan.t1, plan.t2),
        r_star=r_star,
        t_star=t_star,
    )


def replay(times, causes, plan: CensoringPlan) -> IatSample:
    """Apply the IAT-II rules of ``plan`` to an already observed failure record.

    ``times`` must be increasing; ``causes`` are coded 1/2. Failures at or
    after ``t2`` and beyond the m-th are discarded, planned removals are
    executed only before ``t1`` and truncated to the units available.
    """
    times = np.asarray(times, dtype=float)
    causes = np.asarray(causes, dtype=int)
    if times.shape != causes.shape:
        raise ValidationError("times and causes differ in length")
    if times.size > 1 and np.any(np.diff(times) <= 0):
        raise ValidationError("failure times must be strictly increasing")
    if np.any(times <= 0):
        raise ValidationError("failure times must be positive")
    if not np.all(np.isin(causes, (1, 2))):
        raise ValidationError("causes must be coded 1 or 2")
    if times.size > plan.n:
        raise ValidationError(f"record has {times.size} failures but only n={plan.n} units")
    keep = min(plan.m, int(np.count_nonzero(times < plan.t2)))
    kept = times[:keep]
    eff = np.zeros(keep, dtype=np.int64)
    at_risk = plan.n
    for i in range(keep):
        if at_risk < 1:
            raise ValidationError(f"no units left on test at failure {i + 1}")
        if kept[i] < plan.t1:
            eff[i] = min(plan.removals[i], at_risk - 1)
        at_risk -= 1 + eff[i]
    t_star = kept[-1] if keep == plan.m else plan.t2
    return IatSample(
        plan=plan,
        times=kept,
        delta=(causes[:keep] == 1).astype(np.int64),
        effective_removals=eff,
        case=classify(kept, plan.m, plan.t1, plan.t2),
        r_star=at_risk,
        t_star=t_star,
    )
