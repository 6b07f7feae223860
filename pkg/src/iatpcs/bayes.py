"""Conjugate Bayesian inference for the two exponential rates.

With independent ``Gamma(a, b)`` and ``Gamma(c, d)`` priors (shape, rate)
the marginal posteriors are again gamma::

    tau1 | data ~ Gamma(a + D1, b + A)
    tau2 | data ~ Gamma(c + D2, d + A)

and are independent, so point estimates under squared-error, LINEX and
general entropy loss are available in closed form and credible intervals
only need direct gamma draws.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .censoring import IatSample
from .errors import DomainError, NonexistenceError, ValidationError
from .estimate import AMode, IntervalEstimate, stat_a


@dataclass(frozen=True)
class GammaPrior:
    """Shape/rate hyperparameters: ``(a, b)`` for tau1 and ``(c, d)`` for tau2.

    All zeros is the improper non-informative prior.
    """

    a: float = 0.0
    b: float = 0.0
    c: float = 0.0
    d: float = 0.0
    label: str = ""

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise ValidationError(f"prior hyperparameter {name} must be >= 0, got {value!r}")
        if not self.label:
            object.__setattr__(self, "label", f"Gamma({self.a:g},{self.b:g};{self.c:g},{self.d:g})")


PRIOR_0 = GammaPrior(0, 0, 0, 0, "Prior 0")
PRIOR_I = GammaPrior(3, 5, 4, 5, "Prior I")
PRIOR_II = GammaPrior(2, 2, 3, 3, "Prior II")


@dataclass(frozen=True)
class Loss:
    """Loss function: ``SELF``, ``LINEX`` (parameter ``p``) or ``GELF`` (``q``)."""

    kind: str
    param: float = 0.0

    def __post_init__(self):
        kind = self.kind.upper()
        object.__setattr__(self, "kind", kind)
        if kind not in ("SELF", "LINEX", "GELF"):
            raise ValidationError(f"unknown loss {self.kind!r}")
        if kind != "SELF" and self.param == 0:
            raise ValidationError(f"{kind} parameter must be nonzero")

    @property
    def label(self) -> str:
        if self.kind == "SELF":
            return "SELF"
        name = "p" if self.kind == "LINEX" else "q"
        return f"{self.kind}({name}={self.param:g})"


SELF = Loss("SELF")
STUDY_LOSSES = (SELF, Loss("LINEX", -0.05), Loss("LINEX", 0.5), Loss("GELF", -0.05), Loss("GELF", 0.5))


@dataclass(frozen=True)
class PosteriorParams:
    shape1: float
    rate1: float
    shape2: float
    rate2: float

    def pairs(self):
        return ((self.shape1, self.rate1), (self.shape2, self.rate2))


def posterior_stats(d1: int, d2: int, a_stat: float, prior: GammaPrior = PRIOR_0) -> PosteriorParams:
    post = PosteriorParams(prior.a + d1, prior.b + a_stat, prior.c + d2, prior.d + a_stat)
    for j, (shape, rate) in enumerate(post.pairs(), start=1):
        if shape <= 0 or rate <= 0:
            raise NonexistenceError(
                f"posterior of τ{j} is improper (shape={shape:g}, rate={rate:g}); "
                f"cause {j} needs at least one failure under this prior"
            )
    return post


def posterior(sample: IatSample, prior: GammaPrior = PRIOR_0, mode: AMode = "paper") -> PosteriorParams:
    return posterior_stats(sample.d1, sample.d2, stat_a(sample, mode), prior)


def estimate_self(post: PosteriorParams) -> tuple[float, float]:
    """Posterior means."""
    return post.shape1 / post.rate1, post.shape2 / post.rate2


def _linex(shape, rate, p):
    if p <= -rate:
        raise NonexistenceError(f"LINEX estimate needs p > -rate ({-rate:g}), got p={p:g}")
    # -(shape/p) log(rate/(rate+p)) written to stay accurate as p -> 0
    return shape * math.log1p(p / rate) / p


def estimate_linex(post: PosteriorParams, p: float) -> tuple[float, float]:
    if p == 0:
        raise DomainError("LINEX parameter p must be nonzero")
    return tuple(_linex(s, r, p) for s, r in post.pairs())


def _log_gamma_ratio(shape, q):
    """``log(Gamma(shape - q) / Gamma(shape))``; exact product when ``-q`` is a positive integer."""
    if q < 0 and float(q).is_integer():
        return None
    return log_gamma(shape - q) - log_gamma(shape)


def _gelf(shape, rate, q):
    if q >= shape:
        raise NonexistenceError(f"GELF estimate needs q < shape ({shape:g}), got q={q:g}")
    log_ratio = _log_gamma_ratio(shape, q)
    if log_ratio is None:
        ratio = 1.0
        for i in range(int(-q)):
            ratio *= shape + i
        return ratio ** (-1.0 / q) / rate
    return math.exp(-log_ratio / q) / rate


def estimate_gelf(post: PosteriorParams, q: float) -> tuple[float, float]:
    """``E[tau^-q]^(-1/q) = (Gamma(s - q) / Gamma(s))^(-1/q) / rate`` per cause."""
    if q == 0:
        raise DomainError("GELF parameter q must be nonzero")
    return tuple(_gelf(s, r, q) for s, r in post.pairs())


def bayes_estimate(post: PosteriorParams, loss: Loss) -> tuple[float, float]:
    if loss.kind == "SELF":
        return estimate_self(post)
    if loss.kind == "LINEX":
        return estimate_linex(post, loss.param)
    return estimate_gelf(post, loss.param)


# Lanczos approximation, g = 7, nine terms.
_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2 * math.pi)


def log_gamma(x: float) -> float:
    """``log Gamma(x)`` for ``x > 0``."""
    if not x > 0:
        raise DomainError(f"log_gamma requires x > 0, got {x!r}")
    if x == 1.0 or x == 2.0:
        return 0.0
    if x < 0.5:
        return math.log(math.pi / math.sin(math.pi * x)) - log_gamma(1.0 - x)
    x -= 1.0
    acc = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        acc += _LANCZOS[i] / (x + i)
    t = x + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (x + 0.5) * math.log(t) - t + math.log(acc)


def sample_gamma(shape: float, rate: float, size: int, rng: np.random.Generator, backend=None) -> np.ndarray:
    """Gamma(shape, rate) draws by the Marsaglia-Tsang squeeze method.

    Shapes below one are drawn at ``shape + 1`` and scaled by ``U**(1/shape)``.
    Candidates are generated in batches: each pass draws one normal and one
    uniform per missing value, so the stream consumed depends only on the
    seed and not on the kernel backend.
    """
    if shape <= 0 or rate <= 0:
        raise DomainError(f"gamma shape and rate must be positive, got ({shape}, {rate})")
    boosted = shape < 1.0
    alpha = shape + 1.0 if boosted else shape
    d = alpha - 1.0 / 3.0
    c = 1.0 / math.sqrt(9.0 * d)
    out = np.empty(size, dtype=np.float64)
    filled = 0
    while filled < size:
        k = size - filled
        z = rng.standard_normal(k)
        u = rng.random(k)
        cand = _kernels.mt_candidates(d, c, z, u, backend=backend)
        cand = cand[~np.isnan(cand)]
        out[filled : filled + cand.size] = cand
        filled += cand.size
    if boosted:
        out *= rng.random(size) ** (1.0 / shape)
    return out / rate


def sample_posterior(post: PosteriorParams, n_draws: int, rng: np.random.Generator, backend=None):
    """Independent draws from both marginal posteriors (tau1 first, then tau2)."""
    if n_draws < 1:
        raise ValidationError(f"n_draws must be >= 1, got {n_draws}")
    return (
        sample_gamma(post.shape1, post.rate1, n_draws, rng, backend=backend),
        sample_gamma(post.shape2, post.rate2, n_draws, rng, backend=backend),
    )


def hpd_window(n: int, gamma: float) -> int:
    """Number of index steps spanned by the ``100(1 - gamma)%`` window."""
    return int(math.floor((1.0 - gamma) * n + 1e-9))


def hpd(draws, gamma: float = 0.05, backend=None) -> IntervalEstimate:
    """Shortest interval ``(s[j], s[j + w])`` over sorted draws, ``w = floor((1 - gamma) N)``.

    Ties go to the smallest ``j``.
    """
    if not (0 < gamma < 1):
        raise DomainError(f"gamma must lie in (0, 1), got {gamma}")
    s = np.sort(np.asarray(draws, dtype=np.float64))
    w = hpd_window(s.size, gamma)
    if s.size < 2 or w < 1 or w >= s.size:
        raise ValidationError(f"{s.size} draws are too few for a {100 * (1 - gamma):g}% window")
    j = _kernels.shortest_window(s, w, backend=backend)
    return IntervalEstimate(float(s[j]), float(s[j + w]), 1.0 - gamma)


def credible_intervals(post: PosteriorParams, gamma: float, n_draws: int, rng, backend=None):
    draws1, draws2 = sample_posterior(post, n_draws, rng, backend=backend)
    return hpd(draws1, gamma, backend=backend), hpd(draws2, gamma, backend=backend)
