"""Seeded Monte Carlo study of the point and interval estimators.

Replicate ``i`` draws from its own stream,
``SeedSequence(seed, spawn_key=(i, attempt))``, so results depend on the
seed and replicate index only: serial and parallel runs agree bit for bit.
A replicate where one cause has no failure is redrawn from the next
``attempt`` stream and counted in ``skipped``.
"""

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .bayes import (
    STUDY_LOSSES,
    PRIOR_0,
    PRIOR_I,
    GammaPrior,
    Loss,
    bayes_estimate,
    credible_intervals,
    posterior_stats,
)
from .censoring import CensoringPlan, generate
from .errors import ValidationError
from .estimate import A_MODES, asymptotic_ci, mle_stats, stat_a
from .model import RatePair

PARAMS = ("tau1", "tau2")


@dataclass(frozen=True)
class SimConfig:
    plan: CensoringPlan
    rates: RatePair
    reps: int = 10_000
    priors: tuple[GammaPrior, ...] = (PRIOR_0, PRIOR_I)
    losses: tuple[Loss, ...] = STUDY_LOSSES
    level: float = 0.95
    hpd_draws: int = 5000
    seed: int = 0
    a_mode: str = "paper"
    scheme: str = "custom"
    max_redraws: int = 10_000

    def __post_init__(self):
        object.__setattr__(self, "priors", tuple(self.priors))
        object.__setattr__(self, "losses", tuple(self.losses))
        if self.reps < 1:
            raise ValidationError(f"reps must be >= 1, got {self.reps}")
        if not (0 < self.level < 1):
            raise ValidationError(f"level must lie in (0, 1), got {self.level}")
        if self.hpd_draws < 2:
            raise ValidationError(f"hpd_draws must be >= 2, got {self.hpd_draws}")
        if self.seed < 0:
            raise ValidationError("seed must be a nonnegative integer")
        if self.a_mode not in A_MODES:
            raise ValidationError(f"a_mode must be one of {A_MODES}, got {self.a_mode!r}")
        labels = [p.label for p in self.priors]
        if len(set(labels)) != len(labels):
            raise ValidationError("prior labels must be unique")

    @property
    def gamma(self) -> float:
        return 1.0 - self.level

    def estimators(self) -> list[str]:
        return ["MLE"] + [f"{p.label}|{loss.label}" for p in self.priors for loss in self.losses]

    def interval_methods(self) -> list[str]:
        return ["ACI"] + [f"HPD[{p.label}]" for p in self.priors]


def _columns(cfg: SimConfig) -> list[str]:
    cols = [f"{e}:{par}" for e in cfg.estimators() for par in PARAMS]
    for method in cfg.interval_methods():
        for par in PARAMS:
            cols += [f"{method}:{par}:lower", f"{method}:{par}:upper"]
    return cols + ["redraws"]


def _stream(seed: int, index: int, attempt: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index, attempt))))


def replicate(cfg: SimConfig, index: int, backend=None) -> np.ndarray:
    """One row of the study: estimates, interval endpoints, redraw count."""
    for attempt in range(cfg.max_redraws + 1):
        rng = _stream(cfg.seed, index, attempt)
        sample = generate(cfg.plan, cfg.rates, rng, backend=backend)
        if sample.d1 > 0 and sample.d2 > 0:
            break
    else:
        raise ValidationError(
            f"replicate {index}: no sample with both causes observed in {cfg.max_redraws} redraws"
        )
    a = stat_a(sample, cfg.a_mode)
    fit = mle_stats(sample.d1, sample.d2, a)
    row = [fit.tau1_hat, fit.tau2_hat]
    posts = [posterior_stats(sample.d1, sample.d2, a, prior) for prior in cfg.priors]
    for post in posts:
        for loss in cfg.losses:
            row.extend(bayes_estimate(post, loss))
    for ci in asymptotic_ci(fit, cfg.gamma):
        row += [ci.lower, ci.upper]
    for post in posts:
        for ci in credible_intervals(post, cfg.gamma, cfg.hpd_draws, rng, backend=backend):
            row += [ci.lower, ci.upper]
    row.append(attempt)
    return np.array(row, dtype=np.float64)


def _run_block(cfg: SimConfig, start: int, stop: int, backend) -> np.ndarray:
    return np.vstack([replicate(cfg, i, backend) for i in range(start, stop)])


@dataclass(frozen=True)
class PointSummary:
    average: float
    bias: float
    mse: float
    mse_se: float


@dataclass(frozen=True)
class IntervalSummary:
    lower: float
    upper: float
    length: float
    length_se: float
    coverage: float


def _mean(x: np.ndarray) -> float:
    return math.fsum(x.tolist()) / x.size


def _se(x: np.ndarray) -> float:
    if x.size < 2:
        return 0.0
    mu = _mean(x)
    return math.sqrt(math.fsum(((x - mu) ** 2).tolist()) / (x.size - 1) / x.size)


@dataclass(frozen=True, eq=False)
class SimReport:
    """Per-replicate results of one configuration plus aggregate views.

    ``values`` has one row per replicate and one column per entry of
    ``columns``. Aggregates use exactly rounded sums, so they depend only on
    the set of rows.
    """

    config: SimConfig
    columns: tuple[str, ...]
    values: np.ndarray
    _index: dict = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {c: i for i, c in enumerate(self.columns)})

    def column(self, name: str) -> np.ndarray:
        return self.values[:, self._index[name]]

    @property
    def reps(self) -> int:
        return self.values.shape[0]

    @property
    def skipped(self) -> int:
        return int(self.column("redraws").sum())

    def truth(self, param: str) -> float:
        return self.config.rates.tau1 if param == "tau1" else self.config.rates.tau2

    def point(self, estimator: str, param: str) -> PointSummary:
        est = self.column(f"{estimator}:{param}")
        sq = (est - self.truth(param)) ** 2
        avg = _mean(est)
        return PointSummary(avg, avg - self.truth(param), _mean(sq), _se(sq))

    def interval(self, method: str, param: str) -> IntervalSummary:
        lo = self.column(f"{method}:{param}:lower")
        hi = self.column(f"{method}:{param}:upper")
        truth = self.truth(param)
        covered = ((lo <= truth) & (truth <= hi)).astype(np.float64)
        length = hi - lo
        return IntervalSummary(_mean(lo), _mean(hi), _mean(length), _se(length), _mean(covered))


def run(config: SimConfig, workers: int = 1, backend=None) -> SimReport:
    """Run ``config.reps`` replicates, optionally over a process pool."""
    reps = config.reps
    if workers <= 1 or reps < 2:
        values = _run_block(config, 0, reps, backend)
    else:
        bounds = np.linspace(0, reps, min(workers * 4, reps) + 1).astype(int)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_run_block, config, int(a), int(b), backend)
                for a, b in zip(bounds[:-1], bounds[1:])
                if b > a
            ]
            values = np.vstack([f.result() for f in futures])
    return SimReport(config, tuple(_columns(config)), values)


# ---------------------------------------------------------------------------
# Tables
# ---------------------------------------------------------------------------

KEY_FIELDS = ("n", "m", "scheme", "t1", "t2", "parameter")
POINT_FIELDS = KEY_FIELDS + ("estimator", "average", "bias", "mse")
INTERVAL_FIELDS = KEY_FIELDS + ("method", "lower", "upper", "length", "coverage")
_NUMERIC = {"n": int, "m": int, "t1": float, "t2": float, "average": float, "bias": float,
            "mse": float, "lower": float, "upper": float, "length": float, "coverage": float}


def summarize(report: SimReport, estimators=None, methods=None) -> tuple[list[dict], list[dict]]:
    """Table rows: ``(point_rows, interval_rows)``.

    Point rows carry average, bias and MSE per (parameter, estimator);
    interval rows carry average bounds, length and coverage per
    (parameter, method).
    """
    cfg = report.config
    estimators = cfg.estimators() if estimators is None else list(estimators)
    methods = cfg.interval_methods() if methods is None else list(methods)
    key = {"n": cfg.plan.n, "m": cfg.plan.m, "scheme": cfg.scheme, "t1": cfg.plan.t1, "t2": cfg.plan.t2}
    points, intervals = [], []
    for par in PARAMS:
        for est in estimators:
            s = report.point(est, par)
            points.append({**key, "parameter": par, "estimator": est,
                           "average": s.average, "bias": s.bias, "mse": s.mse})
        for method in methods:
            s = report.interval(method, par)
            intervals.append({**key, "parameter": par, "method": method, "lower": s.lower,
                              "upper": s.upper, "length": s.length, "coverage": s.coverage})
    return points, intervals


def _render(value, digits=None):
    if isinstance(value, float):
        return repr(value) if digits is None else f"{value:.{digits}g}"
    return str(value)


def rows_to_csv(rows: list[dict], fields) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fields)
    for row in rows:
        writer.writerow([_render(row[f]) for f in fields])
    return buf.getvalue()


def rows_from_csv(text: str) -> list[dict]:
    reader = csv.DictReader(io.StringIO(text))
    return [{k: _NUMERIC.get(k, str)(v) for k, v in row.items()} for row in reader]


def rows_to_markdown(rows: list[dict], fields, digits: int = 6) -> str:
    cells = [[_render(row[f], digits) for f in fields] for row in rows]
    widths = [max([len(f)] + [len(c[i]) for c in cells]) for i, f in enumerate(fields)]
    line = lambda items: "| " + " | ".join(s.ljust(w) for s, w in zip(items, widths)) + " |"
    out = [line(fields), "|" + "|".join("-" * (w + 2) for w in widths) + "|"]
    out += [line(c) for c in cells]
    return "\n".join(out) + "\n"
