"""Competing-risks inference under improved adaptive type-II progressive censoring."""

from .bayes import (
    PRIOR_0,
    PRIOR_I,
    PRIOR_II,
    GammaPrior,
    Loss,
    PosteriorParams,
    bayes_estimate,
    estimate_gelf,
    estimate_linex,
    estimate_self,
    hpd,
    log_gamma,
    posterior,
    sample_gamma,
    sample_posterior,
)
from .censoring import Case, CaseTag, CensoringPlan, IatSample, classify, generate, replay, scheme
from .errors import DomainError, IatError, NonexistenceError, ValidationError
from .estimate import (
    IntervalEstimate,
    MleResult,
    asymptotic_ci,
    log_likelihood,
    mle,
    normal_quantile,
    stat_a,
)
from .model import RatePair, cdf, hazard, min_law, pdf, survival
from .montecarlo import SimConfig, SimReport, run, summarize

__version__ = "0.1.0"
