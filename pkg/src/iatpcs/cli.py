"""Command-line interface: ``iatpcs {generate,analyze,simulate,tables}``.

Exit status: 0 on success, 2 for usage errors, 3 when an input violates a
plan/sample invariant or cannot be parsed, 4 when an estimator does not exist
for the data.
"""

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .bayes import (
    STUDY_LOSSES,
    PRIOR_0,
    PRIOR_I,
    PRIOR_II,
    SELF,
    GammaPrior,
    Loss,
    bayes_estimate,
    credible_intervals,
    posterior_stats,
)
from .censoring import CensoringPlan, generate, replay
from .data import HOEL_M, HOEL_N, HOEL_NOTE, HOEL_REMOVALS, HOEL_ROWS
from .errors import NonexistenceError, ValidationError
from .estimate import A_MODES, asymptotic_ci, mle_stats, stat_a
from .model import RatePair
from .montecarlo import (
    INTERVAL_FIELDS,
    POINT_FIELDS,
    SimConfig,
    rows_to_csv,
    rows_to_markdown,
    run,
    summarize,
)
from .records import format_sample, parse_dataset, render_number

EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, EXIT_NONEXISTENCE = 0, 2, 3, 4
SEED_ENV = "IATPCS_SEED"
NAMED_PRIORS = {"0": PRIOR_0, "I": PRIOR_I, "II": PRIOR_II}

# rates, thresholds and priors of the eight standard study tables
TABLE_GRID = (
    ((0.6, 0.8), (0.5, 1.0), (PRIOR_0, PRIOR_I)),
    ((1.0, 1.5), (0.5, 1.0), (PRIOR_0, PRIOR_II)),
    ((0.6, 0.8), (1.0, 1.5), (PRIOR_0, PRIOR_I)),
    ((1.0, 1.5), (1.0, 1.5), (PRIOR_0, PRIOR_II)),
)
TABLE_PAIRS = ((30, 10), (30, 15), (40, 10), (40, 20))
TABLE_SCHEMES = ("I", "II", "III")


def _default_seed() -> int:
    value = os.environ.get(SEED_ENV)
    if value is None:
        return 0
    try:
        return int(value)
    except ValueError:
        raise ValidationError(f"{SEED_ENV} must be an integer, got {value!r}") from None


def _prior(text: str) -> GammaPrior:
    key = text.strip().upper()
    if key in NAMED_PRIORS:
        return NAMED_PRIORS[key]
    try:
        a, b, c, d = (float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"prior must be 0, I, II or a,b,c,d; got {text!r}") from None
    return GammaPrior(a, b, c, d)


def _pairs(text: str):
    out = []
    for item in text.split(","):
        try:
            n, m = item.split(":")
            out.append((int(n), int(m)))
        except ValueError:
            raise argparse.ArgumentTypeError(f"pairs look like 30:10,40:20; got {text!r}") from None
    return out


def _csv_list(text: str):
    return [t.strip().upper() for t in text.split(",") if t.strip()]


def _removal_list(text: str):
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"removals look like 0,0,2; got {text!r}") from None


def _add_plan_args(p, required=True):
    p.add_argument("--n", type=int, required=required, help="units on test")
    p.add_argument("--m", type=int, required=required, help="target number of failures")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--scheme", choices=TABLE_SCHEMES, help="standard removal scheme")
    group.add_argument("--removals", type=_removal_list, help="explicit removal vector, e.g. 0,0,20")
    p.add_argument("--t1", type=float, required=True, help="first time threshold")
    p.add_argument("--t2", type=float, required=True, help="second time threshold")


def _plan(args, n=None, m=None, default_removals=None) -> CensoringPlan:
    """Plan from the flags; ``default_removals`` applies when n, m are not overridden."""
    overridden = args.n is not None or args.m is not None
    n = args.n if args.n is not None else n
    m = args.m if args.m is not None else m
    if n is None or m is None:
        raise ValidationError("--n and --m are required")
    if args.scheme is not None:
        return CensoringPlan.from_scheme(args.scheme, n, m, args.t1, args.t2)
    if args.removals is not None:
        removals = args.removals
    elif default_removals is not None and not overridden:
        removals = default_removals
    else:
        removals = (0,) * (m - 1) + (n - m,)
    return CensoringPlan(n, m, removals, args.t1, args.t2)


def _losses(args):
    if args.linex is None and args.gelf is None:
        return list(STUDY_LOSSES)
    return [SELF] + [Loss("LINEX", p) for p in args.linex or []] + [Loss("GELF", q) for q in args.gelf or []]


def _priors(args, default):
    priors = list(args.prior or [])
    if getattr(args, "prior0", False):
        priors.insert(0, PRIOR_0)
    return priors or list(default)


# ---------------------------------------------------------------------------


def cmd_generate(args) -> int:
    plan = _plan(args)
    rates = RatePair(args.tau1, args.tau2)
    seed = args.seed if args.seed is not None else _default_seed()
    sample = generate(plan, rates, np.random.default_rng(seed))
    text = format_sample(sample)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _fmt(x) -> str:
    return f"{x:.6g}"


def analyze_dataset(times, causes, plan, priors, losses, gamma, a_mode, hpd_draws, seed):
    """Analysis of one record under ``plan``; returns a JSON-ready dict."""
    sample = replay(times, causes, plan)
    a = stat_a(sample, a_mode)
    out = {
        "n": plan.n, "m": plan.m, "t1": plan.t1, "t2": plan.t2, "a_mode": a_mode,
        "case": sample.case.tag.value, "k1": sample.case.k1, "k2": sample.case.k2,
        "D": sample.d, "D1": sample.d1, "D2": sample.d2,
        "r_star": sample.r_star, "t_star": sample.t_star, "A": a,
        "level": 1 - gamma,
    }
    fit = mle_stats(sample.d1, sample.d2, a)
    ci1, ci2 = asymptotic_ci(fit, gamma)
    out["mle"] = {"tau1": fit.tau1_hat, "tau2": fit.tau2_hat, "var1": fit.var1, "var2": fit.var2}
    out["aci"] = {"tau1": [ci1.lower, ci1.upper], "tau2": [ci2.lower, ci2.upper]}
    rng = np.random.default_rng(seed)
    out["bayes"] = []
    for prior in priors:
        post = posterior_stats(sample.d1, sample.d2, a, prior)
        h1, h2 = credible_intervals(post, gamma, hpd_draws, rng)
        out["bayes"].append({
            "prior": prior.label,
            "estimates": {loss.label: list(bayes_estimate(post, loss)) for loss in losses},
            "hpd": {"tau1": [h1.lower, h1.upper], "tau2": [h2.lower, h2.upper]},
        })
    return out


def render_analysis(res: dict) -> str:
    pct = f"{100 * res['level']:g}%"
    lines = [
        f"plan: n={res['n']} m={res['m']} t1={render_number(res['t1'])} t2={render_number(res['t2'])} "
        f"A-mode={res['a_mode']}",
        f"case: {res['case']} (k1={res['k1']}, k2={res['k2']})",
        f"D={res['D']} D1={res['D1']} D2={res['D2']} R*={res['r_star']} T*={render_number(res['t_star'])}",
        f"A={render_number(res['A'])}",
        f"MLE: tau1={_fmt(res['mle']['tau1'])} tau2={_fmt(res['mle']['tau2'])}",
        f"ACI {pct}: tau1=({_fmt(res['aci']['tau1'][0])}, {_fmt(res['aci']['tau1'][1])}) "
        f"tau2=({_fmt(res['aci']['tau2'][0])}, {_fmt(res['aci']['tau2'][1])})",
    ]
    for block in res["bayes"]:
        lines.append(f"Bayes [{block['prior']}]:")
        for label, (e1, e2) in block["estimates"].items():
            lines.append(f"  {label:<16} tau1={_fmt(e1)} tau2={_fmt(e2)}")
        h = block["hpd"]
        lines.append(
            f"  HPD {pct}: tau1=({_fmt(h['tau1'][0])}, {_fmt(h['tau1'][1])}) "
            f"tau2=({_fmt(h['tau2'][0])}, {_fmt(h['tau2'][1])})"
        )
    return "\n".join(lines) + "\n"


def cmd_analyze(args) -> int:
    if args.hoel:
        times = np.array([r[0] for r in HOEL_ROWS], dtype=float)
        causes = np.array([r[1] for r in HOEL_ROWS], dtype=int)
        plan = _plan(args, HOEL_N, HOEL_M, HOEL_REMOVALS)
    else:
        if not args.input:
            raise ValidationError("analyze needs an input file or --hoel")
        data = parse_dataset(Path(args.input).read_text(encoding="utf-8"))
        times, causes = data.times, data.causes
        size = int(times.size)
        plan = _plan(args, size, size)
    seed = args.seed if args.seed is not None else _default_seed()
    res = analyze_dataset(
        times, causes, plan, _priors(args, [PRIOR_0]), _losses(args),
        args.gamma, args.a_mode, args.hpd_draws, seed,
    )
    if args.json:
        sys.stdout.write(json.dumps(res, indent=2) + "\n")
    else:
        sys.stdout.write(render_analysis(res))
        if args.hoel:
            sys.stdout.write(HOEL_NOTE + "\n")
    return EXIT_OK


def _write_outputs(points, intervals, errors, out_dir, stem=""):
    prefix = f"{stem}_" if stem else ""
    if out_dir is None:
        sys.stdout.write(rows_to_markdown(points, POINT_FIELDS) + "\n")
        sys.stdout.write(rows_to_markdown(intervals, INTERVAL_FIELDS))
    else:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{prefix}points.csv").write_text(rows_to_csv(points, POINT_FIELDS), encoding="utf-8")
        (out / f"{prefix}intervals.csv").write_text(rows_to_csv(intervals, INTERVAL_FIELDS), encoding="utf-8")
        (out / f"{prefix}points.md").write_text(rows_to_markdown(points, POINT_FIELDS), encoding="utf-8")
        (out / f"{prefix}intervals.md").write_text(rows_to_markdown(intervals, INTERVAL_FIELDS), encoding="utf-8")
        if errors:
            (out / f"{prefix}errors.txt").write_text("\n".join(errors) + "\n", encoding="utf-8")
    for e in errors:
        print(f"cell skipped: {e}", file=sys.stderr)


def _sweep(pairs, schemes, t1, t2, rates, priors, losses, args, seed):
    points, intervals, errors = [], [], []
    for n, m in pairs:
        for kind in schemes:
            try:
                plan = CensoringPlan.from_scheme(kind, n, m, t1, t2)
                cfg = SimConfig(
                    plan, rates, reps=args.reps, priors=tuple(priors), losses=tuple(losses),
                    level=1 - args.gamma, hpd_draws=args.hpd_draws, seed=seed,
                    a_mode=args.a_mode, scheme=kind,
                )
            except ValidationError as exc:
                errors.append(f"(n={n}, m={m}, scheme {kind}): {exc}")
                continue
            if args.verbose:
                print(f"running n={n} m={m} scheme {kind} ...", file=sys.stderr)
            p, i = summarize(run(cfg, workers=args.workers))
            points += p
            intervals += i
    return points, intervals, errors


def _check_sim_args(args):
    if args.reps < 1:
        raise ValidationError(f"--reps must be >= 1, got {args.reps}")
    if args.workers < 1:
        raise ValidationError(f"--workers must be >= 1, got {args.workers}")


def cmd_simulate(args) -> int:
    _check_sim_args(args)
    seed = args.seed if args.seed is not None else _default_seed()
    rates = RatePair(args.tau1, args.tau2)
    points, intervals, errors = _sweep(
        args.pairs, args.schemes, args.t1, args.t2, rates,
        _priors(args, [PRIOR_0, PRIOR_I]), _losses(args), args, seed,
    )
    _write_outputs(points, intervals, errors, args.out_dir)
    return EXIT_OK


def cmd_tables(args) -> int:
    _check_sim_args(args)
    seed = args.seed if args.seed is not None else _default_seed()
    losses = list(STUDY_LOSSES)
    for k, (rates, (t1, t2), priors) in enumerate(TABLE_GRID):
        points, intervals, errors = _sweep(
            TABLE_PAIRS, TABLE_SCHEMES, t1, t2, RatePair(*rates), priors, losses, args, seed
        )
        _write_outputs(points, intervals, errors, args.out_dir, stem=f"table{2 * k + 1}-{2 * k + 2}")
    return EXIT_OK


def _add_common_inference(p):
    p.add_argument("--gamma", type=float, default=0.05, help="1 - nominal level (default 0.05)")
    p.add_argument("--a-mode", choices=A_MODES, default="paper",
                   help="terminal term of A: added once (paper) or times R* (corrected)")
    p.add_argument("--hpd-draws", type=int, default=5000)
    p.add_argument("--seed", type=int, default=None, help=f"random seed (default ${SEED_ENV} or 0)")
    p.add_argument("--prior", type=_prior, action="append",
                   help="prior: 0, I, II or a,b,c,d (repeatable)")
    p.add_argument("--linex", type=float, action="append", help="LINEX parameter p (repeatable)")
    p.add_argument("--gelf", type=float, action="append", help="GELF parameter q (repeatable)")


def _add_sim_args(p):
    p.add_argument("--reps", type=int, default=10_000)
    p.add_argument("--workers", type=int, default=1, help="worker processes")
    p.add_argument("--out-dir", help="directory for CSV/Markdown tables (default: print Markdown)")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="iatpcs", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="simulate one IAT-II PCS competing-risks sample")
    _add_plan_args(g)
    g.add_argument("--tau1", type=float, required=True)
    g.add_argument("--tau2", type=float, required=True)
    g.add_argument("--seed", type=int, default=None)
    g.add_argument("-o", "--output", help="output file (default stdout)")
    g.set_defaults(func=cmd_generate)

    a = sub.add_parser("analyze", help="estimate rates from a time,cause record")
    a.add_argument("input", nargs="?", help="CSV file with header time,cause")
    a.add_argument("--hoel", action="store_true", help="use the embedded mouse-mortality record")
    _add_plan_args(a, required=False)
    _add_common_inference(a)
    a.add_argument("--prior0", action="store_true", help="include the non-informative prior")
    a.add_argument("--json", action="store_true", help="machine-readable output")
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("simulate", help="Monte Carlo study over (n, m) pairs and schemes")
    s.add_argument("--pairs", type=_pairs, required=True, help="e.g. 30:10,40:20")
    s.add_argument("--schemes", type=_csv_list, default=["I", "II", "III"])
    s.add_argument("--t1", type=float, required=True)
    s.add_argument("--t2", type=float, required=True)
    s.add_argument("--tau1", type=float, required=True)
    s.add_argument("--tau2", type=float, required=True)
    _add_common_inference(s)
    _add_sim_args(s)
    s.set_defaults(func=cmd_simulate)

    t = sub.add_parser("tables", help="the full standard grid (eight tables)")
    t.add_argument("--gamma", type=float, default=0.05)
    t.add_argument("--a-mode", choices=A_MODES, default="paper")
    t.add_argument("--hpd-draws", type=int, default=5000)
    t.add_argument("--seed", type=int, default=None)
    _add_sim_args(t)
    t.set_defaults(func=cmd_tables)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NonexistenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONEXISTENCE
    except (ValidationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
