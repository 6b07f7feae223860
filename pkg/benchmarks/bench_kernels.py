"""Time the numba and numpy kernel backends side by side.

Usage::

    python benchmarks/bench_kernels.py [--repeat 5] [--reps 300]

Each row reports the best wall time over ``--repeat`` runs after one
warm-up call (which also triggers numba compilation), and checks that the
two backends return identical results.
"""

import argparse
import timeit

import numpy as np

from iatpcs import _backend, _kernels
from iatpcs.bayes import PRIOR_0, PRIOR_I, sample_gamma
from iatpcs.censoring import CensoringPlan, generate
from iatpcs.model import RatePair
from iatpcs.montecarlo import SimConfig, run


def _cases(reps):
    rng = np.random.default_rng(0)
    plan = CensoringPlan.from_scheme("II", 40, 20, 0.5, 1.0)
    rates = RatePair(0.6, 0.8)
    expo, unif = rng.standard_exponential(20), rng.random(20)
    removals = np.asarray(plan.removals)
    z, u = rng.standard_normal(5000), rng.random(5000)
    sorted_draws = np.sort(rng.gamma(5.0, 1 / 15.5, 5000))
    cfg = SimConfig(plan, rates, reps=reps, priors=(PRIOR_0, PRIOR_I), hpd_draws=5000, seed=1)
    d = 5.0 - 1 / 3
    c = 1 / np.sqrt(9 * d)
    return {
        "censored_path (m=20)": lambda b: _kernels.censored_path(40, removals, 0.5, 1.0, 1.4, 0.6 / 1.4,
                                                                 expo, unif, backend=b),
        "mt_candidates (5000)": lambda b: _kernels.mt_candidates(d, c, z, u, backend=b),
        "shortest_window (5000)": lambda b: _kernels.shortest_window(sorted_draws, 4750, backend=b),
        "generate (40, 20)": lambda b: generate(plan, rates, np.random.default_rng(3), backend=b).times,
        "sample_gamma (5000)": lambda b: sample_gamma(5.0, 15.5, 5000, np.random.default_rng(3), backend=b),
        f"run ({reps} replicates)": lambda b: run(cfg, backend=b).values,
    }


def _same(a, b):
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b), equal_nan=True)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--reps", type=int, default=300, help="replicates in the end-to-end row")
    args = parser.parse_args()
    backends = ["numpy"] + (["numba"] if _backend.HAVE_NUMBA else [])
    print(f"{'case':<26}" + "".join(f"{b:>14}" for b in backends) + "   identical")
    for name, fn in _cases(args.reps).items():
        outputs, times = [], []
        for b in backends:
            outputs.append(fn(b))
            number = 1 if name.startswith("run") else 200
            best = min(timeit.repeat(lambda: fn(b), number=number, repeat=args.repeat)) / number
            times.append(best)
        same = all(_same(outputs[0], o) for o in outputs[1:])
        cells = "".join(f"{1e6 * t:>12.1f}us" for t in times)
        print(f"{name:<26}{cells}   {same}")


if __name__ == "__main__":
    main()
