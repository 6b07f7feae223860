"""Hot numeric kernels, each in a numba and a pure-numpy flavour.

Both flavours consume the same pre-drawn random arrays and return the same
values, so the backend choice never changes a seeded result. The numpy
versions are vectorized; the numba versions are the straightforward loops.
"""

import math

import numpy as np

from ._backend import default_backend, njit

# ---------------------------------------------------------------------------
# IAT-II progressive censoring with exponential competing risks
# ---------------------------------------------------------------------------


def _censored_path_loop(n, removals, t1, t2, total_rate, p1, expo, unif):
    m = removals.shape[0]
    times = np.empty(m, dtype=np.float64)
    delta = np.empty(m, dtype=np.int64)
    eff = np.empty(m, dtype=np.int64)
    at_risk = n
    now = 0.0
    d = 0
    for i in range(m):
        now = now + expo[i] / (at_risk * total_rate)
        if now >= t2:
            break
        times[i] = now
        delta[i] = 1 if unif[i] < p1 else 0
        r = removals[i] if now < t1 else 0
        eff[i] = r
        at_risk -= 1 + r
        d += 1
    t_star = times[m - 1] if d == m else t2
    return times[:d], delta[:d], eff[:d], at_risk, t_star


def _censored_path_numpy(n, removals, t1, t2, total_rate, p1, expo, unif):
    m = removals.shape[0]
    idx = np.arange(m)
    removed_before = np.concatenate(([0], np.cumsum(removals)))
    # until the first failure past t1 every planned removal is executed
    full_times = np.cumsum(expo / ((n - idx - removed_before[:m]) * total_rate))
    k1 = int(np.searchsorted(full_times, t1, side="left"))
    at_risk = n - idx - removed_before[np.minimum(idx, k1)]
    times = np.cumsum(expo / (at_risk * total_rate))
    d = min(int(np.searchsorted(times, t2, side="left")), m)
    eff = np.where(idx < k1, removals, 0).astype(np.int64)[:d]
    delta = (unif < p1).astype(np.int64)[:d]
    r_star = n - d - int(eff.sum())
    t_star = times[m - 1] if d == m else t2
    return times[:d].copy(), delta, eff, r_star, t_star


_censored_path_numba = njit(_censored_path_loop)


def censored_path(n, removals, t1, t2, total_rate, p1, expo, unif, backend=None):
    """Simulate one IAT-II path from ``m`` standard exponentials and uniforms.

    Returns ``(times, delta, effective_removals, r_star, t_star)``.
    """
    backend = backend or default_backend()
    removals = np.ascontiguousarray(removals, dtype=np.int64)
    expo = np.ascontiguousarray(expo, dtype=np.float64)
    unif = np.ascontiguousarray(unif, dtype=np.float64)
    if backend == "numba":
        times, delta, eff, r_star, t_star = _censored_path_numba(
            int(n), removals, float(t1), float(t2), float(total_rate), float(p1), expo, unif
        )
        return times.copy(), delta.copy(), eff.copy(), int(r_star), float(t_star)
    return _censored_path_numpy(int(n), removals, t1, t2, total_rate, p1, expo, unif)


# ---------------------------------------------------------------------------
# Marsaglia-Tsang acceptance step
# ---------------------------------------------------------------------------


def _mt_candidates_loop(d, c, z, u):
    out = np.empty(z.shape[0], dtype=np.float64)
    for i in range(z.shape[0]):
        t = 1.0 + c * z[i]
        if t <= 0.0:
            out[i] = np.nan
            continue
        v = t * t * t
        zz = z[i] * z[i]
        if u[i] < 1.0 - 0.0331 * zz * zz:
            out[i] = d * v
        elif math.log(u[i]) < 0.5 * zz + d * (1.0 - v + math.log(v)):
            out[i] = d * v
        else:
            out[i] = np.nan
    return out


def _mt_candidates_numpy(d, c, z, u):
    t = 1.0 + c * z
    v = t * t * t
    zz = z * z
    with np.errstate(invalid="ignore", divide="ignore"):
        squeeze = u < 1.0 - 0.0331 * zz * zz
        full = np.log(u) < 0.5 * zz + d * (1.0 - v + np.log(v))
    ok = (t > 0.0) & (squeeze | full)
    return np.where(ok, d * v, np.nan)


_mt_candidates_numba = njit(_mt_candidates_loop)


def mt_candidates(d, c, z, u, backend=None):
    """Apply the Marsaglia-Tsang test to normals ``z`` and uniforms ``u``.

    Accepted positions hold ``d * v`` (a unit-rate gamma draw of shape
    ``d + 1/3``); rejected positions hold NaN.
    """
    backend = backend or default_backend()
    z = np.ascontiguousarray(z, dtype=np.float64)
    u = np.ascontiguousarray(u, dtype=np.float64)
    if backend == "numba":
        return _mt_candidates_numba(float(d), float(c), z, u)
    return _mt_candidates_numpy(float(d), float(c), z, u)


# ---------------------------------------------------------------------------
# Shortest window over sorted draws
# ---------------------------------------------------------------------------


def _shortest_window_loop(s, w):
    best = 0
    best_width = s[w] - s[0]
    for j in range(1, s.shape[0] - w):
        width = s[j + w] - s[j]
        if width < best_width:
            best_width = width
            best = j
    return best


def _shortest_window_numpy(s, w):
    return int(np.argmin(s[w:] - s[: s.shape[0] - w]))


_shortest_window_numba = njit(_shortest_window_loop)


def shortest_window(sorted_draws, w, backend=None):
    """Index ``j`` minimising ``s[j + w] - s[j]``; the first minimum wins."""
    backend = backend or default_backend()
    s = np.ascontiguousarray(sorted_draws, dtype=np.float64)
    if backend == "numba":
        return int(_shortest_window_numba(s, int(w)))
    return _shortest_window_numpy(s, int(w))
