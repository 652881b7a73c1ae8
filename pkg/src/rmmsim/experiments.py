"""Desk-scale experiments: convergence of the rescaled SBM, the phase
regimes of its largest component, and fourth moments of the coalescent.

Each function returns a list of row dicts ready for :mod:`rmmsim.io`.
"""

import math

import numpy as np

from . import stats
from .coalescent import final_states
from .couplings import plain_samples
from .engine import as_mass_vector
from .errors import DomainError
from .sbm import SbmParams, largest_component, zeta_many

#: Each n gets its own block of stream ids, tied to the value of n.
N_STREAM_SHIFT = 32

REGIMES = ("i", "ii", "iii", "supercritical")


def n_stream(n, base=0):
    return (int(n) << N_STREAM_SHIFT) + int(base)


def _check_trials(trials):
    if trials < 1:
        raise DomainError("trials must be a positive integer")


def largest_samples(n, m, t, u, trials, seed, mode="fast", base=0, threads=None):
    """Rescaled largest component n^{-2/3} C over ``trials`` samples."""
    stream = n_stream(n, base)
    if mode == "fast":
        return largest_component(SbmParams.critical(n, m, t, u), trials, seed, stream, threads).samples
    if mode == "coupled":
        return zeta_many(n, m, t, u, seed, stream, trials, threads=threads)[:, 0]
    raise DomainError(f"unknown mode {mode!r}")


def convergence(n_list, m, t, u, trials, seed, mode="fast", threads=None, alpha=0.01):
    """KS distances between rescaled largest-component laws at consecutive n."""
    _check_trials(trials)
    if len(n_list) < 2:
        raise DomainError("need at least two values of n")
    samples = {n: largest_samples(n, m, t, u, trials, seed, mode, threads=threads) for n in n_list}
    rows = []
    for a, b in zip(n_list, n_list[1:]):
        res = stats.ks_two_sample(samples[a], samples[b], alpha)
        rows.append(
            {
                "n_a": a,
                "n_b": b,
                "classes": m,
                "t": float(t),
                "u": float(u),
                "mode": mode,
                "mean_a": float(np.mean(samples[a])),
                "mean_b": float(np.mean(samples[b])),
                "ks_distance": res.statistic,
                "ks_critical": res.threshold,
                "trials": trials,
                "seed": seed,
                "stream_id": n_stream(a),
            }
        )
    return rows


def strictly_decreasing(values):
    return all(b < a for a, b in zip(values, values[1:]))


def regime_params(regime, n, m=2, t=0.0, u=1.0, c=1.5, d=1.0, power=1.2):
    """Edge probabilities (p, q) of a regime's schedule at size n."""
    scale = n ** (-4.0 / 3.0)
    if regime == "i":
        p = 1.0 / n + t * scale
    elif regime == "ii":
        p = 1.0 / n + n ** (-power)
    elif regime == "iii":
        p = 1.0 / n - n ** (-power)
    elif regime == "supercritical":
        if not c + (m - 1) * d > m:
            raise DomainError("need c + (m-1) d > m for the supercritical regime")
        return SbmParams.raw(n, m, c / (m * n), d / (m * n))
    else:
        raise DomainError(f"unknown regime {regime!r}")
    return SbmParams.raw(n, m, p, u * scale)


def phase_sweep(regime, n_list, trials, seed, M=1.0, m=2, t=0.0, u=1.0, c=1.5, d=1.0, threads=None, level=0.99):
    """Estimated P{n^{-2/3} C > M} (or C/(nm) in the supercritical regime) along n_list."""
    _check_trials(trials)
    rows = []
    for n in n_list:
        params = regime_params(regime, n, m, t, u, c, d)
        stream = n_stream(n)
        lc = largest_component(params, trials, seed, stream, threads)
        if regime == "supercritical":
            frac = lc.samples * n ** (2.0 / 3.0) / params.vertices
            est = stats.mean_ci(frac, level)
            stat = "largest_fraction"
        else:
            est = stats.proportion_ci(int(np.sum(lc.samples > M)), trials, level)
            stat = f"P(C/n^(2/3)>{M:g})"
        rows.append(
            {
                "regime": regime,
                "n": n,
                "classes": m,
                "p": params.p,
                "q": params.q,
                "statistic": stat,
                "estimate": est.mean,
                "ci_low": est.low,
                "ci_high": est.high,
                "trials": trials,
                "seed": seed,
                "stream_id": stream,
            }
        )
    return rows


def largest_component_mean(params, trials, seed, base=0, threads=None):
    """Mean of n^{-2/3} C for one parameter set."""
    return largest_component(params, trials, seed, n_stream(params.n, base), threads).mean


def trend(rows, direction, limit=None):
    """Does the estimate move in ``direction`` (+1 or -1) along the rows?

    No single step may move the other way by more than the two intervals'
    combined half-widths. The net change from first to last must have the
    given sign, unless ``limit`` is given and every interval already covers
    it: a series pinned at its limit counts as moving toward it.
    """
    est = [r["estimate"] for r in rows]
    half = [(r["ci_high"] - r["ci_low"]) / 2 for r in rows]
    for k in range(len(est) - 1):
        if direction * (est[k + 1] - est[k]) < -(half[k] + half[k + 1]):
            return False
    if direction * (est[-1] - est[0]) > 0:
        return True
    if limit is None:
        return False
    return all(r["ci_low"] <= limit <= r["ci_high"] for r in rows)


def trend_label(rows, lower=0.0, upper=1.0):
    """'increasing', 'decreasing' or 'flat' for a phase-sweep table."""
    if trend(rows, +1, upper):
        return "increasing"
    if trend(rows, -1, lower):
        return "decreasing"
    return "flat"


def moments(x, t, trials, seed, threads=None, base=0, level=0.99):
    """E||X(t)||^4 and sum_k E X_k(t)^4 from the graphical construction."""
    if trials < 2:
        raise DomainError("trials must be at least 2")
    x = as_mass_vector(x)
    if t < 0:
        raise DomainError("t must be nonnegative")
    rows_g = plain_samples(x, t, trials, seed, base, threads)
    sq = np.sum(rows_g**2, axis=1)
    norm4 = stats.mean_ci(sq**2, level)
    sum4 = stats.mean_ci(np.sum(rows_g**4, axis=1), level)
    s = float(np.dot(x, x))
    bound = stats.bound_fourth_norm(x, t) if 0 < t * s < 1 else math.nan
    out = []
    for name, est, b in (("norm4", norm4, math.nan), ("sum_fourth_powers", sum4, bound)):
        out.append(
            {
                "quantity": name,
                "t": float(t),
                "estimate": est.mean,
                "ci_low": est.low,
                "ci_high": est.high,
                "bound": b,
                "within_bound": bool(est.high <= b) if not math.isnan(b) else "",
                "trials": trials,
                "seed": seed,
                "stream_id": base,
            }
        )
    return out


def jump_moments(x, t, trials, seed, base=0):
    """E||X(t)||^4 from the jump-process simulator (independent estimate)."""
    states = final_states(x, t, seed, base, trials)
    return stats.mean_ci(np.sum(states**2, axis=1) ** 2)
