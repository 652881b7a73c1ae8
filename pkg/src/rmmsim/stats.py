"""Closed-form bounds and the statistical machinery used to check them.

Every bound here is a function of the masses and time only.  Means get
normal-approximation confidence intervals, proportions get Wilson intervals,
and the two-sample test is a Kolmogorov-Smirnov test with the asymptotic
critical value.
"""

import math
from dataclasses import dataclass
from statistics import NormalDist

import numpy as np
from scipy import stats as _sps

from .engine import as_mass_vector, head_truncate, tail_shift
from .errors import DomainError

#: Constant of the triple and quadruple connection bounds.
CONNECTION_CONSTANT = math.factorial(5)

#: Constant of the fourth-power sum bound, assembled term by term from the
#: chain 1 + 12 + 6 + 12 C + C with C = 5!.
FOURTH_NORM_CONSTANT = 1 + 12 + 6 + 12 * CONNECTION_CONSTANT + CONNECTION_CONSTANT


def z_value(level=0.99):
    return NormalDist().inv_cdf(0.5 + level / 2)


@dataclass(frozen=True)
class BoundReport:
    name: str
    exact_or_estimate: float
    bound_value: float
    satisfied: bool
    slack: float

    @classmethod
    def compare(cls, name, value, bound):
        value = float(value)
        bound = float(bound)
        return cls(name, value, bound, value <= bound, bound - value)


@dataclass(frozen=True)
class TwoSampleResult:
    statistic: float
    threshold: float
    rejected: bool
    n_a: int
    n_b: int
    alpha: float
    pvalue: float = float("nan")


@dataclass(frozen=True)
class MeanEstimate:
    mean: float
    stderr: float
    half_width: float
    trials: int
    interval: tuple = None

    @property
    def low(self):
        return self.interval[0] if self.interval else self.mean - self.half_width

    @property
    def high(self):
        return self.interval[1] if self.interval else self.mean + self.half_width


def _norm_sq(v):
    v = np.asarray(v, dtype=np.float64)
    return float(np.dot(v, v))


def _check_subcritical(x, t):
    s = _norm_sq(x)
    if not (t > 0 and t * s < 1):
        raise DomainError(f"need 0 < t < 1/||x||^2 = {1 / s if s else math.inf}, got t={t}")
    return s


def _index(x, i):
    i = int(i)
    if i < 1:
        raise ValueError("vertex indices are positive integers")
    return x[i - 1] if i <= x.size else 0.0


def bound_pair_connection(x, t, i, j):
    """Bound on P{i ~ j}: x_i x_j t / (1 - t ||x||^2)."""
    x = as_mass_vector(x)
    s = _check_subcritical(x, t)
    return _index(x, i) * _index(x, j) * t / (1 - t * s)


def kappa(t, m, i, j, a_norm, b_norm):
    """Path weight of the cross-cut connection bound for the pair (i, j)."""
    if i <= m and j <= m:
        return t * t * b_norm * b_norm
    if i > m and j > m:
        return t * t * a_norm * a_norm
    return t


def bound_cut_connection(x, t, m, i, j):
    """Bound on P{i ~ j} using only edges across the cut at ``m``."""
    x = as_mass_vector(x)
    a = math.sqrt(_norm_sq(head_truncate(x, m)))
    b = math.sqrt(_norm_sq(tail_shift(x, m)))
    if not (t > 0 and t * a * b < 1):
        raise DomainError("need 0 < t < 1/(||x_head|| ||x_tail||)")
    k = kappa(t, m, int(i), int(j), a, b)
    return _index(x, i) * _index(x, j) * k / (1 - t * t * a * a * b * b)


def tail_polynomial(t, s):
    """P_t(s) = 2 + (4t + 2t^2) s + 2 t^2 s^2."""
    if t < 0 or s < 0:
        raise DomainError("t and s must be nonnegative")
    return 2 + (4 * t + 2 * t * t) * s + 2 * t * t * s * s


def bound_tail_probability(x, t, m, eps):
    """Bound on P{||RMM_t(x; A, cut relation at m)||^2 - ||x_head||^2 >= eps}."""
    if not 0 < eps <= 1:
        raise DomainError("eps must lie in (0, 1]")
    x = as_mass_vector(x)
    a = _norm_sq(head_truncate(x, m))
    b = _norm_sq(tail_shift(x, m))
    return b * tail_polynomial(t, a) / eps


def bound_multi_connection(x, t, indices):
    """Bound on P{i_1 ~ ... ~ i_k} for k = 3 or 4 distinct indices."""
    x = as_mass_vector(x)
    s = _check_subcritical(x, t)
    idx = [int(i) for i in indices]
    if len(set(idx)) != len(idx) or len(idx) not in (3, 4):
        raise DomainError("need 3 or 4 distinct indices")
    prod = math.prod(_index(x, i) for i in idx)
    if len(idx) == 3:
        return CONNECTION_CONSTANT * prod * t**1.5 / (1 - t * s) ** 3
    return CONNECTION_CONSTANT * prod * t**2 / (1 - t * s) ** 5


def bound_fourth_norm(x, t):
    """Bound on sum_k E X_k(t)^4 for the coalescent started from ``x``."""
    x = as_mass_vector(x)
    s = _check_subcritical(x, t)
    return FOURTH_NORM_CONSTANT * s * s / (1 - t * s) ** 5


def bound_tail_second_moment(x, T, m):
    """Bound on E ||RMM_T(x shifted by m; R*)||^2: b + b^2 T / (1 - T b)."""
    x = as_mass_vector(x)
    b = _norm_sq(tail_shift(x, m))
    if not T * b < 1:
        raise DomainError("need T ||x_tail||^2 < 1")
    return b + b * b * T / (1 - T * b)


def mean_ci(samples, level=0.99):
    """Sample mean with a normal-approximation confidence interval."""
    a = np.asarray(samples, dtype=np.float64).ravel()
    if a.size < 2:
        raise ValueError("need at least two samples")
    se = float(np.std(a, ddof=1) / math.sqrt(a.size))
    return MeanEstimate(float(np.mean(a)), se, z_value(level) * se, int(a.size))


def estimate_mean(sampler, trials, stream=0, level=0.99):
    """Run ``sampler(stream, trials)`` and summarise its samples."""
    if trials < 2:
        raise ValueError("trials must be at least 2")
    return mean_ci(sampler(stream, trials), level)


def proportion_ci(hits, trials, level=0.99):
    """Wilson score interval for a binomial proportion.

    Unlike the plain normal interval it keeps a nonzero width when the
    proportion is 0 or 1.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    p = hits / trials
    z2 = z_value(level) ** 2
    centre = (p + z2 / (2 * trials)) / (1 + z2 / trials)
    spread = math.sqrt(z2 * p * (1 - p) / trials + z2 * z2 / (4 * trials * trials)) / (1 + z2 / trials)
    low, high = max(centre - spread, 0.0), min(centre + spread, 1.0)
    se = math.sqrt(p * (1 - p) / trials)
    return MeanEstimate(p, se, (high - low) / 2, int(trials), (low, high))


def ks_critical(alpha, n_a, n_b):
    """Asymptotic two-sample critical value c(alpha) sqrt((n+m)/(nm))."""
    return math.sqrt(-math.log(alpha / 2) / 2) * math.sqrt((n_a + n_b) / (n_a * n_b))


def ks_statistic(a, b):
    a = np.sort(np.asarray(a, dtype=np.float64).ravel())
    b = np.sort(np.asarray(b, dtype=np.float64).ravel())
    grid = np.concatenate([a, b])
    fa = np.searchsorted(a, grid, side="right") / a.size
    fb = np.searchsorted(b, grid, side="right") / b.size
    return float(np.max(np.abs(fa - fb)))


def ks_one_sample_exp(v):
    """KS distance between the empirical law of ``v`` and Exp(1)."""
    v = np.sort(np.asarray(v, dtype=np.float64).ravel())
    n = v.size
    cdf = -np.expm1(-v)
    k = np.arange(1, n + 1)
    return float(max(np.max(k / n - cdf), np.max(cdf - (k - 1) / n)))


def ks_two_sample(a, b, alpha=0.01):
    a = np.asarray(a, dtype=np.float64).ravel()
    b = np.asarray(b, dtype=np.float64).ravel()
    if a.size < 25 or b.size < 25:
        raise ValueError("each sample needs at least 25 values")
    d = ks_statistic(a, b)
    crit = ks_critical(alpha, a.size, b.size)
    n_eff = a.size * b.size / (a.size + b.size)
    pvalue = float(_sps.kstwobign.sf(d * math.sqrt(n_eff)))
    return TwoSampleResult(d, crit, d > crit, int(a.size), int(b.size), alpha, pvalue)


@dataclass(frozen=True)
class ChiSquareResult:
    statistic: float
    dof: int
    pvalue: float
    rejected: bool
    alpha: float


def chi_square_gof(counts, probs, alpha=1e-3, min_expected=5.0):
    """Pearson goodness of fit; bins with small expected counts are pooled."""
    counts = np.asarray(counts, dtype=np.float64)
    probs = np.asarray(probs, dtype=np.float64)
    total = counts.sum()
    order = np.argsort(-probs, kind="stable")
    counts = counts[order]
    expected = probs[order] * total
    big = expected >= min_expected
    obs = list(counts[big])
    exp = list(expected[big])
    if np.any(~big):
        obs.append(counts[~big].sum())
        exp.append(expected[~big].sum())
        if exp[-1] < min_expected and len(exp) > 1:
            obs[-2] += obs.pop()
            exp[-2] += exp.pop()
    obs = np.array(obs)
    exp = np.array(exp)
    dof = obs.size - 1
    if dof < 1:
        return ChiSquareResult(0.0, 0, 1.0, False, alpha)
    stat = float(np.sum((obs - exp) ** 2 / exp))
    pvalue = float(_sps.chi2.sf(stat, dof))
    return ChiSquareResult(stat, dof, pvalue, pvalue < alpha, alpha)


def functional(rows, kind="norm_sq", decimals=10):
    """Scalar summary of each row of component vectors, rounded.

    Rounding merges atoms that differ only by summation order, which would
    otherwise split a discrete law into near-duplicate values.
    """
    rows = np.asarray(rows, dtype=np.float64)
    if kind == "norm_sq":
        v = np.sum(rows * rows, axis=1)
    elif kind == "largest":
        v = rows[:, 0]
    elif kind == "block_count":
        return np.count_nonzero(rows, axis=1).astype(np.float64)
    else:
        raise ValueError(f"unknown functional {kind!r}")
    return np.round(v, decimals)


def chi_square_critical(alpha, dof):
    return float(_sps.chi2.isf(alpha, dof)) if dof > 0 else math.inf


def glue_property_check(x, relation, m, t, trials, seed, base_stream=0, alpha=0.01, threads=None):
    """KS test of ||.||^2 between the direct and two-stage glue constructions."""
    from .couplings import glue_samples

    direct, staged = glue_samples(x, relation, m, t, trials, seed, base_stream, threads)
    return ks_two_sample(functional(direct), functional(staged), alpha)


def grinding_check(x, m, M, t, trials, seed, base_stream=0, alpha=0.01, threads=None):
    """KS test of ||.||^2 between RMM at 3t/2 and the reassembled ground construction."""
    from .couplings import grinding_samples, plain_samples

    ground, _, _ = grinding_samples(x, m, M, t, trials, seed, base_stream, threads)
    plain = plain_samples(x, 1.5 * t, trials, seed, base_stream, threads)
    return ks_two_sample(functional(plain), functional(ground), alpha)
