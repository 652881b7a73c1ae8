import itertools
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rmmsim import stats
from rmmsim.engine import rmm_many
from rmmsim.errors import DomainError
from rmmsim.experiments import regime_params
from rmmsim.field import COPY_A, trial_streams
from rmmsim.relations import MAXIMAL, IntraClass
from rmmsim.sbm import (
    LargestComponent,
    SbmParams,
    _skip_indices,
    _triangle_decode,
    critical_times,
    fast_edges,
    fast_many,
    largest_component,
    sbm_fast_sample,
    zeta_many,
    zeta_n,
)

mpmath.mp.dps = 40


def test_critical_times_examples():
    assert critical_times(50, 0.3, 0.0)[1] == 0.0
    t_n, _ = critical_times(1000, 1.0, 0.0)
    exact = -mpmath.mpf(10) ** 4 * mpmath.log(1 - mpmath.mpf(1) / 1000 - mpmath.mpf(1) / 10**4)
    assert t_n == pytest.approx(float(exact), rel=1e-13)
    assert round(t_n, 5) == 11.00605


@given(st.integers(2, 10**6), st.floats(-1, 5), st.floats(0, 5))
def test_critical_times_round_trip(n, t, u):
    scale = n ** (4 / 3)
    if not (0 <= 1 / n + t / scale < 1 and u / scale < 1):
        with pytest.raises(DomainError):
            critical_times(n, t, u)
        return
    t_n, u_n = critical_times(n, t, u)
    p = 1 / n + t / scale
    q = u / scale
    if p > 0:
        assert -math.expm1(-t_n / scale) == pytest.approx(p, rel=1e-12)
    if q > 0:
        assert -math.expm1(-u_n / scale) == pytest.approx(q, rel=1e-12)


def test_critical_times_domain():
    with pytest.raises(DomainError):
        critical_times(2, -10.0, 0.0)
    with pytest.raises(DomainError):
        critical_times(8, 0.0, 16.0)
    with pytest.raises(DomainError):
        SbmParams.raw(5, 2, 1.5, 0.0)


def test_triangle_order():
    k = np.arange(2000 * 1999 // 2)
    a, b = _triangle_decode(k)
    expected = sorted(itertools.combinations(range(2000), 2), key=lambda p: (p[1], p[0]))
    assert np.array_equal(np.stack([a, b], 1), np.array(expected))


def test_skipping_keeps_each_index_independently():
    rng = np.random.default_rng(4)
    total, p, reps = 40, 0.15, 5000
    hits = np.zeros(total)
    sizes = []
    for _ in range(reps):
        idx = _skip_indices(total, p, rng)
        assert np.all(np.diff(idx) > 0) and (idx.size == 0 or idx[-1] < total)
        hits[idx] += 1
        sizes.append(idx.size)
    res = stats.chi_square_gof(hits, np.full(total, 1 / total))
    assert not res.rejected
    assert abs(np.mean(sizes) - total * p) < 4 * math.sqrt(total * p * (1 - p) / reps)
    assert _skip_indices(10, 0.0, rng).size == 0
    assert _skip_indices(10, 1.0, rng).tolist() == list(range(10))


def test_fast_sampler_extremes():
    rng = np.random.default_rng(0)
    assert sbm_fast_sample(SbmParams.raw(20, 3, 0.0, 0.0), rng).masses.tolist() == [1.0] * 60
    full = sbm_fast_sample(SbmParams.raw(20, 3, 1.0, 1.0), rng).masses
    assert full[0] == 60 and full[1:].sum() == 0


def test_fast_edges_respect_classes():
    rng = np.random.default_rng(1)
    src, dst = fast_edges(SbmParams.raw(30, 3, 0.2, 0.0), rng)
    assert src.size > 0 and np.all(src % 3 == dst % 3)
    src, dst = fast_edges(SbmParams.raw(30, 3, 0.0, 0.2), rng)
    assert src.size > 0 and np.all(src % 3 != dst % 3)
    assert len(set(zip(np.minimum(src, dst).tolist(), np.maximum(src, dst).tolist()))) == src.size


def _six_vertex_law(p, q):
    """Exact law of sorted component sizes of G_2(3, p, q): 15 pairs, 2**15 states."""
    pairs = list(itertools.combinations(range(6), 2))
    probs = [p if a % 2 == b % 2 else q for a, b in pairs]
    law = {}
    for state in itertools.product((0, 1), repeat=15):
        parent = list(range(6))

        def find(v):
            while parent[v] != v:
                v = parent[v]
            return v

        w = 1.0
        for (a, b), pr, s in zip(pairs, probs, state):
            w *= pr if s else 1 - pr
            if s:
                parent[find(a)] = find(b)
        key = tuple(sorted(np.bincount([find(v) for v in range(6)], minlength=6), reverse=True))
        law[key] = law.get(key, 0.0) + w
    return law


def test_fast_sampler_matches_exact_small_graph():
    law = _six_vertex_law(0.3, 0.1)
    assert sum(law.values()) == pytest.approx(1.0, abs=1e-12)
    keys = sorted(law)
    index = {k: n for n, k in enumerate(keys)}
    rows = fast_many(SbmParams.raw(3, 2, 0.3, 0.1), seed=6, trials=20000, threads=2)
    counts = np.zeros(len(keys))
    for row in rows:
        counts[index[tuple(int(v) for v in row)]] += 1
    res = stats.chi_square_gof(counts, np.array([law[k] for k in keys]))
    assert not res.rejected, res


def test_coupled_total_mass_and_single_class():
    n, t = 64, 0.5
    rows = zeta_many(n, 1, t, 3.0, seed=2, trials=20)
    # m = 1: the inter-class step has no pairs, so u plays no role
    assert np.array_equal(rows, zeta_many(n, 1, t, 0.0, seed=2, trials=20))
    t_n, _ = critical_times(n, t, 0.0)
    er = rmm_many(np.full(n, n ** (-2 / 3)), MAXIMAL, t_n, 2, trial_streams(0, 20, COPY_A))
    assert np.allclose(rows, er, rtol=0, atol=1e-12)
    for m in (2, 3):
        z = zeta_many(n, m, 0.0, 1.0, seed=3, trials=5)
        assert np.allclose(z.sum(axis=1), m * n ** (1 / 3))


def test_coupled_without_inter_merging_is_per_class():
    n, m = 40, 3
    z = zeta_many(n, m, 1.0, 0.0, seed=9, trials=10)
    t_n, _ = critical_times(n, 1.0, 0.0)
    streams = trial_streams(0, 10, COPY_A)
    per_class = []
    for l in range(1, m + 1):
        x = np.zeros(n * m)
        x[l - 1 :: m] = n ** (-2 / 3)
        per_class.append(rmm_many(x, IntraClass(m, l), t_n, 9, streams))
    expected = -np.sort(-np.concatenate(per_class, axis=1), axis=1)[:, : n * m]
    assert np.allclose(z, expected, rtol=0, atol=1e-12)
    # every block is at most one class's total mass
    assert np.all(z <= n ** (1 / 3) + 1e-12)


def test_zeta_n_is_first_trial():
    one = zeta_n(30, 2, 0.0, 1.0, seed=4)
    assert np.array_equal(one.masses, zeta_many(30, 2, 0.0, 1.0, seed=4, trials=1)[0])


def test_coupled_and_fast_agree_in_law():
    n, m, t, u = 40, 2, 0.0, 1.0
    trials = 3000
    coupled = zeta_many(n, m, t, u, seed=13, trials=trials, threads=2)
    fast = fast_many(SbmParams.critical(n, m, t, u), seed=13, trials=trials, threads=2) * n ** (-2 / 3)
    res = stats.ks_two_sample(stats.functional(coupled), stats.functional(fast))
    assert not res.rejected, res


@pytest.mark.parametrize("threads", [1, 3])
def test_thread_count_never_changes_samples(threads):
    params = SbmParams.critical(50, 2, 0.0, 1.0)
    assert np.array_equal(fast_many(params, 5, trials=300, threads=threads), fast_many(params, 5, trials=300, threads=2))
    assert np.array_equal(
        zeta_many(30, 2, 0.0, 1.0, 5, trials=300, threads=threads), zeta_many(30, 2, 0.0, 1.0, 5, trials=300, threads=2)
    )


def test_largest_component_without_edges():
    lc = largest_component(SbmParams.raw(27, 2, 0.0, 0.0), trials=10, seed=0)
    assert np.allclose(lc.samples, 27 ** (-2 / 3))
    assert lc.exceeds(1.0) == 0.0
    assert lc.cdf(1.0) == 1.0
    assert LargestComponent(np.array([1.0, 2.0, 3.0, 4.0])).cdf(2.5) == 0.5


def test_supercritical_giant_fraction_concentrates():
    fractions = []
    for n in (500, 2000):
        params = regime_params("supercritical", n, m=2, c=1.5, d=1.0)
        lc = largest_component(params, trials=100, seed=1, threads=2)
        fractions.append(lc.samples * n ** (2 / 3) / params.vertices)
    # c + (m-1) d = 2.5 > m = 2: a giant of positive fraction, spread shrinking in n
    assert np.mean(fractions[1]) > 0.2
    assert np.std(fractions[1]) < np.std(fractions[0])


def test_subcritical_window_below_critical_window():
    n, trials = 400, 1000
    below = SbmParams.raw(n, 2, 1 / n - n**-1.25, n ** (-4 / 3))
    window = SbmParams.critical(n, 2, 0.0, 1.0)
    p_below = largest_component(below, trials, seed=2, threads=2).exceeds(2.0)
    p_window = largest_component(window, trials, seed=3, threads=2).exceeds(2.0)
    assert p_below < p_window
