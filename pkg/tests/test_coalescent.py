import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats as sps

from rmmsim import stats
from rmmsim.coalescent import (
    final_states,
    martingale_functional,
    martingale_samples,
    moment_norms,
    norm_fourth,
    simulate_jump_process,
    trial_rng,
)
from rmmsim.errors import DomainError
from rmmsim.oracle import enumerate_law
from rmmsim.relations import MAXIMAL

masses = st.lists(st.floats(0.05, 2), min_size=1, max_size=8)


def test_single_block_never_jumps():
    traj = simulate_jump_process([2.5], 10.0, np.random.default_rng(0))
    assert traj.jumps == 0
    for t in (0.0, 1.0, 10.0):
        assert martingale_functional(traj, t) == 6.25


@given(masses, st.floats(0, 3), st.integers(0, 2**32))
def test_trajectory_invariants(x, T, seed):
    traj = simulate_jump_process(x, T, np.random.default_rng(seed))
    counts = [s.length for s in traj.states]
    assert counts == list(range(counts[0], counts[0] - len(counts), -1))
    for s in traj.states:
        assert s.total == pytest.approx(sum(x))
    assert all(a < b for a, b in zip(traj.times, traj.times[1:]))
    assert traj.times[-1] <= T
    assert martingale_functional(traj, 0.0) == pytest.approx(float(np.dot(x, x)))


def test_two_blocks_first_merge_is_exponential():
    times = []
    for k in range(4000):
        traj = simulate_jump_process([1, 1], 100.0, np.random.default_rng([3, k]))
        times.append(traj.times[1])
    assert sps.kstest(times, "expon").pvalue > 1e-3


def test_two_blocks_merge_probability():
    t = 0.7
    rows = final_states([1, 1], t, seed=5, base_stream=0, trials=20000)
    merged = int(np.sum(rows[:, 0] == 2.0))
    ci = stats.proportion_ci(merged, 20000, level=0.999)
    assert ci.low <= 1 - math.exp(-t) <= ci.high


def test_two_block_martingale_mean_is_exact():
    # M(t) = 4 - 2 tau after a merge at tau, 2 - 2t otherwise; E M(t) = 2
    t = 0.5
    v = martingale_samples([1, 1], t, seed=8, base_stream=0, trials=20000)
    est = stats.mean_ci(v)
    assert abs(est.mean - 2.0) <= 3 * est.stderr


def test_three_blocks_block_count_matches_oracle():
    t = 0.6
    law = enumerate_law([1, 1, 1], MAXIMAL, t)
    probs = [law.probability(lambda v, k=k: v.length == k) for k in (1, 2, 3)]
    rows = final_states([1, 1, 1], t, seed=12, base_stream=0, trials=20000)
    counts = np.bincount(np.count_nonzero(rows, axis=1), minlength=4)[1:]
    res = sps.chisquare(counts, np.array(probs) * counts.sum())
    assert res.pvalue > 1e-3


def test_state_at_and_horizon():
    traj = simulate_jump_process([1, 1, 1], 2.0, np.random.default_rng(1))
    assert traj.state_at(0.0).length == 3
    with pytest.raises(ValueError):
        traj.state_at(2.5)
    with pytest.raises(ValueError):
        martingale_functional(traj, 3.0)
    with pytest.raises(DomainError):
        simulate_jump_process([1, 1], -1.0, np.random.default_rng(0))


def test_trajectory_csv():
    traj = simulate_jump_process([1, 1], 50.0, np.random.default_rng(2))
    lines = traj.to_csv().splitlines()
    assert lines[0] == "time,block_count,norm_sq,largest_mass"
    assert lines[1] == "0.0,2,2.0,1.0"
    assert lines[-1].split(",")[1:] == ["1", "4.0", "2.0"]


def test_moment_norms_examples():
    assert moment_norms([2, 1], 4) == 17
    assert moment_norms([0, 0], 4) == 0
    assert norm_fourth([1, 1, 1]) == 9
    with pytest.raises(ValueError):
        moment_norms([1], 3)


def test_trials_are_reproducible_and_independent():
    a = final_states([1, 0.5, 0.5], 1.0, 4, 0, 50)
    b = final_states([1, 0.5, 0.5], 1.0, 4, 0, 50)
    assert np.array_equal(a, b)
    c = final_states([1, 0.5, 0.5], 1.0, 4, 0, 30, start=20)
    assert np.array_equal(a[20:], c)
    r1 = trial_rng(4, 0, 0).random()
    r2 = trial_rng(4, 0, 1).random()
    assert r1 != r2
