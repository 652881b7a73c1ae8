"""Finite multiplicative coalescent as a Markov jump process.

Each pair of blocks with masses x, y merges at rate x*y.  This is simulated
directly (exponential holding times, pair chosen with probability
proportional to x_i x_j) and serves as an oracle independent of the
threshold-table construction in :mod:`rmmsim.engine`.
"""

import bisect
import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .engine import ComponentVector, as_mass_vector
from .errors import DomainError
from .field import COPY_JUMP, trial_stream


@dataclass
class Trajectory:
    """Piecewise-constant path: ``states[k]`` holds on ``[times[k], times[k+1])``."""

    times: list = field(default_factory=list)
    states: list = field(default_factory=list)
    horizon: float = 0.0

    def state_at(self, t):
        if t < 0 or t > self.horizon:
            raise ValueError(f"t={t} outside [0, {self.horizon}]")
        k = bisect.bisect_right(self.times, t) - 1
        return self.states[k]

    @property
    def jumps(self):
        return len(self.times) - 1

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["time", "block_count", "norm_sq", "largest_mass"])
        for time, state in zip(self.times, self.states):
            writer.writerow([repr(float(time)), state.length, repr(state.norm_sq), repr(state.largest)])
        return buf.getvalue()


def _sorted_state(blocks, width):
    out = np.zeros(width)
    out[: len(blocks)] = sorted(blocks, reverse=True)
    return ComponentVector(out)


def _pick(cum, total, u):
    return min(bisect.bisect_right(cum, u * total), len(cum) - 1)


def simulate_jump_process(x, T, rng):
    """Simulate the coalescent from ``x`` on ``[0, T]``.

    ``rng`` is a :class:`numpy.random.Generator`.  The holding time in a
    state is exponential with rate ``sum_{i<j} x_i x_j``; the merging pair is
    drawn by picking both endpoints proportional to mass and rejecting equal
    picks.
    """
    x = as_mass_vector(x)
    T = float(T)
    if not T >= 0:
        raise DomainError("horizon must be nonnegative")
    width = x.size
    blocks = [float(v) for v in x if v > 0]
    traj = Trajectory(times=[0.0], states=[_sorted_state(blocks, width)], horizon=T)
    now = 0.0
    while len(blocks) > 1:
        total = sum(blocks)
        rate = 0.5 * (total * total - sum(b * b for b in blocks))
        if rate <= 0:
            break
        now += rng.exponential(1.0 / rate)
        if now > T:
            break
        cum = list(np.cumsum(blocks))
        while True:
            a = _pick(cum, total, rng.random())
            b = _pick(cum, total, rng.random())
            if a != b:
                break
        merged = blocks[a] + blocks[b]
        blocks = [v for k, v in enumerate(blocks) if k != a and k != b]
        blocks.append(merged)
        traj.times.append(now)
        traj.states.append(_sorted_state(blocks, width))
    return traj


def martingale_functional(traj, t):
    """||X(t)||^2 minus the integral of ||X(s)||^4 - sum_k X_k(s)^4 over [0, t].

    Exact, since the path is piecewise constant.
    """
    if t < 0 or t > traj.horizon:
        raise ValueError(f"trajectory does not cover [0, {t}]")
    integral = 0.0
    for k, state in enumerate(traj.states):
        start = traj.times[k]
        if start >= t:
            break
        stop = traj.times[k + 1] if k + 1 < len(traj.times) else t
        stop = min(stop, t)
        m = state.masses
        integral += (state.norm_sq**2 - float(np.sum(m**4))) * (stop - start)
    return traj.state_at(t).norm_sq - integral


def moment_norms(v, p=4):
    """``sum_k v_k^p`` for even ``p``."""
    if p < 2 or p % 2:
        raise ValueError("p must be an even integer >= 2")
    v = np.asarray(v, dtype=np.float64)
    return float(np.sum(v**p))


def norm_fourth(v):
    """``||v||^4 = (sum_k v_k^2)^2``."""
    v = np.asarray(v, dtype=np.float64)
    return float(np.dot(v, v) ** 2)


def trial_rng(seed, base_stream, trial):
    return np.random.default_rng([int(seed), trial_stream(base_stream, trial, COPY_JUMP)])


def final_states(x, T, seed, base_stream, trials, start=0):
    """(trials, n) array of X(T) rows from independent trajectories."""
    x = as_mass_vector(x)
    out = np.zeros((trials, x.size))
    for k in range(trials):
        traj = simulate_jump_process(x, T, trial_rng(seed, base_stream, start + k))
        out[k] = traj.states[-1].masses
    return out


def martingale_samples(x, t, seed, base_stream, trials, start=0):
    x = as_mass_vector(x)
    out = np.empty(trials)
    for k in range(trials):
        traj = simulate_jump_process(x, t, trial_rng(seed, base_stream, start + k))
        out[k] = martingale_functional(traj, t)
    return out
