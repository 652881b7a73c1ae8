"""Counter-based table of i.i.d. exponential(1) edge thresholds.

A :class:`ThresholdField` is a pure function ``(i, j) -> A[min(i,j), max(i,j)]``.
Each variate is produced by running Philox-4x32-10 on the counter
``(min(i,j), max(i,j), stream_id)`` keyed by ``seed``, mapping the 64-bit
output word ``k`` to ``u = (floor(k / 2**11) + 1/2) / 2**53`` in (0, 1), and
returning ``-log(u)``.  Nothing is stored, so any entry of the infinite table is
available in O(1), and the same edge always gets the same threshold.
"""

from dataclasses import dataclass, replace

import numpy as np

from . import kernels

#: Stream ids reserved per Monte Carlo trial; copies (A, A', A~, ...) of one
#: trial are consecutive inside its block.
STREAM_STRIDE = 8

# copy slots within a trial's block
COPY_A = 0
COPY_A_PRIME = 1
COPY_A_TILDE = 2
COPY_JUMP = 3
COPY_FAST = 4

_U64 = (1 << 64) - 1


def parse_u64(text):
    """Parse a decimal or ``0x``-prefixed 64-bit unsigned integer."""
    value = int(str(text), 0)
    if not 0 <= value <= _U64:
        raise ValueError(f"{text!r} is not a 64-bit unsigned integer")
    return value


def trial_stream(base, trial, copy=COPY_A):
    """Stream id of ``copy`` for Monte Carlo trial number ``trial``."""
    return (int(base) + int(trial) * STREAM_STRIDE + int(copy)) & _U64


def trial_streams(base, trials, copy=COPY_A, start=0):
    idx = np.arange(start, start + trials, dtype=np.uint64)
    return (np.uint64(base) + idx * np.uint64(STREAM_STRIDE) + np.uint64(copy)).astype(np.uint64)


@dataclass(frozen=True)
class ThresholdField:
    """The infinite symmetric matrix of exponential(1) thresholds.

    ``offset`` realises the shifted table ``A[i+m, j+m]`` as a view of the
    same randomness; it is not a new seed.
    """

    seed: int
    stream_id: int = 0
    offset: int = 0

    def __post_init__(self):
        for name in ("seed", "stream_id"):
            value = getattr(self, name)
            if not 0 <= int(value) <= _U64:
                raise ValueError(f"{name} must be a 64-bit unsigned integer, got {value}")
        if self.offset < 0:
            raise ValueError("offset must be nonnegative")

    def evaluate(self, i, j):
        i = int(i)
        j = int(j)
        if i < 1 or j < 1:
            raise ValueError("vertex indices are positive integers")
        if i == j:
            raise ValueError(f"no threshold on the loop {{{i},{i}}}")
        hi = max(i, j) + self.offset
        if hi > kernels.MAX_INDEX:
            raise ValueError(f"vertex index {hi} exceeds {kernels.MAX_INDEX}")
        return float(kernels.exp_thresholds(self.seed, self.stream_id, i + self.offset, j + self.offset))

    __call__ = evaluate

    def evaluate_many(self, i, j):
        """Vectorised :meth:`evaluate` over arrays of 1-based indices."""
        i = np.asarray(i, dtype=np.int64)
        j = np.asarray(j, dtype=np.int64)
        if np.any(i == j):
            raise ValueError("no threshold on loops")
        if i.size and (min(i.min(), j.min()) < 1):
            raise ValueError("vertex indices are positive integers")
        return kernels.exp_thresholds(self.seed, self.stream_id, i + self.offset, j + self.offset)

    def shifted(self, m):
        """The table ``(i, j) -> A[i+m, j+m]``."""
        return replace(self, offset=self.offset + int(m))

    def copy(self, k=1):
        """An independent copy: the stream id advanced by ``k``."""
        return replace(self, stream_id=(self.stream_id + int(k)) & _U64, offset=0)

    def for_trial(self, trial, copy=COPY_A):
        return replace(self, stream_id=trial_stream(self.stream_id, trial, copy))
