"""Deterministic parallel execution of Monte Carlo trials.

Trials are cut into fixed-size chunks that do not depend on the thread
count, each chunk draws its randomness from its own trial indices, and the
results are concatenated in trial order.  So ``threads`` changes wall time
only, never output.
"""

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

CHUNK = 256


def default_threads():
    return os.cpu_count() or 1


def run_trials(fn, trials, threads=None, chunk=CHUNK):
    """Concatenate ``fn(start, count)`` over consecutive trial chunks.

    ``fn`` must return an array whose first axis has length ``count``.
    """
    trials = int(trials)
    if trials < 0:
        raise ValueError("trials must be nonnegative")
    spans = [(s, min(chunk, trials - s)) for s in range(0, trials, chunk)]
    if not spans:
        return np.asarray(fn(0, 0))
    threads = default_threads() if threads is None else int(threads)
    if threads <= 1 or len(spans) == 1:
        parts = [fn(s, c) for s, c in spans]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda sc: fn(*sc), spans))
    return np.concatenate(parts, axis=0)
