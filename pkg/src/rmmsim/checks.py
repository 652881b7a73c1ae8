"""The verification suite: every inequality and distributional identity as a check.

A check is a function ``(ctx) -> list[CheckRow]``.  Each row states a
comparison ``lhs <= rhs``; exact checks use oracle values, statistical ones
use test statistics against critical values or confidence bounds.  Every
check draws from its own block of stream ids, so running a subset gives the
same rows as running the whole suite.

Bounds are looked up through the :mod:`rmmsim.stats` module at call time, so
a corrupted bound (as in the negative-control test) is seen by the suite.
"""

import itertools
import math
from dataclasses import asdict, dataclass

import numpy as np

from . import stats
from .coalescent import final_states, martingale_samples
from .couplings import glue_samples, grinding_samples, plain_samples, split_samples
from .engine import build_components, open_edges, rmm, rmm_many, tail_shift
from .field import ThresholdField, trial_stream, trial_streams
from .oracle import Enumeration, disjoint_occurrence_probability, enumerate_law, outcome_key
from .relations import (
    EMPTY,
    MAXIMAL,
    ExplicitEdgeSet,
    InterClass,
    IntraClass,
    Shifted,
    UpDown,
    parse_relation,
)
from .sbm import SbmParams, critical_times, fast_many, zeta_many

#: Gap between the stream blocks of consecutive checks.
CHECK_STRIDE = 1 << 40
#: Offset of the fresh streams used when a two-sample test is rerun.
RETRY_OFFSET = 1 << 39
#: Relative slack for per-seed norm comparisons whose two sides may be
#: summed in different orders.
REL_TOL = 1e-12


@dataclass(frozen=True)
class CheckRow:
    name: str
    lhs: float
    rhs: float
    satisfied: bool
    trials: int
    seed: int
    stream_id: int

    def as_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class Context:
    seed: int
    stream_id: int
    threads: int = 1


def _row(ctx, name, lhs, rhs, trials=0, stream_id=None, satisfied=None):
    lhs = float(lhs)
    rhs = float(rhs)
    ok = lhs <= rhs if satisfied is None else bool(satisfied)
    sid = ctx.stream_id if stream_id is None else int(stream_id)
    return CheckRow(name, lhs, rhs, bool(ok), int(trials), int(ctx.seed), sid)


def _ks_row(ctx, name, sampler, trials):
    """KS row for ``sampler(base_stream) -> (a, b)``, rerun once on rejection."""
    base = ctx.stream_id
    a, b = sampler(base)
    res = stats.ks_two_sample(a, b)
    if res.rejected:
        base = ctx.stream_id + RETRY_OFFSET
        a, b = sampler(base)
        res = stats.ks_two_sample(a, b)
    return _row(ctx, name, res.statistic, res.threshold, trials, base)


# -- fixtures -----------------------------------------------------------------

#: Small instances for the exact bound checks (at most six vertices).
EXACT_MASSES = [
    (0.5, 0.5, 0.5),
    (1.0, 0.6, 0.3),
    (0.8, 0.5, 0.5, 0.2),
    (0.7, 0.0, 0.4, 0.3),
    (0.6, 0.5, 0.4, 0.3, 0.2),
    (0.5, 0.4, 0.4, 0.3, 0.2, 0.1),
]
#: Values of t ||x||^2 used with every fixture.
LOAD_FACTORS = (0.3, 0.6, 0.9)


def exact_instances():
    for x in EXACT_MASSES:
        s = float(np.dot(x, x))
        for load in LOAD_FACTORS:
            yield np.array(x), load / s


#: Instances for the oracle-equivalence check: (masses, relation text, t).
ORACLE_INSTANCES = [
    ((1.0, 1.0), "maximal", 0.7),
    ((1.0, 1.0, 1.0), "maximal", math.log(2)),
    ((0.5, 0.5, 0.5), "maximal", 1.0),
    ((2.0, 1.0, 0.5), "maximal", 0.4),
    ((1.0, 0.8, 0.6, 0.4), "maximal", 0.8),
    ((1.2, 0.9, 0.6, 0.3, 0.1), "maximal", 0.6),
    ((1.0, 1.0, 1.0, 1.0), "inter:2", 0.5),
    ((1.0, 0.7, 0.5, 0.4, 0.2), "inter:2", 1.0),
    ((0.9, 0.8, 0.7, 0.6, 0.5), "inter:3", 0.9),
    ((1.0, 0.5, 1.0, 0.5), "intra:2,1", 1.2),
    ((1.0, 0.9, 0.8, 0.7, 0.6), "union(intra:2,1,intra:2,2)", 0.7),
    ((1.0, 0.6, 0.3, 0.2), "updown:2(maximal)", 1.5),
    ((1.1, 0.8, 0.6, 0.5, 0.3), "updown:1(maximal)", 1.0),
    ((0.7, 0.7, 0.7, 0.7, 0.7), "shift:1(inter:2)", 1.3),
    ((1.0, 0.0, 0.8, 0.5), "maximal", 1.0),
    ((1.5, 1.0, 0.5), "edges:1-2;2-3", 0.6),
    ((1.0, 0.9, 0.5, 0.4, 0.3), "edges:1-3;2-4;3-5;1-5", 1.4),
    ((0.6, 0.6, 0.6, 0.6, 0.6), "union(updown:2(maximal),edges:3-4)", 1.1),
    ((2.0, 0.3, 0.3, 0.3), "maximal", 0.9),
    ((0.8, 0.8, 0.4, 0.4, 0.2), "union(inter:2,edges:1-3)", 0.8),
    ((1.0, 1.0, 0.5), "empty", 1.0),
]

GLUE_MASSES = (1.0, 0.8, 0.6, 0.5, 0.4, 0.3)


# -- threshold field ----------------------------------------------------------


def check_threshold_marginal(ctx, samples=100_000, alpha=1e-3):
    f = ThresholdField(ctx.seed, ctx.stream_id)
    i = np.arange(1, samples + 1, dtype=np.int64)
    v = f.evaluate_many(i, i + 1 + (i % 7))
    ks = stats.ks_one_sample_exp(v)
    est = stats.mean_ci(v)
    crit = math.sqrt(-math.log(alpha / 2) / 2) / math.sqrt(samples)
    return [
        _row(ctx, "threshold_marginal_ks", ks, crit, samples),
        _row(ctx, "threshold_marginal_mean", abs(est.mean - 1.0), est.half_width, samples),
    ]


# -- exact oracle comparisons ---------------------------------------------------


def _law_counts(law, rows):
    keys = [outcome_key(v.masses) for v, _ in law.outcomes]
    index = {k: n for n, k in enumerate(keys)}
    uniq, counts = np.unique(np.round(rows, 10), axis=0, return_counts=True)
    out = np.zeros(len(keys))
    stray = 0
    for u, c in zip(uniq, counts):
        k = outcome_key(u)
        if k in index:
            out[index[k]] += c
        else:
            stray += c
    return out, np.array([p for _, p in law.outcomes]), stray


def check_oracle_equivalence(ctx, trials=100_000, alpha=1e-3):
    rows = []
    for n_inst, (x, rel_text, t) in enumerate(ORACLE_INSTANCES):
        rel = parse_relation(rel_text)
        law = enumerate_law(x, rel, t)
        base = ctx.stream_id + n_inst * (trials * 8 + 64)
        streams = trial_streams(base, trials)
        sample = rmm_many(np.array(x), rel, t, ctx.seed, streams)
        counts, probs, stray = _law_counts(law, sample)
        res = stats.chi_square_gof(counts, probs, alpha)
        crit = stats.chi_square_critical(alpha, res.dof)
        name = f"oracle_equivalence[{n_inst}]"
        if stray:
            rows.append(_row(ctx, name, math.inf, crit, trials, base))
        else:
            rows.append(_row(ctx, name, res.statistic, crit, trials, base, satisfied=not res.rejected))
    return rows


def check_pair_connection(ctx):
    rows = []
    for x, t in exact_instances():
        enum = Enumeration(x, MAXIMAL, t)
        for i, j in itertools.combinations(range(1, x.size + 1), 2):
            rows.append(_row(ctx, f"pair_connection[{_tag(x, t)}|{i},{j}]", enum.connect([i, j]), stats.bound_pair_connection(x, t, i, j)))
    return rows


def check_cut_connection(ctx):
    rows = []
    for x, t in exact_instances():
        for m in range(1, x.size):
            enum = Enumeration(x, UpDown(MAXIMAL, m), t)
            for i, j in itertools.combinations(range(1, x.size + 1), 2):
                bound = stats.bound_cut_connection(x, t, m, i, j)
                rows.append(_row(ctx, f"cut_connection[{_tag(x, t)}|m={m}|{i},{j}]", enum.connect([i, j]), bound))
    return rows


def check_tail_polynomial(ctx, eps_list=(0.05, 0.2, 1.0)):
    rows = []
    for x, t in exact_instances():
        for m in (1, 2):
            law = enumerate_law(x, UpDown(MAXIMAL, m), t)
            a = float(np.dot(x[:m], x[:m]))
            for eps in eps_list:
                p = law.probability(lambda v, a=a, eps=eps: v.norm_sq - a >= eps)
                bound = stats.bound_tail_probability(x, t, m, eps)
                rows.append(_row(ctx, f"tail_polynomial[{_tag(x, t)}|m={m}|eps={eps}]", p, bound))
    return rows


def _pair_lists(n):
    lists = [[(1, 2), (1, 2)], [(1, 3), (2, 3)], [(1, 2), (2, 3), (1, 3)]]
    if n >= 4:
        lists += [[(1, 2), (3, 4)], [(1, 4), (2, 3)]]
    return lists


def check_disjoint_occurrence(ctx):
    rows = []
    for x, t in exact_instances():
        if x.size > 5:
            continue
        enum = Enumeration(x, MAXIMAL, t)
        for pl in _pair_lists(x.size):
            lhs = disjoint_occurrence_probability(x, t, pl)
            rhs = math.prod(enum.connect(p) for p in pl)
            label = ";".join(f"{a}-{b}" for a, b in pl)
            rows.append(_row(ctx, f"disjoint_occurrence[{_tag(x, t)}|{label}]", lhs, rhs))
    return rows


def check_multi_connection(ctx):
    rows = []
    for x, t in exact_instances():
        enum = Enumeration(x, MAXIMAL, t)
        for k in (3, 4):
            for idx in itertools.combinations(range(1, x.size + 1), k):
                rows.append(_row(ctx, f"multi_connection[{_tag(x, t)}|{idx}]", enum.connect(idx), stats.bound_multi_connection(x, t, idx)))
    return rows


def check_fourth_power_sum(ctx):
    rows = []
    for x, t in exact_instances():
        law = enumerate_law(x, MAXIMAL, t)
        lhs = law.expectation(lambda v: float(np.sum(v.masses**4)))
        rows.append(_row(ctx, f"fourth_power_sum[{_tag(x, t)}]", lhs, stats.bound_fourth_norm(x, t)))
    return rows


def _tag(x, t):
    return ",".join(f"{v:g}" for v in x) + f"|t={t:.6g}"


# -- per-seed couplings --------------------------------------------------------


def _random_masses(rng, n):
    x = rng.exponential(1.0, n)
    x[rng.random(n) < 0.15] = 0.0
    return x


def _random_relation(rng, n):
    kind = rng.integers(6)
    if kind == 0:
        return MAXIMAL
    if kind == 1:
        return InterClass(int(rng.integers(2, 4)))
    if kind == 2:
        m = int(rng.integers(1, 4))
        return IntraClass(m, int(rng.integers(1, m + 1)))
    if kind == 3:
        return UpDown(MAXIMAL, int(rng.integers(1, max(2, n))))
    if kind == 4:
        return InterClass(2) | IntraClass(3, 1)
    i, j = MAXIMAL.pairs(n)
    keep = rng.random(i.size) < 0.5
    return ExplicitEdgeSet(zip(i[keep].tolist(), j[keep].tolist()))


def _sub_relation(rng, rel, n):
    kind = rng.integers(4)
    if kind == 0:
        return rel
    if kind == 1:
        return EMPTY
    if kind == 2:
        return UpDown(rel, int(rng.integers(1, max(2, n))))
    i, j = rel.pairs(n)
    keep = rng.random(i.size) < 0.6
    return ExplicitEdgeSet(zip(i[keep].tolist(), j[keep].tolist()))


def check_monotone_coupling(ctx, trials=10_000):
    rng = np.random.default_rng([ctx.seed, ctx.stream_id])
    norm_bad = 0
    edge_bad = 0
    for k in range(trials):
        n = int(rng.integers(2, 13))
        y = _random_masses(rng, n)
        x = y * rng.random(n)
        r2 = _random_relation(rng, n)
        r1 = _sub_relation(rng, r2, n)
        t2 = float(rng.exponential(1.0)) * 2 / max(1.0, float(np.dot(y, y)))
        t1 = t2 * float(rng.random())
        f = ThresholdField(ctx.seed, trial_stream(ctx.stream_id, k))
        lo = rmm(x, f, r1, t1).norm
        hi = rmm(y, f, r2, t2).norm
        if lo > hi * (1 + REL_TOL):
            norm_bad += 1
        e1 = set(zip(*[a.tolist() for a in open_edges(x, f, r1, t1)]))
        e2 = set(zip(*[a.tolist() for a in open_edges(x, f, r2, t2)]))
        if not e1 <= e2:
            edge_bad += 1
    return [
        _row(ctx, "monotone_coupling_norm_violations", norm_bad, 0, trials),
        _row(ctx, "monotone_coupling_edge_violations", edge_bad, 0, trials),
    ]


def check_shift_inequality(ctx, trials=10_000, shifts=(1, 2, 5)):
    rows = []
    for m in shifts:
        base = ctx.stream_id + m * (trials * 8 + 64)
        rng = np.random.default_rng([ctx.seed, base])
        bad = 0
        for k in range(trials):
            n = int(rng.integers(m + 1, 51))
            x = _random_masses(rng, n)
            rel = _random_relation(rng, n)
            t = float(rng.exponential(1.0)) * 2 / max(1e-9, float(np.dot(x, x)))
            f = ThresholdField(ctx.seed, trial_stream(base, k))
            full = rmm(x, f, rel, t)
            lhs = float(np.linalg.norm(full.masses[m:]))
            rhs = rmm(tail_shift(x, m), f.shifted(m), Shifted(rel, m), t).norm
            if lhs > rhs * (1 + REL_TOL) + REL_TOL * full.total:
                bad += 1
        rows.append(_row(ctx, f"shift_inequality_violations[m={m}]", bad, 0, trials, base))
    return rows


# -- Monte Carlo identities ----------------------------------------------------


def check_glue(ctx, trials=10_000):
    cases = [
        ("glue[inter:2,m=3]", GLUE_MASSES, parse_relation("inter:2"), 3, 0.7),
        ("glue[empty,m=2]", (1.0, 0.7, 0.5, 0.3, 0.2), EMPTY, 2, 0.9),
        ("glue[maximal,m=support]", (1.0, 0.7, 0.5), MAXIMAL, 3, 0.8),
    ]
    rows = []
    for n_case, (name, x, rel, m, t) in enumerate(cases):
        sub = Context(ctx.seed, ctx.stream_id + n_case * (1 << 36), ctx.threads)

        def sampler(base, x=x, rel=rel, m=m, t=t):
            a, b = glue_samples(x, rel, m, t, trials, ctx.seed, base, ctx.threads)
            return stats.functional(a), stats.functional(b)

        rows.append(_ks_row(sub, name, sampler, trials))
    return rows


def check_head_tail_split(ctx, trials=10_000, eps_list=(0.25, 0.5, 1.0)):
    x = np.array(GLUE_MASSES)
    rel = parse_relation("inter:2")
    m = 3
    t = 0.7
    streams = trial_streams(ctx.stream_id, trials)
    z = rmm_many(x, rel, t, ctx.seed, streams)
    head, tail = split_samples(x, rel, m, t, ctx.seed, streams)
    zn = np.sum(z**2, axis=1)
    hn = np.sum(head**2, axis=1)
    tn = np.sum(tail**2, axis=1)
    rows = []
    for eps in eps_list:
        hits = int(np.sum(zn - hn >= eps))
        lhs = stats.proportion_ci(hits, trials).high
        rhs = np.mean(tn) * np.mean([stats.tail_polynomial(t, s) for s in hn]) / eps
        rows.append(_row(ctx, f"head_tail_split[eps={eps}]", lhs, rhs, trials))
    return rows


def check_uniform_tail(ctx, trials=5_000, T=1.0, m=3, eps=0.5, sizes=(5, 10, 20, 40)):
    rows = []
    for n in sizes:
        x = np.array([1.0 / k for k in range(1, n + 1)])
        bound = stats.bound_tail_second_moment(x, T, m)
        base = ctx.stream_id + n * (trials * 8 + 64)
        streams = trial_streams(base, trials)
        tail = rmm_many(tail_shift(x, m), Shifted(MAXIMAL, m), T, ctx.seed, streams, offset=m)
        est = stats.mean_ci(np.sum(tail**2, axis=1))
        rows.append(_row(ctx, f"uniform_tail[n={n}]", est.high, eps, trials, base))
        rows.append(_row(ctx, f"uniform_tail_vs_bound[n={n}]", est.low, bound, trials, base))
    return rows


MARTINGALE_FIXTURES = [
    ((1.0, 1.0), 0.5),
    ((1.0, 0.6, 0.3), 0.8),
    ((0.5, 0.4, 0.3, 0.3, 0.2, 0.2, 0.1, 0.1), 1.0),
]


def martingale_row(ctx, n_fix, trials):
    x, t = MARTINGALE_FIXTURES[n_fix]
    base = ctx.stream_id + n_fix * (trials * 8 + 64)
    s = martingale_samples(x, t, ctx.seed, base, trials)
    est = stats.mean_ci(s)
    target = float(np.dot(x, x))
    return _row(ctx, f"martingale[{n_fix}]", abs(est.mean - target), 3 * est.stderr, trials, base)


def check_martingale(ctx, trials=20_000):
    return [martingale_row(ctx, k, trials) for k in range(len(MARTINGALE_FIXTURES))]


JUMP_FIXTURES = [
    (1.0, 1.0, 1.0),
    (1.2, 0.9, 0.7, 0.6, 0.4, 0.3, 0.2, 0.1),
]


def check_jump_vs_graphical(ctx, trials=10_000, times=(0.2, 0.5)):
    rows = []
    case = 0
    for x in JUMP_FIXTURES:
        for t in times:
            for kind in ("largest", "block_count"):
                sub = Context(ctx.seed, ctx.stream_id + case * (1 << 36), ctx.threads)
                case += 1

                def sampler(base, x=x, t=t, kind=kind):
                    jump = final_states(x, t, ctx.seed, base, trials)
                    graph = plain_samples(x, t, trials, ctx.seed, base, ctx.threads)
                    return stats.functional(jump, kind), stats.functional(graph, kind)

                rows.append(_ks_row(sub, f"jump_vs_graphical[{len(x)}|t={t}|{kind}]", sampler, trials))
    return rows


GRINDING_CASES = [
    ((2.0, 1.0), 1, 2, 0.5),
    ((1.0, 0.7, 0.5), 2, 2, 1.0),
]


def check_grinding(ctx, trials=10_000):
    rows = []
    for n_case, (x, m, M, t) in enumerate(GRINDING_CASES):
        sub = Context(ctx.seed, ctx.stream_id + n_case * (1 << 36), ctx.threads)
        accept = {}

        def sampler(base, x=x, m=m, M=M, t=t):
            ground, got, drawn = grinding_samples(x, m, M, t, trials, ctx.seed, base, ctx.threads)
            accept["got"] = got
            accept["drawn"] = drawn
            plain = plain_samples(x, 1.5 * t, trials, ctx.seed, base, ctx.threads)
            return stats.functional(plain), stats.functional(ground)

        name = f"grinding[{n_case}]"
        rows.append(_ks_row(sub, name, sampler, trials))
        pieces = [np.full(M, v / M) for v in x[:m]]
        exact = math.prod(Enumeration(p, MAXIMAL, t).connect(range(1, M + 1)) for p in pieces)
        ci = stats.proportion_ci(accept["got"], accept["drawn"])
        miss = max(ci.low - exact, exact - ci.high, 0.0)
        rows.append(_row(sub, f"{name}_event_probability", miss, 0.0, accept["drawn"]))
    return rows


def check_moments(ctx, trials=20_000):
    x = np.array([0.5, 0.5, 0.5])
    rows = []
    t = 1.0
    law = enumerate_law(x, MAXIMAL, t)
    sample = plain_samples(x, t, trials, ctx.seed, ctx.stream_id, ctx.threads)
    fourth = stats.mean_ci(np.sum(sample**4, axis=1))
    rows.append(_row(ctx, "moments_fourth_sum_vs_bound", fourth.high, stats.bound_fourth_norm(x, t), trials))
    exact = law.expectation(lambda v: float(np.sum(v.masses**4)))
    rows.append(_row(ctx, "moments_fourth_sum_vs_exact", abs(fourth.mean - exact), fourth.half_width, trials))
    # past the subcritical window: graphical and jump-process estimates agree
    t = 2.0
    graph = stats.mean_ci(np.sum(plain_samples(x, t, trials, ctx.seed, ctx.stream_id + (1 << 36)) ** 2, axis=1) ** 2)
    jump = stats.mean_ci(np.sum(final_states(x, t, ctx.seed, ctx.stream_id + (2 << 36), trials) ** 2, axis=1) ** 2)
    rows.append(_row(ctx, "moments_norm4_graph_vs_jump", abs(graph.mean - jump.mean), graph.half_width + jump.half_width, trials))
    half = stats.mean_ci(np.sum(plain_samples(x, t, trials // 2, ctx.seed, ctx.stream_id + (1 << 36)) ** 2, axis=1) ** 2)
    rows.append(_row(ctx, "moments_norm4_doubling", abs(graph.mean - half.mean), graph.half_width + half.half_width, trials))
    return rows


def check_critical_times(ctx):
    rows = []
    for n, t, u in [(100, 0.0, 1.0), (1000, 1.0, 2.0), (1600, -1.0, 0.5), (10_000, 3.0, 0.0)]:
        t_n, u_n = critical_times(n, t, u)
        s = n ** (-4.0 / 3.0)
        p = 1 / n + t * s
        q = u * s
        err_p = abs(-math.expm1(-t_n * s) - p) / p
        err_q = abs(-math.expm1(-u_n * s) - q) / q if q else abs(u_n)
        rows.append(_row(ctx, f"critical_times[n={n},t={t},u={u}]", max(err_p, err_q), 1e-12))
    return rows


def check_sbm_coupled_vs_fast(ctx, trials=10_000, sizes=((50, 2), (100, 3)), t=0.0, u=1.0):
    rows = []
    for n_case, (n, m) in enumerate(sizes):
        sub = Context(ctx.seed, ctx.stream_id + n_case * (1 << 36), ctx.threads)
        params = SbmParams.critical(n, m, t, u)

        def sampler(base, n=n, m=m, params=params):
            coupled = zeta_many(n, m, t, u, ctx.seed, base, trials, threads=ctx.threads)
            fast = fast_many(params, ctx.seed, base, trials, threads=ctx.threads) * n ** (-2.0 / 3.0)
            return stats.functional(coupled), stats.functional(fast)

        rows.append(_ks_row(sub, f"sbm_coupled_vs_fast[n={n},m={m}]", sampler, trials))
    return rows


def check_sbm_class_structure(ctx, trials=200, n=30, m=3, t=0.5):
    """Intra-class merging alone never joins vertices of different classes."""
    t_n, _ = critical_times(n, t, 0.0)
    x = np.full(n * m, n ** (-2.0 / 3.0))
    rel = IntraClass(m, 1)
    for l in range(2, m + 1):
        rel = rel | IntraClass(m, l)
    mixed = 0
    for k in range(trials):
        f = ThresholdField(ctx.seed, trial_stream(ctx.stream_id, k))
        for comp in build_components(x, f, rel, t_n):
            if len({(v - 1) % m for v in comp}) > 1:
                mixed += 1
    return [_row(ctx, "sbm_class_structure_mixed", mixed, 0, trials)]


CHECKS = {
    "threshold_marginal": check_threshold_marginal,
    "oracle_equivalence": check_oracle_equivalence,
    "monotone_coupling": check_monotone_coupling,
    "shift_inequality": check_shift_inequality,
    "pair_connection": check_pair_connection,
    "cut_connection": check_cut_connection,
    "tail_polynomial": check_tail_polynomial,
    "disjoint_occurrence": check_disjoint_occurrence,
    "multi_connection": check_multi_connection,
    "fourth_power_sum": check_fourth_power_sum,
    "glue": check_glue,
    "head_tail_split": check_head_tail_split,
    "uniform_tail": check_uniform_tail,
    "martingale": check_martingale,
    "jump_vs_graphical": check_jump_vs_graphical,
    "grinding": check_grinding,
    "moments": check_moments,
    "critical_times": check_critical_times,
    "sbm_coupled_vs_fast": check_sbm_coupled_vs_fast,
    "sbm_class_structure": check_sbm_class_structure,
}


def check_stream(name):
    """Base stream id of a named check."""
    return (list(CHECKS).index(name) + 1) * CHECK_STRIDE


def run_checks(seed, only=None, threads=1):
    """Run the named checks (all by default) and return their rows in order."""
    names = list(CHECKS) if not only else list(only)
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise KeyError(f"unknown checks: {', '.join(unknown)}")
    rows = []
    for name in names:
        ctx = Context(int(seed), check_stream(name), int(threads))
        rows.extend(CHECKS[name](ctx))
    return rows
