import pytest

from rmmsim import checks, stats

EXACT = [
    "pair_connection",
    "cut_connection",
    "tail_polynomial",
    "disjoint_occurrence",
    "multi_connection",
    "fourth_power_sum",
    "critical_times",
    "sbm_class_structure",
]


@pytest.fixture(scope="module")
def exact_rows():
    return checks.run_checks(42, EXACT)


def test_exact_checks_all_hold(exact_rows):
    failed = [r for r in exact_rows if not r.satisfied]
    assert not failed
    assert len(exact_rows) > 100


def test_every_row_is_tagged(exact_rows):
    for r in exact_rows:
        d = r.as_dict()
        assert set(d) == {"name", "lhs", "rhs", "satisfied", "trials", "seed", "stream_id"}
        assert d["seed"] == 42


def test_cut_connection_exercises_all_three_cases(exact_rows):
    # the fixtures include pairs on both sides of the cut and across it
    rows = [r for r in exact_rows if r.name.startswith("cut_connection[")]
    kinds = set()
    for r in rows:
        m = int(r.name.split("|m=")[1].split("|")[0])
        i, j = map(int, r.name.rsplit("|", 1)[1].rstrip("]").split(","))
        kinds.add((i <= m) + (j <= m))
    assert kinds == {0, 1, 2}


def test_fixture_set_limits():
    for x, t in checks.exact_instances():
        assert len(x) <= 6
        assert t * sum(v * v for v in x) <= 0.9 + 1e-12


def test_subset_rows_match_full_order(exact_rows):
    alone = checks.run_checks(42, ["critical_times"])
    assert alone == [r for r in exact_rows if r.stream_id == checks.check_stream("critical_times")]


def test_corrupted_bound_is_caught(monkeypatch):
    monkeypatch.setattr(stats, "bound_pair_connection", lambda x, t, i, j: 0.0)
    rows = checks.run_checks(42, ["pair_connection"])
    assert not all(r.satisfied for r in rows)


def test_unknown_check():
    with pytest.raises(KeyError):
        checks.run_checks(1, ["nonexistent"])


@pytest.mark.parametrize("name", ["monotone_coupling", "shift_inequality", "glue", "grinding", "moments"])
def test_statistical_checks_at_reduced_size(name):
    fn = checks.CHECKS[name]
    ctx = checks.Context(7, checks.check_stream(name), 2)
    rows = fn(ctx, trials=2000)
    assert rows and all(r.satisfied for r in rows), [r for r in rows if not r.satisfied]
