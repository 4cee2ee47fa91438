import io
import statistics

import oracles
import pytest
from hypothesis import given
from hypothesis import strategies as st

from smtnorm.generate import GenConfig, random_script
from smtnorm.harness import (
    Category,
    Outcome,
    RunRecord,
    StabilityRow,
    categorize_stability,
    corpus_mad,
    mad,
    pr2_score,
    run_solver,
    stability_row,
    uniqueness_details,
    uniqueness_report,
    write_stability_csv,
    write_uniqueness_csv,
)
from smtnorm.oracle import exact_normalize
from smtnorm.scrambler import Op
from smtnorm.smtlib import SmtError, parse_script

SR = frozenset({Op.SHUFFLE, Op.RENAME})
OUTCOMES = list(Outcome)


def rec(outcome, t):
    return RunRecord("b", 0, outcome, t)


def runs(solved, n, t=1.0, timeout=60.0):
    return [rec(Outcome.SAT, t) if i < solved else rec(Outcome.TIMEOUT, timeout) for i in range(n)]


# -- metrics -----------------------------------------------------------------


def test_pr2():
    assert pr2_score([rec(Outcome.SAT, 1.0), rec(Outcome.UNSAT, 2.0), rec(Outcome.TIMEOUT, 60)], 60) == 123.0
    assert pr2_score([rec(Outcome.SAT, 1.5), rec(Outcome.SAT, 2.5)], 60) == 4.0
    unsolved = [rec(o, 3.0) for o in (Outcome.UNKNOWN, Outcome.ERROR, Outcome.MEMOUT, Outcome.TIMEOUT)]
    assert pr2_score(unsolved, 10) == 2 * 4 * 10
    with pytest.raises(ValueError):
        pr2_score([], 60)


def test_mad_values():
    assert mad([1, 1, 2, 2, 4, 6, 9]) == 1
    assert mad([5, 5, 5]) == 0
    assert mad([1, 2, 3, 4]) == 1.0
    with pytest.raises(ValueError):
        mad([])


@given(st.lists(st.floats(-1e6, 1e6, allow_nan=False), min_size=1, max_size=30))
def test_mad_matches_reference(values):
    m = oracles.median(values)
    assert mad(values) == pytest.approx(oracles.median([abs(v - m) for v in values]))


@given(
    st.lists(st.integers(-1000, 1000), min_size=1, max_size=20),
    st.integers(-1000, 1000),
    st.integers(-20, 20),
)
def test_mad_translation_and_scale(values, c, k):
    assert mad([v + c for v in values]) == mad(values)
    assert mad([k * v for v in values]) == abs(k) * mad(values)


@given(st.lists(st.tuples(st.sampled_from(OUTCOMES), st.floats(0, 10)), min_size=1, max_size=15), st.data())
def test_pr2_monotone(pairs, data):
    timeout = 10.0
    records = [rec(o, t) for o, t in pairs]
    i = data.draw(st.integers(0, len(records) - 1))
    worse = list(records)
    worse[i] = rec(Outcome.TIMEOUT, timeout)
    assert pr2_score(worse, timeout) >= pr2_score(records, timeout)


def test_categories():
    assert categorize_stability(runs(60, 60), 60) is Category.STABLE
    assert categorize_stability(runs(0, 60), 60) is Category.UNSOLVABLE
    assert categorize_stability(runs(30, 60), 60) is Category.UNSTABLE
    # half solved, but only just inside the timeout
    assert categorize_stability(runs(30, 60, t=55.0), 60) is Category.INCONCLUSIVE
    # 57/60 is not significantly different from 95%
    assert categorize_stability(runs(57, 60), 60) is Category.INCONCLUSIVE
    with pytest.raises(ValueError):
        categorize_stability([], 60)


def test_z_statistics_by_hand():
    # p = 0.5 against 0.95: far below; against 0.05: far above
    assert oracles.z_statistic(30, 60, 0.95) < -1.645
    assert oracles.z_statistic(30, 60, 0.05) > 1.645
    assert oracles.z_statistic(60, 60, 0.95) == pytest.approx(1.777, abs=1e-3)


@given(st.integers(1, 80), st.data())
def test_categorize_total_and_consistent_with_z(n, data):
    k = data.draw(st.integers(0, n))
    cat = categorize_stability(runs(k, n), 60)
    z_low = oracles.z_statistic(k, n, 0.05)
    z_high = oracles.z_statistic(k, n, 0.95)
    crit = statistics.NormalDist().inv_cdf(0.95)
    if z_low < -crit:
        assert cat is Category.UNSOLVABLE
    elif z_high > crit:
        assert cat is Category.STABLE
    elif z_high < -crit and k > 0:
        assert cat is Category.UNSTABLE
    else:
        assert cat is Category.INCONCLUSIVE
    assert categorize_stability(runs(k, n), 60) is cat


def test_alpha_is_configurable():
    # 59/60 is inconclusive at 5% but stable at a looser level
    assert categorize_stability(runs(59, 60), 60) is Category.INCONCLUSIVE
    assert categorize_stability(runs(59, 60), 60, alpha=0.4) is Category.STABLE


def test_run_record_rejects_negative_time():
    with pytest.raises(ValueError):
        RunRecord("b", 0, Outcome.SAT, -1.0)


# -- uniqueness --------------------------------------------------------------


def test_uniqueness_single_seed(running_example_text):
    s = parse_script(running_example_text)
    assert uniqueness_report(s, [5], SR) == 1
    with pytest.raises(ValueError):
        uniqueness_report(s, [], SR)


def test_uniqueness_identity_versus_normalize():
    s = random_script(11, GenConfig(assertions=10, constants=8))
    assert uniqueness_report(s, range(10), SR, normalizer=lambda x: x) == 10
    assert uniqueness_report(s, range(10), SR) == 1


def test_uniqueness_with_exact_oracle():
    for seed in range(10):
        s = random_script(seed, GenConfig(assertions=4, constants=3, depth=1))
        assert uniqueness_report(s, range(10), SR, normalizer=exact_normalize) == 1


def test_failing_seeds_are_separate_outcomes():
    s = random_script(2, GenConfig(assertions=3))

    def flaky(x):
        if len(flaky.calls) % 2:
            flaky.calls.append(1)
            raise SmtError("boom")
        flaky.calls.append(0)
        return x

    flaky.calls = []
    res = uniqueness_details(s, range(4), frozenset({Op.SHUFFLE}), flaky)
    assert res.failed_seeds == [1, 3]
    assert res.distinct >= 3


# -- solver runs -------------------------------------------------------------


def _bench(tmp_path, mode):
    p = tmp_path / f"{mode}.smt2"
    p.write_text(f"(set-info :source |mock:{mode}|)\n(check-sat)\n")
    return p


@pytest.mark.parametrize(
    "mode, outcome",
    [("sat", Outcome.SAT), ("unsat", Outcome.UNSAT), ("unknown", Outcome.UNKNOWN), ("chatty", Outcome.SAT), ("garbage", Outcome.ERROR)],
)
def test_run_solver_outcomes(tmp_path, mock_cmd, mode, outcome):
    r = run_solver(mock_cmd, _bench(tmp_path, mode), timeout=10, benchmark="b", seed=3)
    assert r.outcome is outcome
    assert 0 <= r.wall_time < 10
    assert (r.benchmark, r.seed) == ("b", 3)


def test_run_solver_timeout_kills(tmp_path, mock_cmd):
    r = run_solver(mock_cmd, _bench(tmp_path, "hang"), timeout=0.3)
    assert r.outcome is Outcome.TIMEOUT
    assert r.wall_time == 0.3


def test_run_solver_memout(tmp_path, mock_cmd):
    r = run_solver(mock_cmd, _bench(tmp_path, "memout"), timeout=5)
    assert r.outcome is Outcome.MEMOUT
    assert r.wall_time == 5


def test_run_solver_spawn_failure(tmp_path):
    r = run_solver("/nonexistent/solver {}", _bench(tmp_path, "sat"), timeout=5)
    assert r.outcome is Outcome.ERROR


def test_run_solver_needs_placeholder(tmp_path):
    with pytest.raises(ValueError):
        run_solver("z3 -smt2", _bench(tmp_path, "sat"), timeout=5)


# -- reports -----------------------------------------------------------------


def test_stability_row_and_csv():
    records = runs(30, 60)
    row = stability_row("b1", records, 60)
    assert (row.reps, row.solved, row.category) == (60, 30, Category.UNSTABLE)
    assert row.pr2 == 30 * 1.0 + 30 * 120
    assert row.mad == mad([1.0] * 30 + [120.0] * 30)
    buf = io.StringIO()
    write_stability_csv([row, ("b2", 60, 0, "", "", "error")], buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "benchmark,reps,solved,pr2,mad,category"
    assert lines[1] == f"b1,60,30,3630.000,{row.mad:.3f},unstable"
    assert lines[2] == "b2,60,0,,,error"
    assert corpus_mad([row, StabilityRow("b3", 1, 1, 1.0, 2.5, Category.STABLE)]) == row.mad + 2.5


def test_uniqueness_csv():
    buf = io.StringIO()
    write_uniqueness_csv([("a.smt2", 10, 1), ("b c.smt2", 10, "error")], buf)
    assert buf.getvalue() == "benchmark,seeds,distinct\na.smt2,10,1\nb c.smt2,10,error\n"
