"""Uniqueness and stability experiments.

Uniqueness: scramble one benchmark with several seeds, normalize every copy
and count distinct results.  Stability: run a solver on scrambled copies and
summarize the runs by penalized runtime (PR-2), the median absolute
deviation of per-run PR-2 scores, and a Mariposa-style category obtained
from one-proportion Z-tests on the success rate.
"""

from __future__ import annotations

import csv
import enum
import logging
import math
import os
import shlex
import signal
import statistics
import subprocess
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional, Sequence

from .normalizer import normalize
from .scrambler import ScrambleOptions, scramble
from .smtlib import Script, SmtError, print_script

log = logging.getLogger(__name__)


class Outcome(enum.Enum):
    SAT = "sat"
    UNSAT = "unsat"
    UNKNOWN = "unknown"
    TIMEOUT = "timeout"
    MEMOUT = "memout"
    ERROR = "error"

    @property
    def solved(self) -> bool:
        return self in (Outcome.SAT, Outcome.UNSAT)


class Category(enum.Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"
    UNSOLVABLE = "unsolvable"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class RunRecord:
    benchmark: str
    seed: Optional[int]
    outcome: Outcome
    wall_time: float

    def __post_init__(self):
        if self.wall_time < 0:
            raise ValueError("wall time must be non-negative")


# ---------------------------------------------------------------------------
# Uniqueness
# ---------------------------------------------------------------------------


@dataclass
class UniquenessResult:
    distinct: int
    failed_seeds: list


def uniqueness_details(
    s: Script,
    seeds: Sequence[int],
    ops: frozenset,
    normalizer: Callable[[Script], Script] = normalize,
) -> UniquenessResult:
    if not seeds:
        raise ValueError("at least one seed is required")
    outputs = set()
    failed = []
    for seed in seeds:
        try:
            out = print_script(normalizer(scramble(s, ScrambleOptions(seed=seed, ops=ops))))
        except SmtError as e:
            log.warning("seed %d failed: %s", seed, e)
            failed.append(seed)
            out = ("failed", seed)
        outputs.add(out)
    return UniquenessResult(len(outputs), failed)


def uniqueness_report(
    s: Script,
    seeds: Sequence[int],
    ops: frozenset,
    normalizer: Callable[[Script], Script] = normalize,
) -> int:
    """Number of distinct normalized outputs over the scrambled copies.

    A seed whose pipeline fails counts as an outcome of its own.
    """
    return uniqueness_details(s, seeds, ops, normalizer).distinct


# ---------------------------------------------------------------------------
# Metrics
# ---------------------------------------------------------------------------


def pr2_score(records: Sequence[RunRecord], timeout: float) -> float:
    """Solved wall time plus twice the timeout for every unsolved run."""
    if not records:
        raise ValueError("no run records")
    return sum(r.wall_time if r.outcome.solved else 2 * timeout for r in records)


def mad(values: Sequence[float]) -> float:
    if not values:
        raise ValueError("mad of an empty sequence")
    m = statistics.median(values)
    return statistics.median(abs(v - m) for v in values)


def _z(p_hat: float, p0: float, n: int) -> float:
    return (p_hat - p0) / math.sqrt(p0 * (1 - p0) / n)


def categorize_stability(
    records: Sequence[RunRecord],
    timeout: float,
    alpha: float = 0.05,
    low: float = 0.05,
    high: float = 0.95,
    near_timeout: float = 0.2,
) -> Category:
    """One-sided one-proportion Z-tests of the success rate against ``low``
    and ``high``.  A benchmark whose solved runs average within
    ``near_timeout`` of the timeout is never called unstable."""
    if not records:
        raise ValueError("no run records")
    n = len(records)
    solved = [r.wall_time for r in records if r.outcome.solved]
    p_hat = len(solved) / n
    crit = statistics.NormalDist().inv_cdf(1 - alpha)
    if _z(p_hat, low, n) < -crit:
        return Category.UNSOLVABLE
    if _z(p_hat, high, n) > crit:
        return Category.STABLE
    if _z(p_hat, high, n) < -crit:
        mean_time = statistics.fmean(solved) if solved else timeout
        if mean_time < (1 - near_timeout) * timeout:
            return Category.UNSTABLE
    return Category.INCONCLUSIVE


# ---------------------------------------------------------------------------
# Running solvers
# ---------------------------------------------------------------------------

_ANSWERS = {"sat": Outcome.SAT, "unsat": Outcome.UNSAT, "unknown": Outcome.UNKNOWN}
_MEMOUT_MARKERS = ("out of memory", "std::bad_alloc", "memoryerror")


def run_solver(
    cmd_template: str,
    benchmark_path,
    timeout: float,
    benchmark: Optional[str] = None,
    seed: Optional[int] = None,
) -> RunRecord:
    """Run ``cmd_template`` with ``{}`` replaced by the benchmark path."""
    if "{}" not in cmd_template:
        raise ValueError("solver command template needs a '{}' placeholder")
    path = str(benchmark_path)
    cmd = [arg.replace("{}", path) for arg in shlex.split(cmd_template)]
    benchmark = benchmark or path
    start = time.monotonic()
    try:
        proc = subprocess.Popen(
            cmd,
            stdout=subprocess.PIPE,
            stderr=subprocess.PIPE,
            stdin=subprocess.DEVNULL,
            text=True,
            start_new_session=True,
        )
    except OSError as e:
        log.error("cannot start %s: %s", cmd[0], e)
        return RunRecord(benchmark, seed, Outcome.ERROR, time.monotonic() - start)
    try:
        out, err = proc.communicate(timeout=timeout)
    except subprocess.TimeoutExpired:
        try:
            os.killpg(proc.pid, signal.SIGKILL)
        except ProcessLookupError:
            pass
        proc.communicate()
        return RunRecord(benchmark, seed, Outcome.TIMEOUT, float(timeout))
    elapsed = time.monotonic() - start
    for line in out.splitlines():
        answer = _ANSWERS.get(line.strip())
        if answer is not None:
            return RunRecord(benchmark, seed, answer, elapsed)
    text = (out + err).lower()
    if any(m in text for m in _MEMOUT_MARKERS):
        return RunRecord(benchmark, seed, Outcome.MEMOUT, float(timeout))
    return RunRecord(benchmark, seed, Outcome.ERROR, elapsed)


@dataclass
class StabilityRow:
    benchmark: str
    reps: int
    solved: int
    pr2: float
    mad: float
    category: Category


def stability_row(benchmark: str, records: Sequence[RunRecord], timeout: float, alpha: float = 0.05) -> StabilityRow:
    per_run = [pr2_score([r], timeout) for r in records]
    return StabilityRow(
        benchmark=benchmark,
        reps=len(records),
        solved=sum(r.outcome.solved for r in records),
        pr2=pr2_score(records, timeout),
        mad=mad(per_run),
        category=categorize_stability(records, timeout, alpha),
    )


def stability_experiment(
    benchmarks: dict,
    seeds: Sequence[int],
    ops: frozenset,
    cmd_template: str,
    timeout: float,
    normalizer: Optional[Callable[[Script], Script]] = normalize,
    jobs: int = 1,
    alpha: float = 0.05,
    workdir=None,
) -> list:
    """Scramble each benchmark once per seed, optionally normalize, and run the
    solver on every copy.  ``benchmarks`` maps an id to a parsed script.
    Returns one ``StabilityRow`` per benchmark, in the order given."""
    with tempfile.TemporaryDirectory(dir=workdir) as tmp:
        jobs_list = []
        for b, (name, script) in enumerate(benchmarks.items()):
            for seed in seeds:
                mutated = scramble(script, ScrambleOptions(seed=seed, ops=ops))
                if normalizer is not None:
                    mutated = normalizer(mutated)
                path = Path(tmp) / f"b{b}_s{seed}.smt2"
                path.write_text(print_script(mutated), encoding="utf-8")
                jobs_list.append((name, seed, path))

        def run(job):
            name, seed, path = job
            return run_solver(cmd_template, path, timeout, benchmark=name, seed=seed)

        with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
            records = list(pool.map(run, jobs_list))

    by_bench: dict = {name: [] for name in benchmarks}
    for r in records:
        by_bench[r.benchmark].append(r)
    return [stability_row(name, recs, timeout, alpha) for name, recs in by_bench.items()]


def corpus_mad(rows: Sequence[StabilityRow]) -> float:
    """Division-level aggregate: the sum of per-benchmark MADs."""
    return sum(r.mad for r in rows)


# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------

UNIQUENESS_HEADER = ("benchmark", "seeds", "distinct")
STABILITY_HEADER = ("benchmark", "reps", "solved", "pr2", "mad", "category")


def write_uniqueness_csv(rows, fh) -> None:
    """``rows``: (benchmark, seed count, distinct count or error text)."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(UNIQUENESS_HEADER)
    for row in rows:
        w.writerow(row)


def write_stability_csv(rows, fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(STABILITY_HEADER)
    for r in rows:
        if isinstance(r, StabilityRow):
            w.writerow((r.benchmark, r.reps, r.solved, f"{r.pr2:.3f}", f"{r.mad:.3f}", r.category.value))
        else:
            w.writerow(r)
