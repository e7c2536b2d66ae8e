"""Acceptance criteria 1 through 12, one test each.

Each test prints a single PASS/FAIL line (visible with ``-s`` or in the
``-v`` report) and asserts the criterion together with its time budget.
"""
import subprocess
import sys
import time

import pytest

from pgrouplab import acceptance as acc
from pgrouplab.core import parse_group

CORPUS = [parse_group(s) for s in acc.DEFAULT_CORPUS]
NAMES = dict(acc.CRITERIA)

# (criterion, callable, seconds allowed)
CASES = [
    (1, lambda: acc.kaplansky(), 1),
    (2, lambda: acc.four_automorphisms(acc.DEFAULT_SEED, 200), 10),
    (3, lambda: acc.sum_bound(CORPUS, acc.DEFAULT_SEED, 500), 30),
    (4, lambda: acc.two_automorphisms(), 60),
    (5, lambda: acc.g_alpha_classification(), 60),
    (6, lambda: acc.odd_collapse(CORPUS), 30),
    (7, lambda: acc.noone_growth(), 10),
    (8, lambda: acc.shears(acc.DEFAULT_SEED, 200), 10),
    (9, lambda: acc.hull(acc.DEFAULT_SEED, 100), 20),
    (10, lambda: acc.splitting(acc.DEFAULT_SEED, 500), 60),
    (11, lambda: acc.generator_soundness(CORPUS), 60),
]


def _report(capsys, result, elapsed):
    with capsys.disabled():
        print(f"\n{result.line()} ({elapsed:.1f}s)")


@pytest.mark.parametrize("number,fn,budget", CASES, ids=[f"criterion_{c[0]:02d}" for c in CASES])
def test_criterion(capsys, number, fn, budget):
    t0 = time.perf_counter()
    result = acc._run(number, NAMES[number], fn)
    elapsed = time.perf_counter() - t0
    _report(capsys, result, elapsed)
    assert result.passed, result.detail
    assert elapsed < budget, f"criterion {number} took {elapsed:.1f}s (budget {budget}s)"


def test_criterion_12_determinism(capsys):
    cmd = [sys.executable, "-m", "pgrouplab", "suite", "--json", "--seed", str(acc.DEFAULT_SEED)]
    t0 = time.perf_counter()
    runs = [subprocess.run(cmd, capture_output=True) for _ in range(2)]
    elapsed = time.perf_counter() - t0
    same = runs[0].stdout == runs[1].stdout
    ok = same and all(r.returncode == 0 for r in runs) and elapsed < 300
    detail = f"{len(runs[0].stdout)} bytes, identical={same}, exit codes {[r.returncode for r in runs]}"
    _report(capsys, acc.CriterionResult(12, "determinism", ok, detail), elapsed)
    assert all(r.returncode == 0 for r in runs), runs[0].stderr.decode()
    assert same
    assert elapsed < 300


def test_corrupted_oracle_is_detected():
    # harness self-test: an inverted oracle must make the oracle-backed criteria fail
    results = acc.run_criteria(CORPUS[:1], corrupt_oracle=True, only={1, 5})
    assert [r.passed for r in results] == [False, False]
