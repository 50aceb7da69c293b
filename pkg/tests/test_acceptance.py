"""Acceptance criteria 1-11 at their stated tolerances and runtime limits.

Each test prints one ``[PASS]`` / ``[FAIL]`` line. Run directly with
``python tests/test_acceptance.py`` for the summary alone.
"""

import subprocess
import sys
import time

import pytest

from capq import selftest

# criterion id -> (check, runtime limit in seconds)
CRITERIA = {
    1: (selftest.check_entropy_identity, 5),
    2: (selftest.check_known_capacities, 60),
    3: (selftest.check_complement_identity, 30),
    4: (selftest.check_additivity_formula, 300),
    5: (selftest.check_extreme_bound, 120),
    6: (selftest.check_reduction, 180),
    7: (selftest.check_circuit_compiler, 30),
    8: (selftest.check_gram_construction, 30),
    9: (selftest.check_zero_error_certificates, 60),
    10: (selftest.check_strategy_checker, 10),
}


def evaluate(k):
    check, limit = CRITERIA[k]
    start = time.perf_counter()
    result = check(seed=0)
    elapsed = time.perf_counter() - start
    ok = result["passed"] and elapsed < limit
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {k:2d}: {result['name']} ({elapsed:.2f}s, limit {limit}s)"
    return ok, line, result


def selftest_bytes():
    proc = subprocess.run([sys.executable, "-m", "capq", "selftest", "--seed", "0"], capture_output=True)
    return proc.returncode, proc.stdout


def evaluate_determinism():
    (c1, a), (c2, b) = selftest_bytes(), selftest_bytes()
    ok = c1 == 0 and c2 == 0 and a == b and len(a) > 0
    return ok, f"[{'PASS' if ok else 'FAIL'}] criterion 11: selftest reports byte-identical ({len(a)} bytes)"


def _emit(capsys, line):
    with capsys.disabled():
        print("\n" + line)


@pytest.mark.parametrize("k", sorted(CRITERIA))
def test_criterion(k, capsys):
    ok, line, result = evaluate(k)
    _emit(capsys, line)
    assert ok, result["metrics"]


def test_criterion_11_determinism(capsys):
    ok, line = evaluate_determinism()
    _emit(capsys, line)
    assert ok


if __name__ == "__main__":
    results = [evaluate(k)[:2] for k in sorted(CRITERIA)] + [evaluate_determinism()]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
