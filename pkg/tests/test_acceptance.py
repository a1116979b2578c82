"""Exit criteria 1-17; each test prints one PASS/FAIL line, visible under ``pytest -v``."""

import subprocess
import sys
import time

import pytest

from relwaves import acceptance

pytestmark = pytest.mark.acceptance


def report(capsys, number, name, passed, metric):
    with capsys.disabled():
        print(f"\n[criterion {number:>2}] {'PASS' if passed else 'FAIL'}  {name}: {metric}")


@pytest.mark.parametrize("check", acceptance.CHECKS, ids=lambda c: c.__name__)
def test_criterion(check, capsys):
    result = check()
    report(capsys, result.number, result.name, result.passed, result.metric)
    assert result.passed, result.metric


def test_criterion_17_verify_is_deterministic(capsys):
    cmd = [sys.executable, "-m", "relwaves.cli", "verify"]
    t0 = time.perf_counter()
    first = subprocess.run(cmd, capture_output=True, text=True)
    elapsed = time.perf_counter() - t0
    second = subprocess.run(cmd, capture_output=True, text=True)
    lines = first.stdout.strip().splitlines()
    passed = (first.returncode == 0 and first.stdout == second.stdout and elapsed < 300
              and len(lines) == 18 and lines[-1] == "16/16 criteria passed")
    report(capsys, 17, "verify reruns 1-16 with a deterministic table", passed,
           f"{lines[-1] if lines else 'no output'}; identical reruns {first.stdout == second.stdout}")
    assert passed, first.stdout + first.stderr
