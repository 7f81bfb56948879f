import random

import pytest


@pytest.fixture
def rng():
    return random.Random(20241014)


@pytest.fixture
def report(capsys):
    """Print one PASS/FAIL line per acceptance criterion, bypassing capture."""

    def _report(number, text, ok):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {text}")
        return ok

    return _report
