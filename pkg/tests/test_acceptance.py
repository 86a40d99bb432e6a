"""The twelve acceptance criteria, one test each.

Run ``pytest tests/test_acceptance.py -v`` (the PASS/FAIL lines are printed in
the terminal summary) or ``python3 tests/test_acceptance.py`` for the bare report.
"""

import numpy as np
import pytest

from trlab import analytic
from trlab.verify import CHECKS, run_check

RESULTS = {}


@pytest.mark.parametrize("number", [n for n, *_ in CHECKS], ids=[f"criterion{n:02d}" for n, *_ in CHECKS])
def test_criterion(number):
    res = run_check(number)
    RESULTS[number] = res.line()
    assert res.passed, res.line()


def test_fault_injection_breaks_d2_equivalence(monkeypatch):
    def corrupted(P, M, p):
        # dot products reduced mod p + 1 instead of p
        block = (P @ M) % (p + 1)
        return int(np.count_nonzero(~block.any(axis=1)))

    monkeypatch.setattr(analytic, "_annihilated_count", corrupted)
    res = run_check(1)
    assert not res.passed
    assert "mismatches" in res.detail


if __name__ == "__main__":
    import sys

    failed = 0
    for n, *_ in CHECKS:
        r = run_check(n)
        print(r.line(), flush=True)
        failed += not r.passed
    sys.exit(1 if failed else 0)
