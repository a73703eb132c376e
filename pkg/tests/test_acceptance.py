"""One test per acceptance criterion; each prints a single PASS/FAIL line."""

import pytest

from chui_lab.acceptance import CRITERIA

SLOW = {3, 8}


@pytest.mark.parametrize("number", [pytest.param(k, marks=pytest.mark.slow) if k in SLOW else k
                                    for k in sorted(CRITERIA)])
def test_criterion(number, acceptance_lines):
    res = CRITERIA[number](seed=0)
    line = f"{res.line()}  [{res.runtime_s:.1f}s]"
    print(line)
    acceptance_lines.append(line)
    assert res.passed, line
