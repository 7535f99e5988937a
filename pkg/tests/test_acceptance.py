"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Tolerances and time budgets live in the check functions of
:mod:`necklace_ca.verify` (zero tolerance for every integer check, 1e-9 and
1e-12 for the matrix identities, 10 s / 1 s / 5 s / 1 s wall-clock budgets).
"""
import pytest

from necklace_ca import verify


@pytest.mark.parametrize("number", [num for num, _, _ in verify.CHECKS],
                         ids=[name.replace(" ", "_") for _, name, _ in verify.CHECKS])
def test_criterion(number, capsys):
    result = verify.run_check(number)
    with capsys.disabled():
        print("\n" + result.line())
    assert result.ok, result.detail
