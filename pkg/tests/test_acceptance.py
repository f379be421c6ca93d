"""The twelve acceptance criteria, each at its stated (exact) tolerance.

Every criterion prints one PASS/FAIL line, so ``pytest -v`` output doubles as
the acceptance report.  Runtimes are printed against their targets.
"""

import pytest

from e7theta import acceptance

NUMBERS = [num for num, *_ in acceptance.CRITERIA]
NAMES = {num: name for num, name, *_ in acceptance.CRITERIA}


def test_all_twelve_registered():
    assert NUMBERS == list(range(1, 13))


@pytest.mark.parametrize("number", NUMBERS, ids=[f"c{n:02d}-{NAMES[n].replace(' ', '_')}" for n in NUMBERS])
def test_criterion(number, capsys):
    result = acceptance.run_criterion(number)
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.details
