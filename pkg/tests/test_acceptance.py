"""The eleven acceptance criteria, one test each.

Each test prints a single PASS/FAIL line (visible with ``pytest -s`` or in
the captured output of a failure) and asserts exact equality inside the
criterion itself.
"""
import pytest

from restricted_stirling.acceptance import CRITERIA, format_line, run_criterion


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"criterion_{c.number:02d}" for c in CRITERIA])
def test_criterion(criterion, capsys):
    ok, detail, seconds = run_criterion(criterion)
    line = format_line(criterion, ok, detail, seconds)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line
