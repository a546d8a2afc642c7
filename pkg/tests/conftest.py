import pytest

from trendcast import fixture_path, parse_long_csv, select_series

_criteria = []


@pytest.fixture
def criterion():
    """Record a named pass/fail line for the acceptance summary, then assert."""

    def check(label, ok, detail=""):
        _criteria.append((label, bool(ok), detail))
        assert ok, f"{label}: {detail}"

    return check


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in _criteria:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}  {detail}")


@pytest.fixture(scope="session")
def fixture_series():
    return select_series(parse_long_csv(fixture_path().read_text(encoding="utf-8")))
