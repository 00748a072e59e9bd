import time

import pytest

_RECORDERS: dict = {}
_LINES: list[str] = []


class Recorder:
    def __init__(self, name: str):
        self.name, self.detail, self.start = name, "", time.perf_counter()

    @property
    def elapsed(self) -> float:
        return time.perf_counter() - self.start


@pytest.fixture
def criterion(request):
    """Acceptance bookkeeping: tests fill in ``.detail``; a summary line is printed per test."""
    rec = Recorder(request.node.name)
    _RECORDERS[request.node.nodeid] = rec
    return rec


def pytest_runtest_logreport(report):
    rec = _RECORDERS.get(report.nodeid)
    if rec is not None and report.when == "call":
        _LINES.append(f"{'PASS' if report.passed else 'FAIL'}  {rec.name}  {rec.detail}".rstrip())


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
