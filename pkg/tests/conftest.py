"""Collects acceptance verdicts and repeats them in the terminal summary."""

import pytest

_VERDICTS = []


class Recorder:
    def __init__(self, capsys):
        self._capsys = capsys

    def __call__(self, label, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}"
        _VERDICTS.append(line)
        with self._capsys.disabled():
            print("\n" + line)
        return ok


@pytest.fixture
def verdict(capsys):
    return Recorder(capsys)


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in _VERDICTS:
            terminalreporter.write_line(line)
