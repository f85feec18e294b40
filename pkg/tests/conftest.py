"""Collects one PASS/FAIL line per acceptance criterion and prints them after the run."""

_LINES: dict[int, str] = {}


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None or call.when != "call":
        return
    number, title = mark.args
    verdict = "PASS" if call.excinfo is None else "FAIL"
    _LINES[number] = f"{verdict} [{number:2d}] {title}  ({call.duration:.2f} s)"


def pytest_terminal_summary(terminalreporter):
    if not _LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_LINES):
        terminalreporter.write_line(_LINES[number])
