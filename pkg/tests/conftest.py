import pytest

_outcomes: dict[int, dict] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    entry = _outcomes.setdefault(number, {"title": title, "passed": True, "seen": False})
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        entry["seen"] = True
        if report.outcome != "passed":
            entry["passed"] = False


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_outcomes):
        entry = _outcomes[number]
        status = "PASS" if entry["passed"] and entry["seen"] else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d} {status}  {entry['title']}")
