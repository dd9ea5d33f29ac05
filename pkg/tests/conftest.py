import pytest

_criteria: dict = {}


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "criterion(number, title, budget): an acceptance criterion with a time "
                   "budget in seconds")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or (rep.when != "call" and not rep.failed):
        return
    number, title, budget = mark.args
    entry = _criteria.setdefault(number, {"title": title, "budget": budget,
                                          "elapsed": 0.0, "passed": True})
    entry["elapsed"] += rep.duration
    entry["passed"] &= rep.passed


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        e = _criteria[number]
        status = "PASS" if e["passed"] else "FAIL"
        terminalreporter.write_line(
            f"criterion {number:2d}: {status}  {e['elapsed']:7.2f}s / {e['budget']}s  {e['title']}")
