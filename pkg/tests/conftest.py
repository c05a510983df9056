import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

_results: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): acceptance criterion")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("acceptance")
        if mark is not None:
            item.user_properties.append(("criterion", (mark.kwargs["number"], mark.kwargs["title"])))


def pytest_runtest_logreport(report):
    crit = dict(report.user_properties).get("criterion")
    if crit is None or (report.when != "call" and report.passed):
        return
    number, title = crit
    entry = _results.setdefault(number, {"title": title, "passed": True, "runs": 0})
    if report.when == "call":
        entry["runs"] += 1
    if report.failed:
        entry["passed"] = False


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_results):
        r = _results[number]
        status = "PASS" if r["passed"] and r["runs"] else "FAIL"
        terminalreporter.write_line(f"{status}  criterion {number:2d}: {r['title']}")
