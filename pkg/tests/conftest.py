import pytest

_results: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    num, title = mark.args
    entry = _results.setdefault(num, {"title": title, "passed": True, "seen": False, "notes": []})
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        entry["seen"] = True
        if hasattr(rep, "wasxfail"):
            entry["passed"] = False
            entry["notes"].append(f"{item.name}: expected failure ({rep.wasxfail})")
        elif rep.outcome != "passed":
            entry["passed"] = False
            entry["notes"].append(f"{item.name}: {rep.outcome}")


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_results):
        e = _results[num]
        if not e["seen"]:
            continue
        status = "PASS" if e["passed"] else "FAIL"
        terminalreporter.write_line(f"criterion {num:2d} {status}  {e['title']}")
        for note in e["notes"]:
            terminalreporter.write_line(f"              {note}")
