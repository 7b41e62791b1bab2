"""Collects results of tests marked ``criterion`` and prints one line per criterion."""

_results: dict[int, dict] = {}


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            number, title = mark.args
            item.user_properties.append(("criterion", (number, title)))


def pytest_runtest_logreport(report):
    crit = dict(report.user_properties).get("criterion")
    if crit is None:
        return
    number, title = crit
    entry = _results.setdefault(number, {"title": title, "ok": True, "ran": False, "failed": []})
    if report.when == "call" or report.outcome != "passed":
        entry["ran"] = True
    if report.outcome == "failed" or (report.when == "call" and report.outcome == "skipped"):
        entry["ok"] = False
        entry["failed"].append(report.nodeid.split("::")[-1])


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_results):
        entry = _results[number]
        status = "PASS" if entry["ok"] and entry["ran"] else "FAIL"
        line = f"criterion {number}: {status}  {entry['title']}"
        if entry["failed"]:
            line += f"  (failed: {', '.join(entry['failed'])})"
        terminalreporter.write_line(line)
