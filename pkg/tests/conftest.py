import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_criteria: dict[str, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(id, title): acceptance criterion covered by this test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or (report.when != "call" and report.passed):
        return
    cid, title = marker.args
    entry = _criteria.setdefault(cid, {"title": title, "passed": True, "detail": []})
    if report.failed:
        entry["passed"] = False
        if report.longrepr is not None:
            last = str(getattr(report.longrepr, "reprcrash", None) or report.longrepr).strip().splitlines()
            entry["detail"].append(last[-1] if last else "")
    for name, value in report.user_properties:
        if name == "measured":
            entry["detail"].append(value)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(_criteria, key=lambda c: (int("".join(ch for ch in c if ch.isdigit())), c)):
        entry = _criteria[cid]
        verdict = "PASS" if entry["passed"] else "FAIL"
        detail = "; ".join(d for d in entry["detail"] if d)
        terminalreporter.write_line(f"criterion {cid:<3} {verdict}  {entry['title']}" + (f"  [{detail}]" if detail else ""))
