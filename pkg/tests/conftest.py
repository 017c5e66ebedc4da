import pytest


def pytest_collection_modifyitems(items):
    for item in items:
        marker = item.get_closest_marker("acceptance")
        if marker is not None:
            item.user_properties.append(("criterion", marker.args))


def pytest_terminal_summary(terminalreporter):
    rows = []
    for outcome in ("passed", "failed", "error", "skipped"):
        for report in terminalreporter.stats.get(outcome, []):
            props = dict(getattr(report, "user_properties", ()))
            if "criterion" in props and (report.when == "call" or outcome != "passed"):
                number, title = props["criterion"]
                detail = props.get("detail", "")
                rows.append((number, "PASS" if outcome == "passed" else "FAIL", title, detail))
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    seen = set()
    for number, verdict, title, detail in sorted(rows):
        if number in seen:
            continue
        seen.add(number)
        line = f"[{verdict}] criterion {number:>2}: {title}"
        terminalreporter.write_line(line + (f"  ({detail})" if detail else ""))


@pytest.fixture
def detail(record_property):
    """Attach a short measurement to the acceptance summary line."""
    return lambda text: record_property("detail", text)
