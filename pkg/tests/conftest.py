"""Shared pytest hooks: a one-line digest per acceptance criterion."""

ACCEPTANCE_PREFIX = "test_acceptance.py::test_criterion_"

# Outcome labels in increasing severity; the worst phase (setup, call,
# teardown) decides the line printed for a criterion.
_SEVERITY = {"PASS": 0, "SKIPPED": 1, "FAIL": 2, "ERROR": 2}
_LABELS = {
    "passed": "PASS",
    "skipped": "SKIPPED",
    "xpassed": "PASS",
    "xfailed": "FAIL",
    "failed": "FAIL",
    "error": "ERROR",
}


def _criterion_title(nodeid: str) -> str:
    name = nodeid.split("::")[-1].removeprefix("test_criterion_")
    number, _, rest = name.partition("_")
    return f"criterion {number} ({rest.replace('_', ' ')})"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    outcomes: dict[str, str] = {}
    for status, label in _LABELS.items():
        for report in terminalreporter.stats.get(status, []):
            nodeid = getattr(report, "nodeid", "")
            if ACCEPTANCE_PREFIX not in nodeid:
                continue
            title = _criterion_title(nodeid)
            held = outcomes.get(title)
            if held is None or _SEVERITY[label] > _SEVERITY[held]:
                outcomes[title] = label
    if not outcomes:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for title in sorted(outcomes):
        terminalreporter.write_line(f"ACCEPTANCE: {title}: {outcomes[title]}")
