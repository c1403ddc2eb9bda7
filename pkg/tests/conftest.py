"""Print one pass/fail line per acceptance criterion at the end of a run."""

import re


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    outcomes = {}
    for key in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(key, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py::test_criterion" not in nodeid:
                continue
            name = nodeid.split("::")[-1]
            if key == "passed":
                outcomes.setdefault(name, "PASS")
            else:
                outcomes[name] = "FAIL"
    if not outcomes:
        return

    def criterion_number(name):
        m = re.search(r"criterion_(\d+)", name)
        return int(m.group(1)) if m else 0

    terminalreporter.write_sep("-", "acceptance criteria")
    for name in sorted(outcomes, key=criterion_number):
        terminalreporter.write_line(f"{outcomes[name]} {name}")
