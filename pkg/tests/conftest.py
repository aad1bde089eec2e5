"""Shared pytest wiring: a PASS/FAIL summary line per acceptance criterion."""

from __future__ import annotations

import re

_CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    status: dict[int, str] = {}
    for outcome, label in (("passed", "PASS"), ("failed", "FAIL"), ("error", "FAIL")):
        for report in terminalreporter.stats.get(outcome, []):
            match = _CRITERION.search(getattr(report, "nodeid", ""))
            if match:
                num = int(match.group(1))
                if label == "FAIL" or num not in status:
                    status[num] = label
    if status:
        terminalreporter.write_line("")
        for num in sorted(status):
            terminalreporter.write_line(f"ACCEPTANCE criterion {num}: {status[num]}")
