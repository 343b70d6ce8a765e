"""Shared pytest wiring.

The acceptance module records one PASS/FAIL line per criterion; echo those
lines into the terminal summary so the gate stays readable under output
capture.
"""

import sys


def pytest_terminal_summary(terminalreporter):
    for name, module in list(sys.modules.items()):
        if name.rpartition(".")[2] != "test_acceptance":
            continue
        lines = getattr(module, "VERDICT_LINES", None)
        if lines:
            terminalreporter.section("acceptance criteria")
            for line in lines:
                terminalreporter.write_line(line)
        break
