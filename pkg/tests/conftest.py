"""Echo the acceptance-criterion verdict lines after the test run.

Output capture would otherwise hide the per-criterion PASS/FAIL lines on
passing runs; the terminal summary is written outside capture.
"""

import sys


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    for name, mod in list(sys.modules.items()):
        lines = getattr(mod, "ACCEPTANCE_LINES", None)
        if lines and name.rpartition(".")[2] == "test_acceptance":
            terminalreporter.section("acceptance criteria")
            for line in lines:
                terminalreporter.write_line(line)
            break
