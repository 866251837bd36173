"""Shared test plumbing: the acceptance-criterion result banner."""

# (criterion number, label, "PASS" | "FAIL"), appended by test_acceptance
ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num, label, status in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(
            "criterion %d: %-62s %s" % (num, label, status))
