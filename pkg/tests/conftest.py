"""Shared pytest plumbing: collects acceptance-criterion result lines."""

ACCEPTANCE_LINES = []


def record_criterion(line: str) -> None:
    ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    def criterion_number(line):
        return int(line.split(":", 1)[0].split()[-1])

    for line in sorted(ACCEPTANCE_LINES, key=criterion_number):
        terminalreporter.line(line)
