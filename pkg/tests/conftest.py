import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

# criterion label -> names of failing tests
_criteria: dict = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if m is None:
        return
    failed = _criteria.setdefault(str(m.args[0]), [])
    if rep.failed and item.name not in failed:
        failed.append(item.name)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_criteria, key=lambda c: (int(c.rstrip("*")), c)):
        failed = _criteria[label]
        line = f"criterion {label}: {'FAIL' if failed else 'PASS'}"
        if failed:
            line += "  (" + ", ".join(failed) + ")"
        terminalreporter.write_line(line)
