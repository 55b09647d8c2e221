import re

_CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One PASS/FAIL line per acceptance criterion at the end of the run."""
    results = {}
    for outcome in ("passed", "failed", "error", "skipped"):
        for report in terminalreporter.stats.get(outcome, []):
            match = _CRITERION.search(getattr(report, "nodeid", ""))
            if match:
                num = int(match.group(1))
                if outcome != "passed" or num not in results:
                    results[num] = outcome
    if not results:
        return
    terminalreporter.write_line("")
    for num in sorted(results):
        word = "PASS" if results[num] == "passed" else "FAIL"
        terminalreporter.write_line(f"ACCEPTANCE {num}: {word}")
