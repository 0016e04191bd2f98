import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

ACCEPTANCE = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[ACCEPTANCE] = {}


@pytest.fixture
def acceptance(request):
    """Records ``(criterion, check) -> passed`` for the end-of-run summary."""
    log = request.config.stash[ACCEPTANCE]

    def record(number: int, label: str, passed) -> bool:
        log.setdefault(number, {})[label] = bool(passed)
        return bool(passed)

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    log = config.stash.get(ACCEPTANCE, {})
    if not log:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(log):
        checks = log[number]
        failed = [label for label, ok in checks.items() if not ok]
        status = "PASS" if not failed else "FAIL"
        line = f"criterion {number}: {status} ({len(checks) - len(failed)}/{len(checks)} checks)"
        if failed:
            line += " failed: " + "; ".join(failed)
        terminalreporter.write_line(line)
