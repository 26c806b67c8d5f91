import os

from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, derandomize=True, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# criterion number -> (passed, title, detail); filled by test_acceptance
ACCEPTANCE: dict = {}
ACCEPTANCE_TOTAL = 9


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in range(1, ACCEPTANCE_TOTAL + 1):
        if n in ACCEPTANCE:
            ok, title, detail = ACCEPTANCE[n]
            terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {n}. {title}: {detail}")
        else:
            terminalreporter.write_line(f"[FAIL] {n}. not reached (test errored or was deselected)")
