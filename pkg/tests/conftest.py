import numpy as np
import pytest

# criterion number -> [(passed, title, detail)], one entry per case, filled by test_acceptance.py
ACCEPTANCE: dict[int, list[tuple[bool, str, str]]] = {}


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        cases = ACCEPTANCE[n]
        ok = all(c[0] for c in cases)
        detail = " | ".join(c[2] for c in cases)
        terminalreporter.write_line(f"criterion {n:2d} {'PASS' if ok else 'FAIL'}  "
                                    f"{cases[0][1]}: {detail}")
