from __future__ import annotations

import pytest

from symbolhomology.examples import load_fixture

FIXTURES = ("T_ml.json", "T_mm.json", "T_mm_w_in_B1.json", "triangle.json")


@pytest.fixture(scope="session")
def oracles():
    return {name.split(".")[0]: load_fixture(name) for name in FIXTURES}


@pytest.fixture(scope="session")
def tml(oracles):
    return oracles["T_ml"]


@pytest.fixture(scope="session")
def tmm(oracles):
    return oracles["T_mm"]


@pytest.fixture(scope="session")
def tmm_b1(oracles):
    return oracles["T_mm_w_in_B1"]


@pytest.fixture(scope="session")
def tri(oracles):
    return oracles["triangle"]


# one summary line per acceptance criterion
ACCEPTANCE: list[str] = []


@pytest.fixture
def report():
    def record(number: int, title: str, ok: bool, seconds: float, limit: float, detail: str = ""):
        status = "PASS" if ok and seconds < limit else "FAIL"
        line = f"criterion {number} {status} {title} ({seconds:.2f}s < {limit:g}s) {detail}".rstrip()
        ACCEPTANCE.append(line)
        print(line)
        return status == "PASS"
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
