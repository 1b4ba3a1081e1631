import numpy as np
import pytest

from primeforms import congruence, forms

_ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def acceptance_report():
    """Collects one PASS/FAIL line per acceptance criterion; the lines are
    echoed in the terminal summary so they survive output capture."""

    def report(name, ok, detail):
        status = "PASS" if ok else "FAIL"
        line = f"{status} {name}: {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, f"{name}: {detail}"

    return report


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def census_enum_1e5():
    return forms.census_enumeration(10**5)


@pytest.fixture(scope="session")
def census_div_1e5():
    return congruence.census_divisor(10**5)


@pytest.fixture(scope="session")
def census_enum_1e6():
    return forms.census_enumeration(10**6)


@pytest.fixture(scope="session")
def roots_17_1e6():
    f = congruence.QuadraticPoly(1, 1, 17)
    return congruence.root_multiset(f, 10**6)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260823)
