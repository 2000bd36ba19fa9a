import pytest

from twistscrew import benchmark_problem, solve_lowest

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def bench():
    return benchmark_problem()


@pytest.fixture(scope="session")
def bench_spectrum(bench):
    return solve_lowest(bench, 6)


@pytest.fixture(scope="session")
def box_problem():
    # nu = 1/2, no field: U vanishes identically
    return benchmark_problem(B=0.0)


@pytest.fixture(scope="session")
def landau_problem():
    return benchmark_problem(kz=0.0, omega1=0.0, ell=0)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
