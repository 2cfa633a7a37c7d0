import pytest

from qcdecay import beltrami, schwarzian, solver


@pytest.fixture(scope="session")
def constant_solution():
    return solver.solve(beltrami.constant_field(0.2), L=2.0, N=1024, tol=1e-10)


@pytest.fixture(scope="session")
def radial_solution():
    return solver.solve(beltrami.radial_field(beltrami.RadialProfile(0.3, 0.5)), L=2.0, N=1024, tol=1e-10)


@pytest.fixture(scope="session")
def aw_solution():
    phi = schwarzian.power_differential(0.1, 4)
    return phi, solver.solve(schwarzian.aw_section(phi), L=2.0, N=1024, tol=1e-10)


CRITERIA = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[CRITERIA] = {}


@pytest.fixture
def criterion(request):
    """Record one acceptance line; the test still asserts on its own."""

    def record(n, ok, detail):
        line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
        request.config.stash[CRITERIA][n] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(CRITERIA, {})
    if lines:
        terminalreporter.section("acceptance criteria")
        for n in sorted(lines):
            terminalreporter.write_line(lines[n])
