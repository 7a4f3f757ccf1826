import pytest

from gauss2d.generator import KernelSpec, generate_all_scales

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def spec():
    return KernelSpec()


@pytest.fixture(scope="session")
def tiles(spec):
    """Default 256x256 tiles keyed by sigma."""
    ts, _ = generate_all_scales(spec)
    return {t.sigma: t for t in ts}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
