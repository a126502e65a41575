import importlib
import random

import pytest

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def rng():
    return random.Random(20261015)


@pytest.fixture(params=["python", "cython"])
def kernel_module(request):
    """Each kernel implementation that is available in this build."""
    if request.param == "python":
        return importlib.import_module("so3zi._kernels_py")
    try:
        return importlib.import_module("so3zi._kernels")
    except ImportError:
        pytest.skip("compiled kernels not built")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
