import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from iwasawa_tower import kernels  # noqa: E402

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
FIXTURES = os.path.join(ROOT, "fixtures")


@pytest.fixture(params=kernels.available_backends())
def backend(request):
    old = kernels.BACKEND
    kernels.use_backend(request.param)
    yield request.param
    kernels.use_backend(old)


@pytest.fixture
def fixture_path():
    return lambda name: os.path.join(FIXTURES, name)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
