import sys

import pytest

from vcsp_backdoor import _backend


@pytest.fixture(params=_backend.available_backends())
def backend(request):
    """Run a test once per available kernel backend."""
    previous = _backend.backend_name()
    _backend.set_backend(request.param)
    yield request.param
    _backend.set_backend(previous)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    verdicts = getattr(module, "VERDICTS", None)
    if verdicts:
        terminalreporter.section("acceptance criteria")
        for number in sorted(verdicts):
            terminalreporter.write_line(verdicts[number])
