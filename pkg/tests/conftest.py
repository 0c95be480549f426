import sys
import warnings

import pytest

from halfline import QuadratureWarning, TailWarning


@pytest.fixture
def quiet():
    """Silence the numeric warning flags for checks that only look at values."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", QuadratureWarning)
        warnings.simplefilter("ignore", TailWarning)
        yield



def pytest_terminal_summary(terminalreporter):
    """Repeat the acceptance PASS/FAIL lines after the test run."""
    module = next((m for name, m in sys.modules.items() if name.endswith("test_acceptance")), None)
    results = getattr(module, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for number in sorted(results):
            terminalreporter.write_line(results[number])
