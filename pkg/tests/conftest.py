import numpy as np
import pytest

from hirota_painleve.phase import HirotaParams


@pytest.fixture
def standard_params():
    # alpha^2/(3 beta) = 1 and kstar = -1/2
    return HirotaParams(1.0, 1.0 / 3.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240531)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(RESULTS):
        ok, detail = RESULTS[criterion]
        terminalreporter.write_line(f"criterion {criterion}: {'PASS' if ok else 'FAIL'}  {detail}")
