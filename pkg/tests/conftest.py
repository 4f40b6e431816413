import numpy as np
import pytest

from csf_lab import exact_solutions as ex
from csf_lab import flow_theta as ft


@pytest.fixture(scope="session")
def oval_run():
    """Pressure run from the lambda=1, gamma=0 oval at t=-2 to t=-0.2, n=256."""
    initial = ex.oval_pressure(ex.OvalParams(1.0, 0.0), -2.0, 256)
    return ft.evolve_pressure(initial, -0.2, ft.SolverControls(n_output=40))


@pytest.fixture(scope="session")
def perturbed_run():
    """Non-ancient run from 1 + 0.3 cos 3theta, t = -1 to -0.8."""
    initial = ft.CurvatureProfile.from_function(lambda th: 1 + 0.3 * np.cos(3 * th),
                                                128, time=-1.0)
    return ft.evolve_pressure(initial, -0.8, ft.SolverControls(n_output=40))


def pytest_terminal_summary(terminalreporter):
    """Print one line per acceptance criterion that ran."""
    import sys

    module = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in range(1, 13):
        if number in results:
            ok, detail = results[number]
            terminalreporter.write_line(f"{number:2d} {'PASS' if ok else 'FAIL'}  {detail}")
        else:
            terminalreporter.write_line(f"{number:2d} NOT RUN (errored or deselected)")
