import numpy as np
import pytest
from hypothesis import settings

from friction_switch.model import REFERENCE_WRAP_ANGLE, FrictionCurve, SwitchModelParams, switch_friction_curve

settings.register_profile("default", deadline=None)
settings.load_profile("default")

_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _ACCEPTANCE[report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, outcome in _ACCEPTANCE.items():
        name = nodeid.split("::")[-1]
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")


@pytest.fixture
def dense_loads():
    return np.linspace(0.5, 50.0, 100)


@pytest.fixture
def capstan_branches(dense_loads):
    """Pins-only and substrate-only curves from the capstan law."""
    low = FrictionCurve.from_arrays(dense_loads, dense_loads * np.sinh(0.05 * REFERENCE_WRAP_ANGLE), label="pins")
    high = FrictionCurve.from_arrays(dense_loads, dense_loads * np.sinh(0.24 * REFERENCE_WRAP_ANGLE), label="silicone")
    return low, high


@pytest.fixture
def truth_params():
    return SwitchModelParams(weight=0.1, threshold_force=4.3).with_width(5.5)


@pytest.fixture
def synthetic_device(dense_loads, capstan_branches, truth_params):
    low, high = capstan_branches
    return switch_friction_curve(dense_loads, low, high, truth_params, label="device")
