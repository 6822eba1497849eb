import numpy as np
import pytest

from dualgap.core import VACUUM_PERMITTIVITY, um
from dualgap.lumped import LumpedActuator

# k recovered by inverting V_PI = sqrt(8 k d^3 / (27 eps S)) at 12 V, 4.5 um,
# 3.2e-8 m^2: 27 * 8.854e-12 * 3.2e-8 * 144 / (8 * 4.5e-6**3) = 1.51108 N/m
REFERENCE_K = 1.511

_CRITERIA = []


def record_criterion(number, name, ok, detail=""):
    _CRITERIA.append((number, name, ok, detail))
    return ok


@pytest.fixture
def criterion():
    return record_criterion


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number, name, ok, detail in sorted(_CRITERIA, key=lambda c: c[0]):
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"[{status}] {number:2d}. {name}  {detail}")


@pytest.fixture
def reference_actuator():
    return LumpedActuator(REFERENCE_K, um(4.5), 3.2e-8, VACUUM_PERMITTIVITY)


def random_actuators(n, seed):
    rng = np.random.default_rng(seed)
    return [
        LumpedActuator(
            spring_constant=10 ** rng.uniform(-1, 2),
            gap=10 ** rng.uniform(-6.7, -5),
            actuation_area=10 ** rng.uniform(-9.5, -7),
        )
        for _ in range(n)
    ]
