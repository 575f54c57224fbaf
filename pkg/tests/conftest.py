import math
import sys

import pytest
from hypothesis import HealthCheck, settings

from steklov_bounds import GeometricData

settings.register_profile("repo", deadline=None, derandomize=True,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")


def flat_ball_data(n, kappa=1.0, r=1.0):
    return GeometricData(n=n, ric_lower_global=0.0, ric_lower_collar=0.0, ric_upper_collar=0.0,
                         sec_upper_collar=0.0, sec_lower_collar=0.0, kappa_lower=kappa,
                         kappa_upper=kappa, mean_lower=n * kappa, mean_upper=n * kappa,
                         rolling_radius=r, collar_radius=r)


@pytest.fixture
def unit_ball():
    return flat_ball_data(2)


@pytest.fixture
def cap_data():
    # quarter-radius cap of the unit 2-sphere, written out by hand
    R = math.pi / 4
    return GeometricData(n=2, ric_lower_global=2.0, ric_lower_collar=2.0, ric_upper_collar=2.0,
                         sec_upper_collar=1.0, sec_lower_collar=0.0, kappa_lower=1.0, kappa_upper=1.0,
                         mean_lower=2.0, mean_upper=2.0, rolling_radius=R, collar_radius=R)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in module.summary_lines():
        terminalreporter.write_line(line)
