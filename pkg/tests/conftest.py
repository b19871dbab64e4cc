import functools

import pytest
from hypothesis import HealthCheck, settings

from mubplanes.families import planar_exponents
from mubplanes.frames import frames_from_exponents

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


@functools.lru_cache(maxsize=None)
def planar_family():
    return planar_exponents(5, 3)


@functools.lru_cache(maxsize=None)
def planar_mubset():
    return frames_from_exponents(planar_family())


@pytest.fixture(scope="session")
def planar():
    return planar_mubset()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
