from __future__ import annotations

import math

import pytest

from quadcone import analysis, simulator
from quadcone.params import VehicleParams

FIG10_PHIS = (0.0, math.pi / 12, math.pi / 10, math.pi / 8, math.pi / 6)
FT_PHIS = (math.pi / 12, math.pi / 10, math.pi / 8, math.pi / 6)


@pytest.fixture
def params():
    return VehicleParams()


@pytest.fixture(scope="session")
def hover_traces():
    """2 s symmetric-hover runs on the reference cone-angle grid."""
    out = {}
    for phi in FIG10_PHIS:
        config, schedule = simulator.symmetric_hover_scenario(phi)
        out[phi] = simulator.run(config, schedule)
    return out


@pytest.fixture(scope="session")
def ft_traces():
    """Ten-revolution fault-tolerant hover runs, one per cone angle."""
    out = {}
    for phi in FT_PHIS:
        config, schedule = simulator.ft_hover_scenario(phi, periods=10)
        out[phi] = (config, schedule, simulator.run(config, schedule))
    return out


@pytest.fixture(scope="session")
def ft_spectra():
    return {phi: analysis.simulate_ft_oscillation(phi) for phi in FT_PHIS}


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
