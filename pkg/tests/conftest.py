import pytest

from rocketbvp.model import ExhaustProfile, MassProfile, ScenarioConfig
from rocketbvp.scenario_io import bundled_scenario as bundled, load_scenario


def make(**kw):
    kw.setdefault("t0", 0.0)
    kw.setdefault("x0", 0.0)
    kw.setdefault("C_D", 0.75)
    c = kw.pop("c", -3000.0)
    kw.setdefault("exhaust", ExhaustProfile.constant(c))
    return ScenarioConfig(**kw)


@pytest.fixture
def linear_cfg():
    return load_scenario(bundled("linear"))[0]


@pytest.fixture
def certified_cfg():
    return load_scenario(bundled("certified_drag"))[0]


@pytest.fixture
def desk_cfg():
    return load_scenario(bundled("uncertified_convergent"))[0]


@pytest.fixture
def coast_cfg():
    """Thrown body with drag and no burn: beta = -g everywhere."""
    return make(t1=10.0, x1=1000.0, A=0.01, mass=MassProfile(10.0))


@pytest.fixture
def ballistic_cfg():
    return make(t1=2.0, x1=5.0, A=0.0, mass=MassProfile(100.0), n_grid=21)


RESULTS: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
