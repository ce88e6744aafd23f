import pytest

from maglev_cavity.cavity import DEFAULT_GEOMETRY
from maglev_cavity.levitation import LevitationConfig
from maglev_cavity.magnet import MagnetSpec


@pytest.fixture
def magnet():
    return MagnetSpec.from_grade("N50", 0.5e-3, 0.25e-3)


@pytest.fixture
def geom():
    return DEFAULT_GEOMETRY


@pytest.fixture
def cfg(magnet, geom):
    return LevitationConfig.default(magnet, geom)


def pytest_terminal_summary(terminalreporter):
    # Acceptance tests record one verdict line each; echo them at the end
    # of the run so they appear even with output capture on.
    from test_acceptance import VERDICTS

    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(VERDICTS):
            terminalreporter.write_line(VERDICTS[n])
