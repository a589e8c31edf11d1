import os
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from eqres.cli import load_system_file

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def fixture_path(name):
    return str(FIXTURES / name)


@pytest.fixture(scope="session")
def buse5():
    return load_system_file(fixture_path("buse5.json"))


@pytest.fixture(scope="session")
def disc4():
    return load_system_file(fixture_path("disc4.json"))
