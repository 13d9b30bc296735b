import pytest

from eden.config import override, preset


@pytest.fixture(scope="session")
def day_and_night():
    return preset("day_and_night")


@pytest.fixture(scope="session")
def short_world():
    # life_limit 30 keeps full-episode tests quick
    return override(preset("day_and_night"), life_limit=30)
