import pytest

from core.utils.logger import reset_failures


@pytest.fixture(autouse=True)
def reset_failure_tally():
    reset_failures()
    yield
    reset_failures()
