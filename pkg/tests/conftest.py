import pytest

from helpers import chain2


@pytest.fixture
def chain2_model():
    return chain2()
