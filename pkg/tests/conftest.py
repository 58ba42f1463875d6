import pytest
from click.testing import CliRunner
from hypothesis import settings

from pragmatic.resources import Fixture, load_fixture
from pragmatic.utils import Config, Context

# numpy calls make the first example of a test slow
settings.register_profile('pragmatic', deadline=None, max_examples=50)
settings.load_profile('pragmatic')


@pytest.fixture
def context():
    return Context(Config(progress=False))


@pytest.fixture
def runner():
    return CliRunner(mix_stderr=False)


@pytest.fixture
def boolean_joint():
    return load_fixture(Fixture.BOOLEAN_JOINT)


@pytest.fixture
def boolean_delta_prime():
    return load_fixture(Fixture.BOOLEAN_DELTA_PRIME)
