"""
Pytest configuration and fixtures for the social-utility audit tests.
"""
import os
import sys

import numpy as np
import pytest

# Add project root to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

# Set testing environment before importing app
os.environ['FLASK_ENV'] = 'testing'

from socialeu.app import create_app
from socialeu.fixture import decision_view, game_utility, illustrative_game, selfish_eu_utility, step_social
from socialeu.game import Game, MixedStrategy, Profile
from socialeu.probes import ProbeConfig


@pytest.fixture(scope='session')
def app():
    """Create application for testing."""
    return create_app('testing')


@pytest.fixture(scope='function')
def client(app):
    """Create test client."""
    return app.test_client()


@pytest.fixture
def game():
    """The two-by-two game with Alice's payoffs [[0, 10], [30, 0]] and Bob's [[20, 0], [0, 20]]."""
    return illustrative_game()


@pytest.fixture
def view():
    """The same game with Bob collapsed to his uniform mix."""
    return decision_view()


@pytest.fixture
def step():
    return step_social()


@pytest.fixture
def u_g():
    return game_utility()


@pytest.fixture
def u_d_eu():
    return selfish_eu_utility()


@pytest.fixture
def uniform_col():
    return MixedStrategy.uniform(2)


@pytest.fixture
def at_left(uniform_col):
    return Profile(MixedStrategy.pure(2, 0), uniform_col)


@pytest.fixture
def at_right(uniform_col):
    return Profile(MixedStrategy.pure(2, 1), uniform_col)


@pytest.fixture
def at_mix(uniform_col):
    return Profile(MixedStrategy.uniform(2), uniform_col)


@pytest.fixture
def cfg():
    """Small probe budget for fast tests."""
    return ProbeConfig(n_random=200, seed=7)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def three_by_three(rng):
    return Game(
        row_labels=('a1', 'a2', 'a3'),
        col_labels=('b1', 'b2', 'b3'),
        m1=rng.uniform(-10, 10, size=(3, 3)),
        m2=rng.uniform(-10, 10, size=(3, 3)),
    )


@pytest.fixture
def fixture_dir(tmp_path):
    """The illustrative example written out as JSON files."""
    from socialeu.fixture import export_fixture
    export_fixture(str(tmp_path))
    return tmp_path
