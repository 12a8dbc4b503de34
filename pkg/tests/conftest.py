import pytest

from airace.model import default_scenario, new_game
from airace.model.types import TurnOrders
from airace.rng import GameRng, RngDice


@pytest.fixture(scope="session")
def scenario():
    return default_scenario()


@pytest.fixture
def state(scenario):
    return new_game(scenario, 42)


@pytest.fixture
def dice():
    return RngDice(GameRng.from_seed(42))


def empty_orders(state):
    return {t: TurnOrders.empty(t, state.turn + 1) for t in state.live_teams()}
