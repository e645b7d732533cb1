import os
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from tropsdp import MinAction, MaxAction, StochGame, jsonio
from tropsdp.tropical import MINUS_INF

HERE = os.path.dirname(os.path.abspath(__file__))
EXAMPLES = os.path.join(HERE, "..", "examples")


def example_path(name):
    return os.path.join(EXAMPLES, name)


@pytest.fixture(scope="session")
def running_pencil():
    return jsonio.pencil_from_json(jsonio.load_json(example_path("running.json")))


@pytest.fixture(scope="session")
def dominion_game():
    return jsonio.game_from_json(jsonio.load_json(example_path("dominion_game.json")))


# ---------------------------------------------------------------------------
# hypothesis strategies
# ---------------------------------------------------------------------------

small_rationals = st.fractions(
    min_value=Fraction(-3), max_value=Fraction(3), max_denominator=4)

# multiples of 1/16: exactly representable in float64 (so the double engine
# stays exact for a few dozen halving steps)
dyadic_rationals = st.integers(-48, 48).map(lambda k: Fraction(k, 16))


@st.composite
def games(draw, max_n=4, max_m=4, max_actions=3, rewards=small_rationals):
    """A random well-formed game: every state gets >= 1 action."""
    n = draw(st.integers(1, max_n))
    m = draw(st.integers(1, max_m))
    min_actions = []
    for _ in range(n):
        count = draw(st.integers(1, max_actions))
        acts = []
        for _ in range(count):
            pair = draw(st.lists(st.integers(0, m - 1), min_size=1, max_size=2))
            acts.append(MinAction(tuple(pair), draw(rewards)))
        min_actions.append(tuple(acts))
    max_actions_ = []
    for _ in range(m):
        count = draw(st.integers(1, max_actions))
        acts = [MaxAction(draw(st.integers(0, n - 1)), draw(rewards))
                for _ in range(count)]
        max_actions_.append(tuple(acts))
    return StochGame(n, m, tuple(min_actions), tuple(max_actions_))


@st.composite
def overlap_free_games(draw, max_n=3, max_m=3):
    """Games where no Min singleton {i} coexists with a Max action i -> k:
    for these, pencil round-trips preserve the operator pointwise.  We get
    this by making all Min actions proper pairs (i < j), which needs m >= 2.
    """
    n = draw(st.integers(1, max_n))
    m = draw(st.integers(2, max_m))
    min_actions = []
    for _ in range(n):
        count = draw(st.integers(1, 3))
        acts = []
        for _ in range(count):
            i = draw(st.integers(0, m - 2))
            j = draw(st.integers(i + 1, m - 1))
            acts.append(MinAction((i, j), draw(small_rationals)))
        min_actions.append(tuple(acts))
    max_actions_ = []
    for _ in range(m):
        count = draw(st.integers(1, 3))
        acts = [MaxAction(draw(st.integers(0, n - 1)), draw(small_rationals))
                for _ in range(count)]
        max_actions_.append(tuple(acts))
    return StochGame(n, m, tuple(min_actions), tuple(max_actions_))


def trop_points(n, allow_minus_inf=True):
    entry = st.one_of(small_rationals, st.just(MINUS_INF)) \
        if allow_minus_inf else small_rationals
    return st.lists(entry, min_size=n, max_size=n)
