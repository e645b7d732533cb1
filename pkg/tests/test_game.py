"""Pencil <-> game translation and dominion machinery."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tropsdp import (
    AssumptionViolated,
    MaxAction,
    MinAction,
    NotADominion,
    Pencil,
    PolicySpaceTooLarge,
    SignedTrop,
    StochGame,
    ValidationError,
    dominions,
    game_from_pencil,
    induced_subgame,
    is_dominion,
    membership_metzler,
    minimal_dominions,
    pencil_from_game,
    winning_dominions,
)
from tropsdp.shapley import apply_F
from tropsdp.tropical import MINUS_INF

from conftest import games, overlap_free_games, trop_points

F = Fraction


# ---------------------------------------------------------------------------
# construction and validation
# ---------------------------------------------------------------------------

def test_min_action_canonicalizes_targets():
    a = MinAction((2, 0), F(1))
    assert a.targets == (0, 2)
    assert MinAction((1, 1), F(0)).targets == (1,)


def test_min_action_rejects_bad_target_counts():
    with pytest.raises(ValidationError):
        MinAction((), F(0))
    with pytest.raises(ValidationError):
        MinAction((0, 1, 2), F(0))


def test_game_rejects_out_of_range_targets():
    with pytest.raises(ValidationError):
        StochGame(1, 1, ((MinAction((1,), F(0)),),), ((MaxAction(0, F(0)),),))
    with pytest.raises(ValidationError):
        StochGame(1, 1, ((MinAction((0,), F(0)),),), ((MaxAction(3, F(0)),),))


def test_game_rejects_actionless_states():
    with pytest.raises(ValidationError):
        StochGame(1, 1, ((),), ((MaxAction(0, F(0)),),))
    with pytest.raises(ValidationError):
        StochGame(1, 1, ((MinAction((0,), F(0)),),), ((),))


def test_game_dedupes_and_sorts_actions():
    g = StochGame(
        1, 2,
        (
            (
                MinAction((1, 0), F(2)),
                MinAction((0, 1), F(2)),  # duplicate after sorting targets
                MinAction((0,), F(-1)),
            ),
        ),
        ((MaxAction(0, F(0)),), (MaxAction(0, F(5)), MaxAction(0, F(0)))),
    )
    assert g.min_actions[0] == (MinAction((0,), F(-1)), MinAction((0, 1), F(2)))
    assert g.max_actions[1] == (MaxAction(0, F(0)), MaxAction(0, F(5)))
    assert g.policy_count() == 2 * 1 * 1 * 2


# ---------------------------------------------------------------------------
# pencil -> game on the worked example
# ---------------------------------------------------------------------------

def test_worked_example_game(running_pencil):
    g = game_from_pencil(running_pencil)
    assert (g.n, g.m) == (3, 3)
    assert g.min_actions == (
        (MinAction((0, 1), F(0)),),
        (MinAction((1,), F(0)),),
        (MinAction((0, 2), F(-3, 4)), MinAction((1, 2), F(0))),
    )
    assert g.max_actions == (
        (MaxAction(2, F(1)),),
        (MaxAction(0, F(-1)), MaxAction(2, F(-5, 4))),
        (MaxAction(1, F(9, 4)),),
    )


def test_translation_requires_negative_entry_per_matrix():
    P = Pencil.from_entries(1, 1, [(0, 0, 0, SignedTrop.pos(F(0)))])
    with pytest.raises(AssumptionViolated):
        game_from_pencil(P)


def test_translation_requires_positive_diagonal_per_row():
    P = Pencil.from_entries(1, 1, [(0, 0, 0, SignedTrop.neg(F(0)))])
    with pytest.raises(AssumptionViolated):
        game_from_pencil(P)


# ---------------------------------------------------------------------------
# game -> pencil
# ---------------------------------------------------------------------------

def test_diagonal_slot_keeps_binding_constraint():
    # Min wants -oo... the slot (0, 0, 0) twice over: negatively with
    # modulus -reward, positively with the Max reward.  The larger modulus
    # wins; ties go to the positive side.
    def slot(min_reward, max_reward):
        g = StochGame(
            1, 1,
            ((MinAction((0,), min_reward),),),
            ((MaxAction(0, max_reward),),),
        )
        return pencil_from_game(g).matrices[0][0][0]

    assert slot(F(-5), F(3)) == SignedTrop.neg(F(5))
    assert slot(F(-2), F(3)) == SignedTrop.pos(F(3))
    assert slot(F(-3), F(3)) == SignedTrop.pos(F(3))


def test_parallel_actions_collapse_to_dominant():
    g = StochGame(
        1, 2,
        ((MinAction((0, 1), F(-1)), MinAction((0, 1), F(-4))),),
        ((MaxAction(0, F(2)), MaxAction(0, F(7))), (MaxAction(0, F(0)),)),
    )
    P = pencil_from_game(g)
    assert P.matrices[0][0][1] == SignedTrop.neg(F(4))
    assert P.matrices[0][0][0] == SignedTrop.pos(F(7))


def test_round_trip_reproduces_worked_pencil(running_pencil):
    # no Min singleton of the example competes with a Max action for its
    # diagonal slot, so the translation inverts exactly
    assert pencil_from_game(game_from_pencil(running_pencil)) == running_pencil


@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_round_trip_preserves_operator_on_overlap_free_games(data):
    g = data.draw(overlap_free_games())
    back = game_from_pencil(pencil_from_game(g))
    x = data.draw(trop_points(g.n))
    assert apply_F(back, x) == apply_F(g, x)


@settings(max_examples=80, deadline=None)
@given(data=st.data())
def test_pencil_membership_is_the_zero_sublevel_set(data):
    # at lambda = 0 the spectrahedron of the packed pencil is exactly
    # {x : x <= F(x)}, diagonal-slot conflicts included
    g = data.draw(games())
    P = pencil_from_game(g)
    x = data.draw(trop_points(g.n))
    fx = apply_F(g, x)
    in_sublevel = all(xk <= fk if xk is not MINUS_INF else True
                      for xk, fk in zip(x, fx))
    assert membership_metzler(P, x) == in_sublevel


# ---------------------------------------------------------------------------
# dominions
# ---------------------------------------------------------------------------

def test_dominion_enumeration(dominion_game):
    got = dominions(dominion_game)
    expected = [
        {0}, {2}, {3},
        {0, 2}, {0, 3}, {2, 3},
        {0, 2, 3}, {1, 2, 3},
        {0, 1, 2, 3},
    ]
    assert got == [frozenset(d) for d in expected]


def test_minimal_dominions_per_state(dominion_game):
    got = minimal_dominions(dominion_game)
    assert got == [frozenset({0}), frozenset({2}), frozenset({3}),
                   frozenset({1, 2, 3})]


def test_winning_dominions(dominion_game):
    assert winning_dominions(dominion_game) == [frozenset({2})]


def test_is_dominion_rejects_bad_subsets(dominion_game):
    with pytest.raises(ValidationError):
        is_dominion(dominion_game, ())
    with pytest.raises(ValidationError):
        is_dominion(dominion_game, {0, 7})


def test_induced_subgame_requires_dominion(dominion_game):
    assert not is_dominion(dominion_game, {1})
    with pytest.raises(NotADominion):
        induced_subgame(dominion_game, {1})


def test_induced_subgame_renumbers_states(dominion_game):
    sub = induced_subgame(dominion_game, {1, 2, 3})
    # Min states 1,2,3 -> 0,1,2; reachable Max states 1,2 -> 0,1
    assert (sub.n, sub.m) == (3, 2)
    assert sub.min_actions == (
        (MinAction((0, 1), F(0)),),
        (MinAction((0,), F(2)),),
        (MinAction((1,), F(0)),),
    )
    assert sub.max_actions == (
        (MaxAction(1, F(0)),),
        (MaxAction(2, F(-1)),),
    )


def test_enumeration_refuses_large_games(dominion_game):
    with pytest.raises(PolicySpaceTooLarge):
        dominions(dominion_game, max_states=3)
    with pytest.raises(PolicySpaceTooLarge):
        winning_dominions(dominion_game, max_states=3)


@settings(max_examples=40, deadline=None)
@given(g=games(max_n=4, max_m=3))
def test_full_state_set_is_always_a_dominion(g):
    assert is_dominion(g, range(g.n))


@settings(max_examples=30, deadline=None)
@given(g=games(max_n=4, max_m=3))
def test_dominions_are_closed_under_union(g):
    found = dominions(g)
    for a in found:
        for b in found:
            assert frozenset(a | b) in found
