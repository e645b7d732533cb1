"""Pencils: membership, Metzlerization, normalization, homogenization."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from tropsdp import (Pencil, ValidationError, membership_general,
                     membership_metzler, metzlerize, normalize, homogenize,
                     require_metzler, support)
from tropsdp.errors import AssumptionViolated
from tropsdp.tropical import MINUS_INF, NEG, POS, TROP_ZERO, SignedTrop

F = Fraction


def P(sign, val):
    return SignedTrop.pos(F(val)) if sign == "+" else SignedTrop.neg(F(val))


# -- strategies --------------------------------------------------------------

mods = st.fractions(min_value=F(-2), max_value=F(2), max_denominator=4)

metzler_diag = st.one_of(st.just(TROP_ZERO), st.builds(SignedTrop.pos, mods),
                         st.builds(SignedTrop.neg, mods))
metzler_off = st.one_of(st.just(TROP_ZERO), st.builds(SignedTrop.neg, mods))
any_entry = st.one_of(st.just(TROP_ZERO), st.builds(SignedTrop.pos, mods),
                      st.builds(SignedTrop.neg, mods))


@st.composite
def metzler_pencils(draw, max_n=3, max_m=3):
    n = draw(st.integers(1, max_n))
    m = draw(st.integers(1, max_m))
    mats = []
    for _ in range(n):
        grid = [[TROP_ZERO] * m for _ in range(m)]
        for i in range(m):
            grid[i][i] = draw(metzler_diag)
            for j in range(i + 1, m):
                grid[i][j] = grid[j][i] = draw(metzler_off)
        mats.append(tuple(tuple(r) for r in grid))
    return Pencil(n, m, tuple(mats))


@st.composite
def general_pencils(draw, max_n=3, max_m=3):
    n = draw(st.integers(1, max_n))
    m = draw(st.integers(1, max_m))
    mats = []
    for _ in range(n):
        grid = [[TROP_ZERO] * m for _ in range(m)]
        for i in range(m):
            grid[i][i] = draw(metzler_diag)
            for j in range(i + 1, m):
                grid[i][j] = grid[j][i] = draw(any_entry)
        mats.append(tuple(tuple(r) for r in grid))
    return Pencil(n, m, tuple(mats))


def points(n):
    coord = st.one_of(st.just(MINUS_INF), mods)
    return st.lists(coord, min_size=n, max_size=n)


# -- construction ------------------------------------------------------------

def test_pencil_validates_symmetry():
    with pytest.raises(ValidationError):
        Pencil(1, 2, (((TROP_ZERO, P("-", 0)), (TROP_ZERO, TROP_ZERO)),))


def test_from_entries_rejects_bad_indices():
    with pytest.raises(ValidationError):
        Pencil.from_entries(1, 2, [(0, 1, 0, P("-", 0))])  # i > j
    with pytest.raises(ValidationError):
        Pencil.from_entries(1, 2, [(2, 0, 0, P("+", 0))])  # k out of range


def test_require_metzler(running_pencil):
    require_metzler(running_pencil)  # no raise
    bad = Pencil.from_entries(1, 2, [(0, 0, 1, P("+", 0))])
    with pytest.raises(ValidationError):
        require_metzler(bad)


def test_support():
    assert support([MINUS_INF, F(0), F(-3)]) == frozenset({1, 2})


# -- membership on the worked example ---------------------------------------

def test_running_example_membership(running_pencil):
    assert membership_metzler(running_pencil, [F(0), F(-1), F(0)])
    assert not membership_metzler(running_pencil, [F(0), F(-2), F(0)])


def test_running_example_reinforced_membership(running_pencil):
    # the margin of this instance is 1/28, so slightly smaller lambdas keep
    # a suitable point inside and larger ones empty the reinforced set
    x = [F(0), F(-1), F(0)]
    assert membership_metzler(running_pencil, x, F(0))
    assert not membership_metzler(running_pencil, x, F(1))


def test_membership_rejects_wrong_arity(running_pencil):
    with pytest.raises(ValidationError):
        membership_metzler(running_pencil, [F(0)])


def test_trivial_point_always_member(running_pencil):
    assert membership_metzler(running_pencil, [MINUS_INF] * 3)


@given(metzler_pencils(), st.data())
def test_membership_shift_invariance(Pz, data):
    """The spectrahedron is a cone: adding a constant to every coordinate
    (tropical scaling) cannot change membership."""
    x = data.draw(points(Pz.n))
    c = data.draw(mods)
    shifted = [MINUS_INF if v is MINUS_INF else v + c for v in x]
    assert membership_metzler(Pz, x) == membership_metzler(Pz, shifted)


@given(metzler_pencils(), st.data())
def test_membership_closed_under_max(Pz, data):
    x = data.draw(points(Pz.n))
    y = data.draw(points(Pz.n))
    if membership_metzler(Pz, x) and membership_metzler(Pz, y):
        assert membership_metzler(Pz, [max(a, b) for a, b in zip(x, y)])


@given(metzler_pencils(), st.data())
def test_membership_monotone_in_lambda(Pz, data):
    x = data.draw(points(Pz.n))
    lo = data.draw(mods)
    hi = lo + data.draw(st.fractions(min_value=0, max_value=2, max_denominator=4))
    if membership_metzler(Pz, x, hi):
        assert membership_metzler(Pz, x, lo)


@given(metzler_pencils(), st.data())
def test_general_membership_agrees_on_metzler_pencils(Pz, data):
    """With no positive off-diagonal entries the vanishing disjunct can
    only fire when the negative part is -oo too, so both notions agree."""
    x = data.draw(points(Pz.n))
    assert membership_general(Pz, x) == membership_metzler(Pz, x)


# -- metzlerization ----------------------------------------------------------

def test_metzlerize_shape_and_output_is_metzler():
    Pg = Pencil.from_entries(2, 2, [
        (0, 0, 0, P("+", 1)), (0, 0, 1, P("+", 0)),
        (1, 0, 1, P("-", "1/2")), (1, 1, 1, P("+", 0)),
    ])
    assert not Pg.is_metzler()
    M = metzlerize(Pg)
    pairs = 1  # m = 2 has a single off-diagonal pair
    assert M.pencil.n == Pg.n + pairs
    assert M.pencil.m == Pg.m + 4 * pairs
    assert M.pencil.is_metzler()
    assert M.source is Pg


@settings(max_examples=60)
@given(general_pencils(), st.data())
def test_metzlerize_membership_projection(Pg, data):
    """Membership in a general pencil coincides with membership of the
    canonical lifted point in the Metzlerized pencil."""
    x = data.draw(points(Pg.n))
    M = metzlerize(Pg)
    lifted = M.witness(x)
    assert membership_general(Pg, x) == membership_metzler(M.pencil, lifted)


def test_metzlerize_on_metzler_input_preserves_membership(running_pencil):
    M = metzlerize(running_pencil)
    x = [F(0), F(-1), F(0)]
    assert membership_metzler(M.pencil, M.witness(x))
    y = [F(0), F(-2), F(0)]
    assert not membership_metzler(M.pencil, M.witness(y))


# -- normalization -----------------------------------------------------------

def test_normalize_trivial_single_negative_diagonal():
    Pz = Pencil.from_entries(1, 1, [(0, 0, 0, P("-", 0))])
    res = normalize(Pz)
    assert res.kind == "trivial"
    assert res.eliminated_variables == (0,)


def test_normalize_nontrivial_positive_matrix():
    Pz = Pencil.from_entries(1, 1, [(0, 0, 0, P("+", 0))])
    res = normalize(Pz)
    assert res.kind == "nontrivial"
    assert res.witness_variable == 0
    assert membership_metzler(Pz, [F(0)])


def test_normalize_keeps_well_formed_instances(running_pencil):
    res = normalize(running_pencil)
    assert res.kind == "reduced"
    assert res.pencil is running_pencil
    assert res.eliminated_variables == ()
    assert res.variable_map == (0, 1, 2)


def test_normalize_finds_witness_before_any_elimination():
    # variable 1 is free of negative coefficients from the start, so the
    # nontrivial verdict short-circuits the forced reductions entirely
    # (variable 0's doomed diagonal never gets processed)
    Pz = Pencil.from_entries(2, 2, [
        (0, 1, 1, P("-", 0)),
        (1, 0, 0, P("+", 0)),
    ])
    res = normalize(Pz)
    assert res.kind == "nontrivial"
    assert res.witness_variable == 1
    assert res.eliminated_variables == ()


def test_normalize_off_diagonal_on_dead_row_kills_both_variables():
    # same shape but variable 1 also has an off-diagonal entry on the dead
    # row: the 2x2 constraint (-oo on the left) forces it to -oo as well
    Pz = Pencil.from_entries(2, 2, [
        (0, 1, 1, P("-", 0)),
        (1, 0, 0, P("+", 0)), (1, 0, 1, P("-", 3)),
    ])
    res = normalize(Pz)
    assert res.kind == "trivial"
    assert set(res.eliminated_variables) == {0, 1}


def test_normalize_removes_empty_rows_and_embeds_points():
    # row 2 is -oo everywhere: constrains nothing and gets dropped
    Pz = Pencil.from_entries(2, 3, [
        (0, 0, 0, P("+", 0)), (0, 0, 1, P("-", 0)),
        (1, 1, 1, P("+", 0)), (1, 0, 1, P("-", 5)),
    ])
    res = normalize(Pz)
    assert res.kind == "reduced"
    assert res.removed_rows == (2,)
    assert res.pencil.m == 2 and res.pencil.n == 2
    embedded = res.embed_point([F(5), F(7)], 2)
    assert embedded == [F(5), F(7)]


@given(metzler_pencils(), st.data())
def test_normalize_verdicts_against_membership_oracle(Pz, data):
    """trivial => no nonzero grid point is a member; nontrivial => the
    witness ray is; reduced => membership transfers through the embedding
    and eliminated variables are forced to -oo."""
    res = normalize(Pz)
    if res.kind == "trivial":
        for _ in range(20):
            x = data.draw(points(Pz.n))
            if support(x):
                assert not membership_metzler(Pz, x)
    elif res.kind == "nontrivial":
        ray = [MINUS_INF] * Pz.n
        ray[res.witness_variable] = F(0)
        assert membership_metzler(Pz, ray)
    else:
        reduced = res.pencil
        for _ in range(10):
            xr = data.draw(points(reduced.n))
            full = res.embed_point(xr, Pz.n)
            assert membership_metzler(reduced, xr) == membership_metzler(Pz, full)
        for gone in res.eliminated_variables:
            x = data.draw(points(Pz.n))
            x[gone] = data.draw(mods)
            assert not membership_metzler(Pz, x)


def test_nontrivial_witness_is_always_a_member():
    # targeted regression: the witness variable must come from the original
    # indexing even after eliminations shuffled things around
    Pz = Pencil.from_entries(3, 2, [
        (0, 1, 1, P("-", 0)),
        (1, 0, 0, P("+", 2)), (1, 0, 1, P("-", 1)),
        (2, 0, 0, P("+", 0)),
    ])
    res = normalize(Pz)
    assert res.kind == "nontrivial"
    ray = [MINUS_INF] * 3
    ray[res.witness_variable] = F(0)
    assert membership_metzler(Pz, ray)


# -- homogenization ----------------------------------------------------------

def test_homogenize_identity_without_sign_free_vars(running_pencil):
    H = homogenize(running_pencil)
    assert H.pencil.matrices == running_pencil.matrices
    assert H.source == ((0, 1), (1, 1), (2, 1))


def test_homogenize_splits_sign_free_variables(running_pencil):
    H = homogenize(running_pencil, sign_free=[1])
    assert H.pencil.n == 4
    assert H.source == ((0, 1), (1, 1), (1, -1), (2, 1))
    # the split copy is the sign-flip of the original matrix
    orig = running_pencil.matrices[1]
    flipped = H.pencil.matrices[2]
    for i in range(3):
        for j in range(3):
            assert flipped[i][j] == orig[i][j].negated()


def test_homogenize_rejects_sign_free_affine_variable(running_pencil):
    affine = Pencil(3, 3, running_pencil.matrices, affine=True)
    with pytest.raises(ValidationError):
        homogenize(affine, sign_free=[0])
