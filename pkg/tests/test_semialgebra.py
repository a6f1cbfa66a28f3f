from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from symbolhomology.core import POINTED, make_point, pregenerator
from symbolhomology.examples import load_fixture
from symbolhomology.grammar import format_element, parse_coeff, parse_element
from symbolhomology.laws import generator_pool
from symbolhomology.semialgebra import (
    OMEGA,
    ZERO,
    Coeff,
    boxplus,
    boxproduct,
    boxtimes,
    profiles_of,
    reduce_factor,
    scalar,
    word_profiles,
)

TRI = load_fixture("triangle.json")
POOL = generator_pool(TRI, random.Random(7), size=24)
elems = st.sampled_from(POOL)


def test_pool_is_usable():
    assert len(POOL) >= 12


@given(elems, elems)
def test_sum_commutes(x, y):
    assert boxplus(x, y) == boxplus(y, x)


@given(elems, elems, elems)
def test_sum_associates(x, y, z):
    assert boxplus(boxplus(x, y), z) == boxplus(x, boxplus(y, z))


@given(elems)
def test_sum_units_and_absorption(x):
    assert boxplus(x, ZERO) == x
    assert boxplus(ZERO, x) == x
    assert boxplus(x, OMEGA) == OMEGA
    assert boxplus(OMEGA, OMEGA) == OMEGA


@given(elems)
def test_self_sum_cancels_but_keeps_profile(x):
    s = boxplus(x, x)
    assert s.is_zero and not s.omega
    assert profiles_of(s) == profiles_of(x)


@settings(max_examples=200)
@given(elems, elems, elems)
def test_product_associates_on_generators(x, y, z):
    assert boxtimes(boxtimes(x, y, TRI), z, TRI) == boxtimes(x, boxtimes(y, z, TRI), TRI)


@given(elems)
def test_product_with_units(x):
    assert boxtimes(OMEGA, x, TRI) == OMEGA
    assert boxtimes(x, OMEGA, TRI) == OMEGA
    assert boxtimes(x, ZERO, TRI) == ZERO
    assert boxtimes(ZERO, x, TRI) == ZERO


@given(elems, elems, st.integers(0, 3))
def test_scalar_commutes_with_product(x, y, k):
    f = Coeff.u_power(k) + Coeff.one()
    xy = boxtimes(x, y, TRI)
    assert scalar(f, xy, TRI) == boxtimes(scalar(f, x, TRI), y, TRI) == boxtimes(x, scalar(f, y, TRI), TRI)


@given(elems, elems)
def test_product_profile_is_additive(x, y):
    xy = boxtimes(x, y, TRI)
    if xy.omega or xy.profile is None:
        return
    prof = profiles_of(xy)
    for w, _ in xy.terms:
        got = word_profiles(w)
        assert (+got[0], +got[1]) == (+prof[0], +prof[1])


def test_mismatched_sum_is_omega():
    x = parse_element("M[1;(a,b)](^x1, .v)", TRI)
    y = parse_element("M[1;(a,g)](^q1, .v)", TRI)
    assert boxplus(x, y) == OMEGA


def test_non_generator_middle_factor_breaks_associativity():
    # a fully pointed factor is absorbed into the coefficient on one bracketing only
    x = parse_element("M[0;(a,g)](.v, ^q1)", TRI)
    y = parse_element("M[0;(b,g)](^y1, @y1)", TRI)
    z = parse_element("M[1;(a,g,b)](.v, .v, ^x1)", TRI)
    assert boxtimes(boxtimes(x, y, TRI), z, TRI) == OMEGA
    right = boxtimes(x, boxtimes(y, z, TRI), TRI)
    assert not right.omega and not right.is_zero


def test_single_crossing_cube_equals_square():
    o = load_fixture("T_ml.json")
    x = parse_element("M[0;(a,b)](.v, ^x)", o)
    x2, x3 = boxproduct([x, x], o), boxproduct([x, x, x], o)
    assert boxplus(x3, x2).is_zero
    assert not x2.is_zero


def test_reduce_factor_constant_bigons():
    p, q = make_point("p", "a", "b"), make_point("q", "a", "b")
    same = pregenerator(("a", "b"), 0, [(POINTED, p), (POINTED, p)])
    other = pregenerator(("a", "b"), 0, [(POINTED, p), (POINTED, q)])
    assert reduce_factor(same) == 1
    assert reduce_factor(other) == 0


def test_coeff_ring_arithmetic():
    u = Coeff.u_power(1)
    one = Coeff.one()
    assert (u + u).is_zero
    assert (one * u) == u
    assert (u + one) * (u + one) == Coeff.u_power(2) + one


# ---------------------------------------------------------------------------
# text grammar

@given(elems, elems)
def test_format_parse_round_trip(x, y):
    for v in (x, boxplus(x, y), boxtimes(x, y, TRI)):
        assert parse_element(format_element(v), TRI) == v


@pytest.mark.parametrize("text", [
    "M[0;(a,b)](.v, ^x1)",
    "M[1;(a,b);w0](^x1, .v)",
    "M[1;(a,b);nw=1](^x1, .v)",
    "{U}•M[1;(a,b)](^x1, .v)",
    "Omega",
    "0",
])
def test_parse_examples_round_trip(text):
    x = parse_element(text, TRI)
    assert parse_element(format_element(x), TRI) == x


def test_parse_coeff():
    c = parse_coeff("U^2 + 1", TRI)
    assert c == Coeff.u_power(2) + Coeff.one()


@pytest.mark.parametrize("bad", ["M[0;(a,b)](.v, ^nowhere)", "M[0;(a,a)](.v, .v)", "M[0;(a,b)](.v"])
def test_parse_errors(bad):
    from symbolhomology.errors import SymbolError
    with pytest.raises((SymbolError, ValueError)):
        parse_element(bad, TRI)
