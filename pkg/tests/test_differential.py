from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from symbolhomology.core import GENERATOR, classify
from symbolhomology.differential import diff, diff_coeff
from symbolhomology.examples import load_fixture, pointed_candidates, triangle_elements
from symbolhomology.grammar import parse_coeff, parse_element
from symbolhomology.laws import generator_pool
from symbolhomology.semialgebra import OMEGA, ZERO, Coeff, boxplus, boxsum, boxtimes, generator

TRI = load_fixture("triangle.json")
POOL = generator_pool(TRI, random.Random(11), size=24)
elems = st.sampled_from(POOL)


def _fixture_generators(o):
    return [generator(g, o) for g in pointed_candidates(o) if classify(g) == GENERATOR]


@pytest.mark.parametrize("name", ["T_ml", "T_mm", "T_mm_w_in_B1", "triangle"])
def test_boundary_squares_to_zero_on_fixture_generators(oracles, name):
    o = oracles[name]
    gens = _fixture_generators(o)
    assert gens
    for x in gens:
        assert diff(diff(x, o), o).is_zero


def test_boundary_of_failure_value_is_zero():
    assert diff(OMEGA, TRI) == ZERO


def test_zero_dimensional_generator_is_closed():
    x = parse_element("M[1;(a,b)](^x1, .v)", TRI)
    assert diff(x, TRI).is_zero


@settings(max_examples=150, deadline=None)
@given(elems, elems)
def test_leibniz(x, y):
    xy = boxtimes(x, y, TRI)
    if xy.omega:
        return
    lhs = diff(xy, TRI)
    rhs = boxplus(boxtimes(diff(x, TRI), y, TRI), boxtimes(x, diff(y, TRI), TRI))
    if lhs.omega or rhs.omega:
        return
    assert lhs == rhs


@given(elems, elems)
def test_boundary_squares_to_zero_on_products(x, y):
    xy = boxtimes(x, y, TRI)
    if xy.omega:
        return
    assert diff(diff(xy, TRI), TRI).is_zero


def test_triangle_boundary_is_three_families():
    els = triangle_elements(TRI)
    got = diff(els["family1"], TRI)
    want = boxsum([boxtimes(els["map"], els["d_ag"], TRI),
                   boxtimes(els["d_ab"], els["map"], TRI),
                   boxtimes(els["d_bg"], els["map"], TRI)])
    assert got == want
    assert len(got.terms) > 0


def test_coefficient_boundary_of_zero_dimensional_factor():
    c = parse_coeff("M[0;(a,g,b)](@q1, @y1, @x1)", TRI)
    assert diff_coeff(c, TRI) == Coeff.zero()


@pytest.mark.parametrize("name", ["T_mm", "T_mm_w_in_B1", "triangle"])
def test_counted_boundary_of_pointed_coefficients_vanishes(oracles, name):
    from symbolhomology.core import FULLY_POINTED
    from symbolhomology.evaluation import ct
    o = oracles[name]
    seen = 0
    for g in pointed_candidates(o):
        if classify(g) == FULLY_POINTED and g.space.dimension == 1:
            seen += 1
            assert ct(diff_coeff(Coeff.of(g, o), o), o) == 0
    assert seen
