from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from symbolhomology.core import GENERATOR, classify, polygon_symbol
from symbolhomology.differential import diff
from symbolhomology.errors import StratumBoundExceeded
from symbolhomology.evaluation import ev
from symbolhomology.examples import chain_map_property, load_fixture, pointed_candidates, triangle_elements
from symbolhomology.grammar import format_element, parse_element
from symbolhomology.laws import generator_pool
from symbolhomology.morphisms import (
    PropertyPolynomial,
    decorate_o,
    eval_property,
    filter_U,
    filter_w,
    is_root,
    parse_property,
    transport_property,
)
from symbolhomology.semialgebra import OMEGA, boxplus, boxtimes, generator

TRI = load_fixture("triangle.json")
POOL = generator_pool(TRI, random.Random(3), size=24)
elems = st.sampled_from(POOL)


@pytest.mark.parametrize("name", ["T_ml", "T_mm", "T_mm_w_in_B1", "triangle"])
def test_filters_commute_with_boundary_on_every_generator(oracles, name):
    o = oracles[name]
    gens = [generator(g, o) for g in pointed_candidates(o) if classify(g) == GENERATOR]
    assert gens
    for x in gens:
        dx = diff(x, o)
        assert diff(filter_w(x, o), o) == filter_w(dx, o)
        assert diff(filter_U(x, o), o) == filter_U(dx, o)


@settings(max_examples=100, deadline=None)
@given(elems, elems)
def test_filters_respect_sum_and_product(x, y):
    for f in (lambda e: filter_w(e, TRI), lambda e: filter_U(e, TRI)):
        assert f(boxplus(x, y)) == boxplus(f(x), f(y))
        assert f(boxtimes(x, y, TRI)) == boxtimes(f(x), f(y), TRI)


def test_filters_fix_failure_value():
    assert filter_w(OMEGA) == OMEGA
    assert filter_U(OMEGA, TRI) == OMEGA


def test_filter_w_retags_only_unfiltered():
    # without an oracle nothing is normalized away
    x = parse_element("M[1;(a,b)](^x1, .v)")
    assert format_element(filter_w(x)) == "M[1;(a,b);w0](^x1, .v)"
    y = parse_element("M[1;(a,b);nw=0](^x1, .v)")
    assert filter_w(y) == y


def test_u_expansion_on_variant_matches_enumerated_strata(tmm_b1):
    x1, x2 = tmm_b1.points_on(("a", "b"))
    s = polygon_symbol(("a", "b"), 1)
    doms = tmm_b1.domains(s, (x1, x2))
    per_stratum = {}
    for d in doms:
        per_stratum[d.n_w] = per_stratum.get(d.n_w, 0) + 1
    for j in range(tmm_b1.max_stratum() + 1):
        assert tmm_b1.count(s.with_filtration(j), (x1, x2)) == per_stratum.get(j, 0) % 2
    knot = sum(1 for d in doms if d.n_w == 0)
    assert tmm_b1.count(s.with_filtration("w0"), (x1, x2)) == knot % 2


def test_stratum_bound(tmm_b1):
    x = parse_element("M[1;(a,b)](^x1, .v)", tmm_b1)
    with pytest.raises(StratumBoundExceeded):
        filter_U(x, tmm_b1, bound=1)
    filter_U(x, tmm_b1, bound=tmm_b1.max_stratum())


def test_decorating_keeps_evaluation():
    els = triangle_elements(TRI)
    for key in ("d_ab", "d_bg", "d_ag"):
        assert ev(decorate_o(els[key], TRI), TRI) == ev(els[key], TRI)


# ---------------------------------------------------------------------------
# property polynomials

def test_property_needs_the_variable():
    with pytest.raises(ValueError):
        PropertyPolynomial(((parse_element("M[1;(a,b)](^x1, .v)", TRI),),))


def test_property_text_round_trip():
    p = chain_map_property(triangle_elements(TRI))
    q = parse_property(p.to_text(), TRI)
    assert q == p


def test_chain_map_is_root_in_all_flavors():
    els = triangle_elements(TRI)
    p = chain_map_property(els)
    assert is_root(p, els["map"], TRI, [els["family1"]])
    for kind, f in (("F", lambda e: filter_w(e, TRI)), ("F_U", lambda e: filter_U(e, TRI))):
        q = transport_property(p, kind, TRI)
        assert is_root(q, f(els["map"]), TRI, [f(els["family1"])])
        assert eval_property(q, f(els["map"]), TRI) == diff(f(els["family1"]), TRI)


def test_wrong_coefficient_is_not_root():
    els = triangle_elements(TRI)
    wrong = dict(els)
    # drop one point from the output differential
    wrong["d_ag"] = parse_element("M[1;(a,g)](^q1, .v)", TRI)
    p = chain_map_property(wrong)
    assert not eval_property(p, els["map"], TRI).is_zero
    assert not is_root(p, els["map"], TRI, [els["family1"]])


def test_unknown_transport():
    p = chain_map_property(triangle_elements(TRI))
    with pytest.raises(ValueError):
        transport_property(p, "G", TRI)
