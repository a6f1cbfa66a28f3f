from __future__ import annotations

import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from symbolhomology.core import GENERATOR, classify
from symbolhomology.differential import diff
from symbolhomology.errors import DimensionMismatch
from symbolhomology.evaluation import (
    MOR_OMEGA,
    MOR_ZERO,
    MorElement,
    build_floer_complex,
    ct,
    ev,
    flavor_of,
    mor_comp,
    mor_scale,
    mor_sum,
)
from symbolhomology.examples import load_fixture, pointed_candidates, triangle_elements
from symbolhomology.fuzz import random_consistent_oracle
from symbolhomology.grammar import parse_coeff, parse_element
from symbolhomology.semialgebra import OMEGA, boxtimes, generator

TRI = load_fixture("triangle.json")


def test_flavor_of_tags():
    assert [flavor_of(t) for t in ("none", "w0", 0, 3)] == ["hat", "knot", "U", "U"]


@pytest.mark.parametrize("key,read", [("d_ab", ("b", "a")), ("d_bg", ("g", "b")), ("d_ag", ("g", "a"))])
def test_differential_families_evaluate_to_complexes(key, read):
    els = triangle_elements(TRI)
    assert ev(els[key], TRI) == build_floer_complex(*read, "hat", TRI).as_mor()


def test_complexes_square_to_zero(oracles):
    for o in oracles.values():
        for pair in o.label_pairs():
            for read in (pair, pair[::-1]):
                for fl in ("hat", "knot", "U"):
                    assert build_floer_complex(*read, fl, o).squares_to_zero()


def test_product_evaluates_to_composition():
    els = triangle_elements(TRI)
    for left, right in ((els["d_ab"], els["map"]), (els["d_bg"], els["map"]), (els["map"], els["d_ag"])):
        p = boxtimes(left, right, TRI)
        assert ev(p, TRI) == mor_comp(ev(right, TRI), ev(left, TRI))


def _brute_comp(g: MorElement, f: MorElement):
    """Composition through one slot, written as an explicit tensor contraction."""
    j = g.source.index(f.dest)
    gd = [len(b) for b in g.source_bases]
    fd = [len(b) for b in f.source_bases]
    gt = g.matrix.astype(np.int64).reshape([g.matrix.shape[0]] + gd)
    ft = f.matrix.astype(np.int64).reshape([f.matrix.shape[0]] + fd)
    out = np.tensordot(gt, ft, axes=([1 + j], [0])) % 2
    # tensordot puts f's source axes last; move them into slot j
    order = list(range(1 + j)) + list(range(len(gd), len(gd) + len(fd))) + list(range(1 + j, len(gd)))
    out = np.transpose(out, order)
    return out.reshape(g.matrix.shape[0], -1)


def test_slot_insertion_matches_tensor_contraction():
    els = triangle_elements(TRI)
    fmap = ev(els["map"], TRI)
    for key in ("d_ab", "d_bg"):
        d = ev(els[key], TRI)
        got = mor_comp(fmap, d)
        assert np.array_equal(got.matrix.astype(np.int64), _brute_comp(fmap, d))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_ev_kills_boundaries_on_random_oracles(seed):
    o = random_consistent_oracle(random.Random(seed))
    for g in pointed_candidates(o):
        if classify(g) == GENERATOR and g.space.dimension == 1:
            e = ev(diff(generator(g, o), o), o)
            assert e.is_zero()


def test_ev_kills_boundary_of_triangle_family():
    els = triangle_elements(TRI)
    assert ev(diff(els["family1"], TRI), TRI).is_zero()


def test_ev_failure_and_zero():
    assert ev(OMEGA, TRI) == MOR_OMEGA
    z = parse_element("0", TRI)
    assert ev(z, TRI) == MOR_ZERO
    assert MOR_ZERO.is_zero() and not MOR_OMEGA.is_zero()
    assert mor_sum(MOR_ZERO, MOR_OMEGA) == MOR_OMEGA


def test_mor_sum_and_scale():
    m = build_floer_complex("b", "a", "hat", TRI).as_mor()
    assert mor_sum(m, m).is_zero()
    assert mor_scale(0b10, m).matrix.tolist() == [[int(v) * 2 for v in row] for row in m.matrix]
    other = build_floer_complex("g", "a", "hat", TRI).as_mor()
    assert mor_sum(m, other) == MOR_OMEGA


def test_count_rejects_positive_dimension():
    from symbolhomology.core import POINTED, pregenerator
    from symbolhomology.semialgebra import Coeff
    x1, x2 = TRI.points_on(("a", "b"))
    g = pregenerator(("a", "b"), 2, [(POINTED, x1), (POINTED, x2)])
    with pytest.raises(DimensionMismatch):
        ct(Coeff(frozenset({((g,), 0)})), TRI)


def test_count_of_u_powers():
    assert ct(parse_coeff("U^2 + U", TRI), TRI) == 0b110


def test_variant_u_complex_matches_strata(tmm_b1):
    from symbolhomology.morphisms import filter_U, filter_w
    hat = parse_element("M[1;(a,b)](^x1, .v) + M[1;(a,b)](^x2, .v)", tmm_b1)
    read = ev(hat, tmm_b1).dest[0]
    assert ev(hat, tmm_b1) == build_floer_complex(*read, "hat", tmm_b1).as_mor()
    assert ev(filter_w(hat), tmm_b1) == build_floer_complex(*read, "knot", tmm_b1).as_mor()
    u = ev(filter_U(hat, tmm_b1), tmm_b1)
    assert u == build_floer_complex(*read, "U", tmm_b1).as_mor()
    assert sorted(int(v) for v in u.matrix.flat) == [0, 0, 0, 0b11]


def test_mor_text_headers():
    m = build_floer_complex("b", "a", "hat", TRI).as_mor()
    assert m.to_text().splitlines()[0] == "Cba -> Cba"
    assert MOR_OMEGA.to_text() == "Omega"
