"""End-to-end acceptance checks, one test per criterion, each timed."""

from __future__ import annotations

import io
import random
import time
from collections import Counter

import numpy as np

from symbolhomology.cli import SHIPPED, run
from symbolhomology.core import GENERATOR, classify, polygon_symbol
from symbolhomology.differential import diff
from symbolhomology.evaluation import build_floer_complex, ev
from symbolhomology.examples import (
    PAIR_RELATIONS,
    SINGLE_MATRIX,
    coefficient_generators,
    load_fixture,
    pointed_candidates,
    verify_pair,
    verify_single,
    verify_triangle,
)
from symbolhomology.fuzz import random_consistent_oracle
from symbolhomology.gf2 import matmul
from symbolhomology.grammar import parse_element
from symbolhomology.homology import map_transport_check, matrix_span_dims, recover_cf, span_dims
from symbolhomology.laws import check_all
from symbolhomology.morphisms import filter_U, filter_w
from symbolhomology.semialgebra import boxplus, boxproduct, generator

RANDOM_ORACLES = 1000


def _passed(lines) -> bool:
    return bool(lines) and all(ln.split(" ")[2] == "PASS" for ln in lines if ln.startswith("CHECK "))


def test_criterion_1_single_crossing(report):
    t0 = time.perf_counter()
    o = load_fixture("T_ml.json")
    no_free = coefficient_generators(o) == []
    x = parse_element("M[0;(a,b)](.v, ^x)", o)
    cube_square = boxplus(boxproduct([x] * 3, o), boxproduct([x] * 2, o)).is_zero
    a = SINGLE_MATRIX
    a2 = matmul(a, a)
    matrix_ok = np.array_equal(matmul(a2, a), a2)
    dims_sym = span_dims({"m0_x": x}, 6, o)
    dims_mat = matrix_span_dims({"m0_x": a}, 6)
    lines = verify_single(o)
    ok = no_free and cube_square and matrix_ok and dims_sym == dims_mat and _passed(lines)
    dt = time.perf_counter() - t0
    assert report(1, "single crossing", ok, dt, 1.0, f"dims={dims_sym}")


def test_criterion_2_two_crossings(report):
    t0 = time.perf_counter()
    o = load_fixture("T_mm.json")
    one_free = len(coefficient_generators(o)) == 1
    lines = verify_pair(o, max_len=3)
    relation_lines = [ln for ln in lines if ln.startswith("CHECK ex2-relation[")]
    spans = [ln for ln in lines if ln.startswith("CHECK span-dim[")]
    ok = (one_free and len(PAIR_RELATIONS) == 9 and len(relation_lines) == 9
          and len(spans) == 3 and _passed(lines))
    dt = time.perf_counter() - t0
    assert report(2, "two crossings", ok, dt, 5.0, f"checks={len(lines)}")


def test_criterion_3_floer_sanity(report):
    t0 = time.perf_counter()
    tml, tmm = load_fixture("T_ml.json"), load_fixture("T_mm.json")
    c1 = build_floer_complex("a", "b", "hat", tml)
    c2 = build_floer_complex("a", "b", "hat", tmm)
    x1, x2 = tmm.points_on(("a", "b"))
    bigon = polygon_symbol(("a", "b"), 1)
    doms = tmm.domains(bigon, (x1, x2))
    two_embedded = len(doms) == 2 and all(tmm._embedded(d) for d in doms) and tmm.count(bigon, (x1, x2)) == 0
    u = build_floer_complex("a", "b", "U", tmm)
    ok = (c1.rank == 1 and c1.is_zero() and c2.rank == 2 and c2.is_zero() and two_embedded
          and u.rank == 2 and u.is_zero())
    dt = time.perf_counter() - t0
    assert report(3, "floer sanity", ok, dt, 1.0)


def test_criterion_4_axiom_fuzz(report):
    t0 = time.perf_counter()
    rng = random.Random(20261019)
    ran, fails = Counter(), Counter()
    for name in SHIPPED:
        fails.update(check_all(load_fixture(name), rng, ran))
    for i in range(RANDOM_ORACLES):
        fails.update(check_all(random_consistent_oracle(rng, f"random{i}"), rng, ran))
    laws = ("sum", "product-associative", "distributive", "scalar", "multiplicity",
            "d-squared", "leibniz", "ev-of-boundary", "ev-sum", "ev-product")
    covered = all(ran[k] > 0 for k in laws)
    dt = time.perf_counter() - t0
    assert report(4, "axiom fuzz", covered and not fails, dt, 30.0,
                  f"oracles={len(SHIPPED) + RANDOM_ORACLES} instances={sum(ran.values())} failures={sum(fails.values())}")


def test_criterion_5_filtering(report):
    t0 = time.perf_counter()
    ok, n = True, 0
    for name in SHIPPED:
        o = load_fixture(name)
        for g in pointed_candidates(o):
            if classify(g) != GENERATOR:
                continue
            x = generator(g, o)
            dx = diff(x, o)
            ok &= diff(filter_w(x, o), o) == filter_w(dx, o)
            ok &= diff(filter_U(x, o), o) == filter_U(dx, o)
            n += 1
    v = load_fixture("T_mm_w_in_B1.json")
    x1, x2 = v.points_on(("a", "b"))
    bigon = polygon_symbol(("a", "b"), 1)
    doms = v.domains(bigon, (x1, x2))
    strata = Counter(d.n_w for d in doms)
    for j in range(v.max_stratum() + 1):
        ok &= v.count(bigon.with_filtration(j), (x1, x2)) == strata[j] % 2
    ok &= v.count(bigon.with_filtration("w0"), (x1, x2)) == strata[0] % 2
    hat = parse_element("M[1;(a,b)](^x1, .v) + M[1;(a,b)](^x2, .v)", v)
    read = ev(hat, v).dest[0]
    ok &= ev(filter_w(hat, v), v) == build_floer_complex(*read, "knot", v).as_mor()
    ok &= ev(filter_U(hat, v), v) == build_floer_complex(*read, "U", v).as_mor()
    dt = time.perf_counter() - t0
    assert report(5, "filtering maps", bool(ok) and n > 0, dt, 5.0, f"generators={n}")


def test_criterion_6_recovery(report):
    t0 = time.perf_counter()
    lines = []
    for name in ("T_ml.json", "T_mm.json"):
        o = load_fixture(name)
        for variant in ("homology", "cohomology"):
            lines += recover_cf("a", "b", variant, o)
    tri = load_fixture("triangle.json")
    fam = parse_element("M[0;(a,g,b)](^q1, .v, .v) + M[0;(a,g,b)](^q2, .v, .v)", tri)
    m = ev(fam, tri)
    lines += map_transport_check(fam, [k[0] for k in m.source], m.dest[0], tri)
    dt = time.perf_counter() - t0
    assert report(6, "recovery", _passed(lines) and len(lines) == 9, dt, 1.0)


def test_criterion_7_triangle(report):
    t0 = time.perf_counter()
    lines = verify_triangle(load_fixture("triangle.json"))
    dt = time.perf_counter() - t0
    assert report(7, "triangle pipeline", _passed(lines), dt, 5.0, f"checks={len(lines)}")


def test_criterion_8_oracle_consistency(report):
    t0 = time.perf_counter()
    good = io.StringIO()
    ok = run(["check-oracle"], good) == 0 and good.getvalue().count("oracle-consistency PASS") == len(SHIPPED)
    bad = io.StringIO()
    ok &= run(["check-oracle", "--file", "corrupted.fixture"], bad) == 1
    violations = [ln for ln in bad.getvalue().splitlines() if ln.startswith("CHECK violation")]
    ok &= len(violations) == 1 and "FAIL parity" in violations[0]
    dt = time.perf_counter() - t0
    assert report(8, "oracle consistency", ok, dt, 1.0)
