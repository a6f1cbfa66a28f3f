from __future__ import annotations

import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from symbolhomology.core import polygon_symbol
from symbolhomology.errors import ParseError, Unsupported
from symbolhomology.evaluation import build_floer_complex
from symbolhomology.examples import fixture_path, load_fixture
from symbolhomology.fuzz import random_consistent_oracle, triangle_oracle
from symbolhomology.oracle import DeclarativeOracle, check_oracle, load_oracle


@pytest.mark.parametrize("name", ["T_ml.json", "T_mm.json", "T_mm_w_in_B1.json", "triangle.json"])
def test_shipped_fixtures_are_consistent(name):
    report = check_oracle(load_fixture(name))
    assert report.ok, report.violations
    assert report.checked > 0


def test_corrupted_fixture_has_one_parity_violation():
    report = check_oracle(load_fixture("corrupted.fixture"))
    assert not report.ok
    assert [v.kind for v in report.violations] == ["parity"]
    assert "M[1;(a,g,b)]" in str(report.violations[0])


def test_shipped_triangle_matches_generator():
    shipped = json.loads(fixture_path("triangle.json").read_text())
    assert triangle_oracle().to_dict() == shipped


def test_declarative_dict_round_trip(tri):
    again = DeclarativeOracle.from_dict(tri.to_dict(), name=tri.name)
    assert again.to_dict() == tri.to_dict()


def test_bad_declarative_input(tmp_path):
    with pytest.raises(ParseError):
        DeclarativeOracle.from_dict({"points": []})
    p = tmp_path / "broken.json"
    p.write_text("{not json")
    with pytest.raises(ParseError):
        load_oracle(p)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_random_oracles_are_consistent(seed):
    o = random_consistent_oracle(random.Random(seed))
    assert check_oracle(o).ok


# ---------------------------------------------------------------------------
# torus backend

def test_single_crossing_hat_complex(tml):
    c = build_floer_complex("a", "b", "hat", tml)
    assert c.rank == 1 and c.is_zero()


def test_two_crossings_from_two_embedded_bigons(tmm):
    x1, x2 = tmm.points_on(("a", "b"))
    s = polygon_symbol(("a", "b"), 1)
    doms = tmm.domains(s, (x1, x2))
    assert len(doms) == 2
    assert all(tmm._embedded(d) for d in doms)
    assert tmm.count(s, (x1, x2)) == 0
    c = build_floer_complex("a", "b", "hat", tmm)
    assert c.rank == 2 and c.is_zero()


def test_two_crossings_u_flavor_free(tmm):
    for read in (("a", "b"), ("b", "a")):
        c = build_floer_complex(*read, "U", tmm)
        assert c.rank == 2 and c.is_zero()


def test_variant_strata(tmm_b1):
    # w sits in B1: one bigon per stratum
    x1, x2 = tmm_b1.points_on(("a", "b"))
    counts = {t: tmm_b1.count(polygon_symbol(("a", "b"), 1, t), (x1, x2)) for t in ("none", "w0", 0, 1, 2)}
    assert counts == {"none": 0, "w0": 1, 0: 1, 1: 1, 2: 0}
    assert [d.n_w for d in tmm_b1.domains(polygon_symbol(("a", "b"), 1), (x1, x2))] == [0, 1]
    knot = build_floer_complex("a", "b", "knot", tmm_b1)
    u = build_floer_complex("a", "b", "U", tmm_b1)
    assert knot.matrix.tolist() == [[0, 0], [1, 0]]
    assert u.matrix.tolist() == [[0, 0], [0b11, 0]]  # 1 + U
    assert knot.squares_to_zero() and u.squares_to_zero()


def test_torus_rejects_polygons(tml):
    with pytest.raises(Unsupported):
        tml.domains(polygon_symbol(("a", "b", "g"), 1), ())


def test_multiplicity_bound_limits_enumeration():
    small = load_fixture("T_mm.json", multiplicity_bound=1)
    assert len(small._domains) < len(load_fixture("T_mm.json")._domains)
