"""Reproduction routines for the shipped worked examples.

Each routine returns report lines ``CHECK <name> PASS|FAIL <detail>``.
"""

from __future__ import annotations

import itertools
from importlib import resources

import numpy as np

from .core import (
    FLOW_IN,
    FLOW_OUT,
    FULLY_POINTED,
    GENERATOR,
    POINTED,
    UNFILTERED,
    canonical_pregenerator,
    classify,
    polygon_symbol,
)
from .differential import diff
from .evaluation import build_floer_complex, ev, mor_comp, mor_sum
from .gf2 import matmul
from .grammar import parse_element
from .homology import (
    closure,
    homology_rank,
    matrix_model_check,
    matrix_span_dims,
    span_dims,
    verify_relation,
)
from .morphisms import PropertyPolynomial, eval_property, filter_U, filter_w, is_root, transport_property
from .oracle import check_oracle, load_oracle
from .semialgebra import Coeff, boxplus, boxproduct, boxsum, boxtimes, generator, reduce_factor


def fixture_path(name: str):
    return resources.files("symbolhomology") / "fixtures" / name


def load_fixture(name: str, multiplicity_bound: int = 4):
    return load_oracle(fixture_path(name), multiplicity_bound)


def _line(name: str, ok: bool, detail: str = "") -> str:
    return f"CHECK {name} {'PASS' if ok else 'FAIL'} {detail}".rstrip()


def pointed_candidates(oracle, tag=UNFILTERED):
    """Every decorated pre-generator over the oracle's scope with at most one flow-out."""
    seen = set()
    scope = set(oracle.default_scope())
    scope |= {polygon_symbol(pair, m) for pair in oracle.label_pairs() for m in (0, 1, 2)}
    for space in sorted(scope, key=lambda s: s.sort_key()):
        space = space.with_filtration(tag)
        if space in seen or len(set(space.word)) != space.arity:
            continue
        seen.add(space)
        verts = space.vertices
        options = []
        for v in verts:
            opts = [(FLOW_IN, None)]
            for p in oracle.points_on(v):
                opts += [(FLOW_OUT, p), (POINTED, p)]
            options.append(opts)
        for decos in itertools.product(*options):
            if sum(d[0] == FLOW_OUT for d in decos) > 1:
                continue
            g, shift = canonical_pregenerator(space.word, space.maslov, decos, space.filtration)
            if shift == 0:
                yield g


def coefficient_generators(oracle) -> list:
    """Fully pointed pre-generators that survive reduction to 0 or 1."""
    out = []
    for g in pointed_candidates(oracle):
        if classify(g) == FULLY_POINTED:
            r = reduce_factor(g, oracle)
            if r not in (0, 1):
                out.append(g)
    return out


def nonzero_generators(oracle) -> list:
    out = []
    for g in pointed_candidates(oracle):
        if classify(g) == GENERATOR and g.space.maslov <= 1:
            if not generator(g, oracle).is_zero:
                out.append(g)
    return out


def _by_output(gens) -> dict:
    groups: dict = {}
    for g in gens:
        v = g.vertices[g.flow_out[0]]
        groups.setdefault(v, []).append(g)
    return groups


# ---------------------------------------------------------------------------
# one crossing on the torus

SINGLE_MATRIX = np.array([[1, 1, 0], [0, 0, 1], [0, 0, 0]], dtype=np.int64)


def verify_single(oracle=None, max_len: int = 6) -> list[str]:
    o = oracle or load_fixture("T_ml.json")
    lines = []
    coeffs = coefficient_generators(o)
    lines.append(_line("ex1-coefficients-trivial", not coeffs, f"free={len(coeffs)}"))
    groups = _by_output(nonzero_generators(o))
    sizes = sorted(len(v) for v in groups.values())
    lines.append(_line("ex1-unique-generator", sizes and all(s == 1 for s in sizes),
                       f"per-orientation={sizes}"))
    x = parse_element("M[0;(a,b)](.v, ^x)", o)
    x2 = boxproduct([x, x], o)
    x3 = boxproduct([x, x, x], o)
    lines.append(_line("ex1-cube-equals-square", boxplus(x3, x2).is_zero, str(x2)))
    a = SINGLE_MATRIX
    a2, a3 = matmul(a, a), matmul(matmul(a, a), a)
    lines.append(_line("ex1-matrix-cube-equals-square", np.array_equal(a2, a3) and not np.array_equal(a, a2)))
    c = closure([x], 4, o, names=["x"])
    lines.append(_line("ex1-homology", homology_rank(c) == 2 and c.squares_to_zero(),
                       f"rank={homology_rank(c)} basis={c.size}"))
    gens, mats = {"m0_x": x}, {"m0_x": a}
    lines += matrix_model_check(gens, mats, max_len, o)
    cum_s = _cumulative_dims(gens, max_len, o)
    cum_m = _cumulative_matrix_dims(mats, max_len)
    lines.append(_line("ex1-cumulative-span", cum_s == cum_m, f"symbol={cum_s} matrix={cum_m}"))
    return lines


def _cumulative_dims(gens, max_len, oracle) -> list[int]:
    from .homology import _symbol_rank
    names = sorted(gens)
    xs, dims = [], []
    for n in range(1, max_len + 1):
        xs += [boxproduct([gens[k] for k in w], oracle) for w in itertools.product(names, repeat=n)]
        dims.append(_symbol_rank([x for x in xs if not x.omega], True, oracle))
    return dims


def _cumulative_matrix_dims(mats, max_len) -> list[int]:
    from .gf2 import rank
    from .homology import _matrix_word
    names = sorted(mats)
    cols, dims = [], []
    for n in range(1, max_len + 1):
        cols += [_matrix_word(w, mats).flatten() for w in itertools.product(names, repeat=n)]
        dims.append(rank(np.array(cols, dtype=np.uint8).T))
    return dims


# ---------------------------------------------------------------------------
# two crossings cancelling on the torus

PAIR_NAMES = ("m0_x1", "m0_x2", "m1_x2")

# (lhs word, rhs word); an empty rhs means zero
PAIR_RELATIONS = (
    (("m0_x1",) * 3, ("m0_x1",) * 2),
    (("m0_x2",) * 3, ("m0_x2",) * 2),
    (("m1_x2", "m1_x2"), ()),
    (("m1_x2", "m0_x1"), ()),
    (("m0_x2", "m0_x1"), ()),
    (("m0_x1", "m0_x2"), ()),
    (("m1_x2", "m0_x2", "m0_x2"), ("m1_x2", "m0_x2")),
    (("m0_x1", "m0_x1", "m1_x2"), ("m0_x1", "m1_x2")),
    (("m0_x2", "m1_x2"), ()),
)


def pair_generators(oracle) -> dict:
    return {
        "m0_x1": parse_element("M[0;(a,b)](.v, ^x1)", oracle),
        "m0_x2": parse_element("M[0;(a,b)](.v, ^x2)", oracle),
        "m1_x2": parse_element("M[1;(a,b)](.v, ^x2)", oracle),
    }


def pair_matrices() -> dict:
    z = np.zeros((3, 3), dtype=np.int64)
    a = SINGLE_MATRIX
    d = np.zeros((6, 6), dtype=np.int64)
    for i, j in [(1, 3), (4, 4), (4, 5), (4, 6), (5, 4), (5, 5), (5, 6)]:
        d[i - 1, j - 1] = 1
    return {"m0_x1": np.block([[a, z], [z, z]]), "m0_x2": np.block([[z, z], [z, a]]), "m1_x2": d}


def rewrite_normal_form(word: tuple, relations=PAIR_RELATIONS):
    """Normal form under the relations read left to right; None means zero."""
    word = tuple(word)
    changed = True
    while changed:
        changed = False
        for lhs, rhs in relations:
            n = len(lhs)
            for i in range(len(word) - n + 1):
                if word[i:i + n] == lhs:
                    if not rhs:
                        return None
                    word = word[:i] + rhs + word[i + n:]
                    changed = True
                    break
            if changed:
                break
    return word


def _product(gens, word, oracle):
    return boxproduct([gens[k] for k in word], oracle)


def verify_pair(oracle=None, max_len: int = 3) -> list[str]:
    o = oracle or load_fixture("T_mm.json")
    lines = []
    coeffs = coefficient_generators(o)
    lines.append(_line("ex2-one-free-coefficient", len(coeffs) == 1,
                       "free=" + ",".join(str(g) for g in coeffs)))
    groups = _by_output(nonzero_generators(o))
    sizes = sorted(len(v) for v in groups.values())
    lines.append(_line("ex2-three-generators", sizes and all(s == 3 for s in sizes),
                       f"per-orientation={sizes}"))
    gens = pair_generators(o)
    c = closure([gens[k] for k in PAIR_NAMES], max_len, o, names=PAIR_NAMES)
    for lhs, rhs in PAIR_RELATIONS:
        left = _product(gens, lhs, o)
        right = _product(gens, rhs, o) if rhs else left.__class__()
        ok = verify_relation(left, right, c) and boxplus(left, right).is_zero
        lines.append(_line(f"ex2-relation[{'.'.join(lhs)}={'.'.join(rhs) or '0'}]", ok))
    mats = pair_matrices()
    bad = []
    for lhs, rhs in PAIR_RELATIONS:
        from .homology import _matrix_word
        lm = _matrix_word(lhs, mats)
        rm = _matrix_word(rhs, mats) if rhs else np.zeros_like(lm)
        if not np.array_equal(lm, rm):
            bad.append(".".join(lhs))
    lines.append(_line("ex2-matrix-relations", not bad, f"violated={bad}"))
    lines.append(_line("ex2-homology-all-cycles", not c.boundary.any(), f"basis={c.size}"))
    lines += matrix_model_check(gens, mats, max_len, o)
    # word equalities among the symbols match the relation table
    words = [w for n in range(1, max_len + 2) for w in itertools.product(PAIR_NAMES, repeat=n)]
    values = {w: _product(gens, w, o) for w in words}
    mismatches = []
    for u, v in itertools.combinations(words, 2):
        same_sym = values[u] == values[v]
        same_nf = rewrite_normal_form(u) == rewrite_normal_form(v)
        if same_sym != same_nf:
            mismatches.append(f"{'.'.join(u)}~{'.'.join(v)}")
    for w in words:
        if values[w].is_zero != (rewrite_normal_form(w) is None):
            mismatches.append(".".join(w) + "~0")
    lines.append(_line("ex2-relation-set-exact", not mismatches,
                       f"words={len(words)} mismatches={mismatches[:3]}"))
    return lines


# ---------------------------------------------------------------------------
# triangle map

def triangle_elements(oracle) -> dict:
    p = lambda t: parse_element(t, oracle)
    return {
        "family1": p("M[1;(a,g,b)](^q1, .v, .v) + M[1;(a,g,b)](^q2, .v, .v)"),
        "map": p("M[0;(a,g,b)](^q1, .v, .v) + M[0;(a,g,b)](^q2, .v, .v)"),
        "d_ab": p("M[1;(a,b)](^x1, .v) + M[1;(a,b)](^x2, .v)"),
        "d_bg": p("M[1;(b,g)](^y1, .v) + M[1;(b,g)](^y2, .v)"),
        "d_ag": p("M[1;(a,g)](^q1, .v) + M[1;(a,g)](^q2, .v)"),
    }


def chain_map_property(els) -> PropertyPolynomial:
    return PropertyPolynomial((("X", els["d_ag"]), (els["d_ab"], "X"), (els["d_bg"], "X")))


def chain_residual(fmap_mor, flavor: str, oracle):
    """Independent matrix form of d o F + F o (d x 1) + F o (1 x d)."""
    d_out = build_floer_complex("g", "a", flavor, oracle).as_mor()
    d_1 = build_floer_complex("g", "b", flavor, oracle).as_mor()
    d_2 = build_floer_complex("b", "a", flavor, oracle).as_mor()
    total = mor_comp(d_out, fmap_mor)
    total = mor_sum(total, mor_comp(fmap_mor, d_1))
    total = mor_sum(total, mor_comp(fmap_mor, d_2))
    return total


def verify_triangle(oracle=None) -> list[str]:
    o = oracle or load_fixture("triangle.json")
    els = triangle_elements(o)
    lines = []
    d_fam = diff(els["family1"], o)
    three = boxsum([boxtimes(els["map"], els["d_ag"], o), boxtimes(els["d_ab"], els["map"], o),
                    boxtimes(els["d_bg"], els["map"], o)])
    lines.append(_line("triangle-boundary-expands", d_fam == three, f"terms={len(d_fam.terms)}"))
    lines.append(_line("triangle-boundary-squared", diff(d_fam, o).is_zero))
    prop = chain_map_property(els)
    for label, fn, flavor in (("hat", lambda e: e, "hat"),
                              ("knot", lambda e: filter_w(e, o), "knot"),
                              ("U", lambda e: filter_U(e, o), "U")):
        kind = {"hat": None, "knot": "F", "U": "F_U"}[label]
        p = prop if kind is None else transport_property(prop, kind, o)
        fmap, fam = fn(els["map"]), fn(els["family1"])
        value = eval_property(p, fmap, o)
        lines.append(_line(f"triangle-{label}-root", is_root(p, fmap, o, [fam]) and diff(fam, o) == value))
        residual = ev(value, o)
        lines.append(_line(f"triangle-{label}-ev-residual", residual.is_zero()))
        indep = chain_residual(ev(fmap, o), flavor, o)
        lines.append(_line(f"triangle-{label}-chain-identity", not indep.omega and indep.is_zero(),
                           indep.to_text().replace("\n", "; ")))
        cmp = [ev(fn(els[k]), o) == build_floer_complex(*r, flavor, o).as_mor()
               for k, r in (("d_ab", ("b", "a")), ("d_bg", ("g", "b")), ("d_ag", ("g", "a")))]
        lines.append(_line(f"triangle-{label}-ev-differentials", all(cmp)))
    report = check_oracle(o)
    lines.append(_line("triangle-oracle-consistent", report.ok))
    return lines


EXAMPLES = {"ex1": verify_single, "ex2": verify_pair, "triangle": verify_triangle}
