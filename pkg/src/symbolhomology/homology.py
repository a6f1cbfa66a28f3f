"""Finite closures under the boundary map, their homology, and checks built on it.

Everything here is exact linear algebra over GF(2).  A GF(2) basis vector is a
pair ``(word, monomial)`` where the monomial is a product of fully pointed
factors times a power of U; an element expands into such vectors term by term.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .core import FLOW_IN, FLOW_OUT, POINTED, UNFILTERED, canonical_pregenerator, reverse, vertices_of
from .differential import diff
from .errors import ClosureEscape, SymbolError
from .evaluation import build_floer_complex, ct, ev
from .gf2 import in_column_space, nullspace, rank
from .semialgebra import (
    OMEGA,
    Coeff,
    Element,
    Factor,
    _make,
    _pkey,
    boxplus,
    boxproduct,
    boxsum,
    boxtimes,
    generator,
    unmarked,
    word_profiles,
)

DEFAULT_WORD_LEN = 4
DEFAULT_U_DEGREE = 8


class IllFormedRelation(SymbolError):
    """Both sides of a relation cannot be added (the sum is the failure value)."""


def _vkey(word, mono):
    return (tuple(f.key for f in word), tuple(g.key for g in mono[0]), mono[1])


def expand(x: Element) -> list[tuple]:
    """GF(2) basis vectors ``(word, monomial)`` of an element."""
    if x.omega:
        raise SymbolError("the failure value has no linear expansion")
    return [(w, m) for w, c in x.terms for m in c.monomials]


def basis_element(vec) -> Element:
    w, (fs, u) = vec
    c = Coeff(frozenset([(fs, u)]))
    return _make({w: c}, _pkey(*word_profiles(w)))


@dataclass
class FiniteComplex:
    basis: list
    boundary: np.ndarray  # boundary[target, source] over GF(2)
    max_word_len: int
    products: dict = field(default_factory=dict)  # word of seed names -> Element
    index: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.index:
            self.index = {_vkey(*v): i for i, v in enumerate(self.basis)}

    @property
    def size(self) -> int:
        return len(self.basis)

    def vector(self, x: Element) -> np.ndarray:
        v = np.zeros(self.size, dtype=np.uint8)
        for w, m in expand(x):
            k = _vkey(w, m)
            if k not in self.index:
                raise ClosureEscape(f"term {w} lies outside the closure")
            v[self.index[k]] ^= 1
        return v

    def element(self, v) -> Element:
        return boxsum(basis_element(self.basis[i]) for i in np.nonzero(v)[0])

    def squares_to_zero(self) -> bool:
        if not self.size:
            return True
        b = self.boundary.astype(np.int64)
        return not ((b @ b) % 2).any()


def closure(seeds, max_word_len: int, oracle, u_degree: int = DEFAULT_U_DEGREE,
            names=None, word_products: bool = True) -> FiniteComplex:
    """Products of seeds up to the word-length bound, closed under the boundary map.

    With ``word_products`` off the seeds are taken as they are.
    """
    seeds = list(seeds)
    names = list(names) if names is not None else [str(i) for i in range(len(seeds))]
    products: dict = {}
    pending: list = []
    for n in range(1, (max_word_len if word_products else 1) + 1):
        for combo in itertools.product(range(len(seeds)), repeat=n):
            x = boxproduct([seeds[i] for i in combo], oracle)
            products[tuple(names[i] for i in combo)] = x
            if not x.omega:
                pending.extend(expand(x))
    basis, index = [], {}

    def add(vec):
        w, (_, u) = vec
        if len(w) > max_word_len:
            raise ClosureEscape(f"boundary reaches word length {len(w)} > {max_word_len}")
        if u > u_degree:
            raise ClosureEscape(f"U-degree {u} exceeds the bound {u_degree}")
        k = _vkey(*vec)
        if k not in index:
            index[k] = len(basis)
            basis.append(vec)
            return True
        return False

    queue = [v for v in pending if add(v)]
    images = {}
    while queue:
        vec = queue.pop()
        d = diff(basis_element(vec), oracle)
        if d.omega:
            raise ClosureEscape(f"boundary of {vec[0]} is the failure value")
        images[_vkey(*vec)] = d
        for t in expand(d):
            if add(t):
                queue.append(t)
    m = np.zeros((len(basis), len(basis)), dtype=np.uint8)
    for j, vec in enumerate(basis):
        for t in expand(images[_vkey(*vec)]):
            m[index[_vkey(*t)], j] ^= 1
    return FiniteComplex(basis, m, max_word_len, products, index)


def homology_gf2(c: FiniteComplex) -> list[Element]:
    """Representatives of a basis of cycles modulo boundaries."""
    if not c.size:
        return []
    cycles = nullspace(c.boundary)
    image = c.boundary.copy()
    reps = []
    for z in cycles:
        if not in_column_space(image, z):
            reps.append(c.element(z))
            image = np.hstack([image, z.reshape(-1, 1)])
    return reps


def homology_rank(c: FiniteComplex) -> int:
    if not c.size:
        return 0
    return c.size - rank(c.boundary) - rank(c.boundary)


def is_boundary(x: Element, c: FiniteComplex) -> bool:
    if x.omega:
        return False
    if x.is_zero:
        return True
    return in_column_space(c.boundary, c.vector(x))


def verify_relation(lhs: Element, rhs: Element, c: FiniteComplex) -> bool:
    s = boxplus(lhs, rhs)
    if s.omega:
        raise IllFormedRelation(f"{lhs} and {rhs} have different multiplicity profiles")
    return is_boundary(s, c)


# ---------------------------------------------------------------------------
# matrix models

def ct_vector(x: Element, oracle) -> dict:
    """Base change of the coefficients to GF(2)[U] through the count map."""
    out: dict = {}
    for w, c in x.terms:
        p = ct(c, oracle)
        k = p.bit_length()
        for j in range(k):
            if p >> j & 1:
                key = (tuple(f.key for f in w), j)
                out[key] = out.get(key, 0) ^ 1
    return {k: 1 for k, v in out.items() if v}


def _symbol_rank(elements, base_change, oracle) -> int:
    index: dict = {}
    cols = []
    for x in elements:
        if base_change:
            keys = list(ct_vector(x, oracle))
        else:
            keys = [_vkey(w, m) for w, m in expand(x)]
        col = []
        for k in keys:
            index.setdefault(k, len(index))
            col.append(index[k])
        cols.append(col)
    if not cols or not index:
        return 0
    m = np.zeros((len(index), len(cols)), dtype=np.uint8)
    for j, col in enumerate(cols):
        for i in col:
            m[i, j] ^= 1
    return rank(m)


def _matrix_word(word, matrices) -> np.ndarray:
    n = next(iter(matrices.values())).shape[0]
    m = np.eye(n, dtype=np.int64)
    for name in word:
        m = (m @ matrices[name]) % 2
    return m


def span_dims(gens: dict, max_len: int, oracle, base_change: bool = True) -> list[int]:
    """Dimension of the span of all words of each exact length 1..max_len."""
    names = sorted(gens)
    dims = []
    for n in range(1, max_len + 1):
        xs = [boxproduct([gens[k] for k in w], oracle) for w in itertools.product(names, repeat=n)]
        dims.append(_symbol_rank([x for x in xs if not x.omega], base_change, oracle))
    return dims


def matrix_span_dims(matrices: dict, max_len: int) -> list[int]:
    names = sorted(matrices)
    dims = []
    for n in range(1, max_len + 1):
        cols = [_matrix_word(w, matrices).flatten() for w in itertools.product(names, repeat=n)]
        dims.append(rank(np.array(cols, dtype=np.uint8).T))
    return dims


def matrix_model_check(gens: dict, matrices: dict, max_len: int, oracle,
                       base_change: bool = True) -> list[str]:
    """Relations among symbol words must hold for the matrices; span dims must agree."""
    names = sorted(gens)
    words = [w for n in range(1, max_len + 1) for w in itertools.product(names, repeat=n)]
    xs = {w: boxproduct([gens[k] for k in w], oracle) for w in words}
    live = [w for w in words if not xs[w].omega]
    index: dict = {}
    cols = []
    for w in live:
        col = [index.setdefault(_vkey(a, b), len(index)) for a, b in expand(xs[w])]
        cols.append(col)
    sym = np.zeros((max(len(index), 1), len(live)), dtype=np.uint8)
    for j, col in enumerate(cols):
        for i in col:
            sym[i, j] ^= 1
    mats = np.array([_matrix_word(w, matrices).flatten() for w in live], dtype=np.int64).T
    kernel = nullspace(sym)
    broken = [v for v in kernel if ((mats @ v.astype(np.int64)) % 2).any()]
    lines = []
    status = "PASS" if not broken else "FAIL"
    lines.append(f"CHECK relation-transfer {status} relations={len(kernel)} "
                 f"violated={len(broken)} words={len(live)}")
    for v in broken[:5]:
        rel = " + ".join("".join(live[j]) for j in np.nonzero(v)[0])
        lines.append(f"CHECK violated-relation FAIL {rel} = 0")
    sd = span_dims(gens, max_len, oracle, base_change)
    md = matrix_span_dims(matrices, max_len)
    for n, (a, b) in enumerate(zip(sd, md), start=1):
        lines.append(f"CHECK span-dim[{n}] {'PASS' if a == b else 'FAIL'} symbol={a} matrix={b}")
    return lines


# ---------------------------------------------------------------------------
# recovering the Floer complex

def _bigon(out, decos_by_vertex: dict, maslov: int):
    """Bigon with decorations given per vertex; ``out`` is listed first."""
    labels = list(out)
    decos = [decos_by_vertex[v] for v in vertices_of(labels)]
    g, _ = canonical_pregenerator(labels, maslov, decos, UNFILTERED)
    return g


def cycle_element(read, x, oracle) -> Element:
    """Element standing for the chain ``x`` of the module read at ``read``."""
    out = reverse(read)
    g = _bigon(out, {out: (FLOW_OUT, x), read: (POINTED, x)}, 0)
    return generator(g, oracle)


def cocycle_element(read, x, oracle) -> Element:
    out = reverse(read)
    g = _bigon(out, {out: (POINTED, x), read: (FLOW_IN, None)}, 0)
    return generator(g, oracle)


def identity_element(read, oracle) -> Element:
    """Sum over the basis of constant bigons from ``read`` back to itself."""
    out = reverse(read)
    return boxsum(generator(_bigon(out, {out: (FLOW_OUT, y), read: (FLOW_IN, None)}, 0), oracle)
                  for y in oracle.points_on(out))


def differential_element(read, oracle, maslov: int = 1) -> Element:
    out = reverse(read)
    return boxsum(generator(_bigon(out, {out: (FLOW_OUT, y), read: (FLOW_IN, None)}, maslov), oracle)
                  for y in oracle.points_on(out))


def _coordinates(x: Element, basis_elements: list, oracle) -> np.ndarray:
    """Coefficients (after the count map) of ``x`` against single-factor basis elements."""
    keys = {}
    for i, b in enumerate(basis_elements):
        (w, _), = b.terms
        keys[tuple(f.unmarked().key for f in w)] = i
    v = np.zeros(len(basis_elements), dtype=object)
    if x.omega:
        raise SymbolError("failure value has no coordinates")
    for w, c in x.terms:
        k = tuple(f.unmarked().key for f in w)
        if k not in keys:
            if ct(c, oracle):
                raise SymbolError(f"term {w} is not a basis element")
            continue
        v[keys[k]] ^= ct(c, oracle)
    return v


def recover_cf(a: str, b: str, variant: str, oracle) -> list[str]:
    """Rebuild the differential of the module read at (b, a) from symbol products."""
    read = (b, a)
    pts = list(oracle.points_on(read))
    hat = build_floer_complex(b, a, "hat", oracle).matrix
    s = differential_element(read, oracle)
    ident = identity_element(read, oracle)
    n = len(pts)
    if variant == "homology":
        basis = [cycle_element(read, x, oracle) for x in pts]
        images = [boxproduct([bx, s, ident], oracle) for bx in basis]
        expected = hat
    elif variant == "cohomology":
        basis = [cocycle_element(read, x, oracle) for x in pts]
        images = [boxproduct([ident, s, bx], oracle) for bx in basis]
        expected = hat.T
    else:
        raise ValueError(f"unknown variant {variant!r}")
    got = np.zeros((n, n), dtype=object)
    for j, img in enumerate(images):
        got[:, j] = _coordinates(unmarked(img), basis, oracle)
    rho = np.zeros((n, n), dtype=np.uint8)
    for j, bx in enumerate(basis):
        (w, _), = bx.terms
        names = {d[1].name for d in w[0].gen.decos if d[1] is not None}
        for i, p in enumerate(pts):
            if names == {p.name}:
                rho[i, j] = 1
    perm = bool((rho.sum(axis=0) == 1).all() and (rho.sum(axis=1) == 1).all())
    ok = np.array_equal(got.astype(np.int64), np.asarray(expected, dtype=np.int64))
    tag = f"{oracle.name}:{a}{b}:{variant}"
    return [
        f"CHECK rho-bijection[{tag}] {'PASS' if perm else 'FAIL'} rank={n}",
        f"CHECK square-commutes[{tag}] {'PASS' if ok else 'FAIL'} "
        f"symbol={got.astype(int).tolist()} floer={np.asarray(expected, dtype=int).tolist()}",
    ]


def transport_map(fam: Element, inputs, output_read, oracle) -> tuple[np.ndarray, np.ndarray]:
    """Matrix of ``fam`` read off symbol products, next to its evaluation.

    ``inputs`` lists the read vertices of the input modules in evaluation order.
    Each input chain is fed from the left, last slot first.
    """
    ident = identity_element(output_read, oracle)
    outs = list(oracle.points_on(output_read))
    out_basis = [cycle_element(output_read, q, oracle) for q in outs]
    bases = [list(oracle.points_on(r)) for r in inputs]
    cols = []
    for choice in itertools.product(*bases):
        x = boxtimes(fam, ident, oracle)
        for r, p in reversed(list(zip(inputs, choice))):
            x = boxtimes(cycle_element(r, p, oracle), x, oracle)
        cols.append(_coordinates(unmarked(x), out_basis, oracle))
    got = np.array(cols, dtype=object).T.astype(np.int64)
    want = ev(fam, oracle).matrix.astype(np.int64)
    return got, want


def map_transport_check(fam: Element, inputs, output_read, oracle, label: str = "F") -> list[str]:
    got, want = transport_map(fam, inputs, output_read, oracle)
    ok = np.array_equal(got, want)
    return [f"CHECK map-transport[{label}] {'PASS' if ok else 'FAIL'} "
            f"symbol={got.tolist()} ev={want.tolist()}"]
