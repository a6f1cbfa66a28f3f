"""Maps between Floer chain modules and the evaluation of algebra elements.

A chain module is named by ``(vertex, flavor)``: the vertex type at which a
polygon reads its input.  Its basis is the set of points on that label pair.
A polygon whose flow-out sits at vertex ``v`` writes into the module named by
the reversed vertex, because that is where the next polygon reads it.

Matrix entries live in GF(2)[U] encoded as integer bit masks (see ``gf2``);
the hat and knot flavors only ever use 0 and 1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import FLOW_IN, FLOW_OUT, UNFILTERED, W_FILTERED, polygon_symbol, reverse
from .errors import AmbiguousSlot, DimensionMismatch
from .gf2 import poly_matmul, poly_mul, poly_str, poly_zeros
from .semialgebra import Coeff, Element

HAT, KNOT, UFLAVOR = "hat", "knot", "U"


def flavor_of(tag) -> str:
    if tag == UNFILTERED:
        return HAT
    if tag == W_FILTERED:
        return KNOT
    return UFLAVOR


@dataclass(frozen=True)
class FloerComplex:
    read: tuple
    flavor: str
    basis: tuple
    matrix: np.ndarray  # matrix[target, source]

    @property
    def rank(self) -> int:
        return len(self.basis)

    def squares_to_zero(self) -> bool:
        sq = poly_matmul(self.matrix, self.matrix)
        return not any(int(v) for v in sq.flat)

    def is_zero(self) -> bool:
        return not any(int(v) for v in self.matrix.flat)

    def as_mor(self) -> "MorElement":
        key = (self.read, self.flavor)
        return MorElement((key,), key, (self.basis,), self.basis, self.matrix.copy())

    def to_text(self) -> str:
        return _matrix_text(self.matrix)


def build_floer_complex(a: str, b: str, flavor: str, oracle) -> FloerComplex:
    """Differential of the module read at vertex (a, b)."""
    read = (a, b)
    basis = tuple(oracle.points_on(read))
    n = len(basis)
    m = poly_zeros(n, n)
    if flavor == HAT:
        layers = [(polygon_symbol(read, 1, UNFILTERED), 1)]
    elif flavor == KNOT:
        layers = [(polygon_symbol(read, 1, W_FILTERED), 1)]
    else:
        layers = [(polygon_symbol(read, 1, j), 1 << j) for j in range(oracle.max_stratum() + 1)]
    verts = polygon_symbol(read, 1).vertices
    for space, weight in layers:
        for s, x in enumerate(basis):
            for t, y in enumerate(basis):
                pts = (x, y) if verts[0] == read else (y, x)
                if oracle.count(space, pts):
                    m[t, s] ^= weight
    return FloerComplex(read, flavor, basis, m)


@dataclass(frozen=True, eq=False)
class MorElement:
    """Ω̂, the universal zero map, or a matrix from a tensor product of modules."""

    source: tuple = ()
    dest: Optional[tuple] = None
    source_bases: tuple = ()
    dest_basis: tuple = ()
    matrix: Optional[np.ndarray] = None
    omega: bool = False
    universal_zero: bool = False

    def is_zero(self) -> bool:
        if self.omega:
            return False
        return self.universal_zero or not any(int(v) for v in self.matrix.flat)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MorElement):
            return NotImplemented
        if self.omega or other.omega:
            return self.omega == other.omega
        if self.universal_zero or other.universal_zero:
            return self.is_zero() and other.is_zero()
        return (self.source == other.source and self.dest == other.dest
                and np.array_equal(self.matrix, other.matrix))

    __hash__ = None

    def to_text(self) -> str:
        if self.omega:
            return "Omega"
        if self.universal_zero:
            return "0"
        src = " x ".join(f"C{k[0][0]}{k[0][1]}" for k in self.source) or "GF2"
        dst = f"C{self.dest[0][0]}{self.dest[0][1]}" if self.dest else "GF2"
        return f"{src} -> {dst}\n" + _matrix_text(self.matrix)


MOR_OMEGA = MorElement(omega=True)
MOR_ZERO = MorElement(universal_zero=True)


def _matrix_text(m) -> str:
    return "\n".join(" ".join(poly_str(int(v)) for v in row) for row in m)


def _dims(bases) -> list[int]:
    return [len(b) for b in bases]


def mor_sum(f: MorElement, g: MorElement) -> MorElement:
    if f.omega or g.omega:
        return MOR_OMEGA
    if f.universal_zero:
        return g
    if g.universal_zero:
        return f
    if f.source != g.source or f.dest != g.dest:
        return MOR_OMEGA
    m = np.vectorize(lambda a, b: int(a) ^ int(b), otypes=[object])(f.matrix, g.matrix)
    return MorElement(f.source, f.dest, f.source_bases, f.dest_basis, m)


def mor_scale(p: int, f: MorElement) -> MorElement:
    if f.omega or f.universal_zero:
        return f
    m = np.vectorize(lambda a: poly_mul(int(a), p), otypes=[object])(f.matrix)
    return MorElement(f.source, f.dest, f.source_bases, f.dest_basis, m)


def mor_comp(g: MorElement, f: MorElement) -> MorElement:
    """``g`` after ``f``: plain composition or insertion into one source slot."""
    if f.omega or g.omega:
        return MOR_OMEGA
    if f.universal_zero or g.universal_zero:
        return MOR_ZERO
    if f.dest is None:
        return MOR_OMEGA
    if g.source == (f.dest,):
        m = poly_matmul(g.matrix, f.matrix)
        return MorElement(f.source, g.dest, f.source_bases, g.dest_basis, m)
    slots = [k for k, s in enumerate(g.source) if s == f.dest]
    if not slots:
        return MOR_OMEGA
    if len(slots) > 1:
        raise AmbiguousSlot(f"{f.dest} fills {len(slots)} source slots")
    j = slots[0]
    gd = _dims(g.source_bases)
    fd = _dims(f.source_bases)
    new_source = g.source[:j] + f.source + g.source[j + 1:]
    new_bases = g.source_bases[:j] + f.source_bases + g.source_bases[j + 1:]
    nd = _dims(new_bases)
    rows = g.matrix.shape[0]
    out = poly_zeros(rows, int(np.prod(nd)) if nd else 1)
    for col, idx in enumerate(itertools.product(*(range(d) for d in nd))):
        before, mid, after = idx[:j], idx[j:j + len(fd)], idx[j + len(fd):]
        fcol = _flat(mid, fd)
        for s in range(gd[j]):
            fv = int(f.matrix[s, fcol])
            if not fv:
                continue
            gcol = _flat(before + (s,) + after, gd)
            for r in range(rows):
                gv = int(g.matrix[r, gcol])
                if gv:
                    out[r, col] ^= poly_mul(gv, fv)
    return MorElement(new_source, g.dest, new_bases, g.dest_basis, out)


def _flat(idx, dims) -> int:
    k = 0
    for i, d in zip(idx, dims):
        k = k * d + i
    return k


def ct(c: Coeff, oracle) -> int:
    """Count map on coefficients, valued in GF(2)[U] (bit masks)."""
    total = 0
    for fs, u in c.monomials:
        val = 1
        for g in fs:
            if g.space.dimension != 0:
                raise DimensionMismatch(f"cannot count the {g.space.dimension}-dimensional {g}")
            if not oracle.count(g.space, tuple(d[1] for d in g.decos)):
                val = 0
                break
        if val:
            total ^= 1 << u
    return total


def _anchor_index(f):
    outs = f.gen.flow_out
    if outs:
        return outs[0]
    if f.out_marks:
        return min(f.out_marks)
    return None


class _NoSignature(Exception):
    pass


def word_slots(word) -> list:
    """Ordered source slots ``(factor index, vertex index)`` by the insertion rule."""

    def order(i):
        f = word[i]
        n = f.gen.space.arity
        a = _anchor_index(f)
        start = 0 if a is None else a + 1
        out, linked = [], False
        for step in range(n):
            k = (start + step) % n
            d = f.gen.decos[k]
            if d[0] == FLOW_IN:
                out.append((i, k))
            elif k in f.in_marks and not linked:
                linked = True
                if i > 0:
                    out.extend(order(i - 1))
        if not linked and i > 0 and order(i - 1):
            raise _NoSignature
        return out

    return order(len(word) - 1) if word else []


def ev_word(word, oracle) -> MorElement:
    if not word:
        return MorElement((), None, (), (), np.array([[1]], dtype=object))
    for f in word[:-1]:
        if f.gen.flow_out:
            return MOR_OMEGA
    last = word[-1]
    if len(last.gen.flow_out) > 1:
        return MOR_OMEGA
    flavors = {flavor_of(f.gen.space.filtration) for f in word}
    if len(flavors) != 1:
        return MOR_OMEGA
    flavor = flavors.pop()
    try:
        slots = word_slots(word)
    except _NoSignature:
        return MOR_OMEGA
    for f in word:
        if f.gen.space.dimension != 0:
            raise DimensionMismatch(f"cannot evaluate the {f.gen.space.dimension}-dimensional {f.gen}")
    source, bases = [], []
    for i, k in slots:
        v = word[i].gen.vertices[k]
        source.append((v, flavor))
        bases.append(tuple(oracle.points_on(v)))
    if last.gen.flow_out:
        ko = last.gen.flow_out[0]
        dv = reverse(last.gen.vertices[ko])
        dest, dest_basis = (dv, flavor), tuple(oracle.points_on(dv))
        # the output corner carries a fixed point: only that row is hit
        row = dest_basis.index(last.gen.decos[ko][1])
    else:
        dest, dest_basis, row = None, (), 0
    rows = len(dest_basis) if dest else 1
    cols = int(np.prod([len(b) for b in bases])) if bases else 1
    m = poly_zeros(rows, cols)
    fixed = [[d[1] for d in f.gen.decos] for f in word]
    for col, choice in enumerate(itertools.product(*bases)):
        pts = [list(p) for p in fixed]
        for (i, k), p in zip(slots, choice):
            pts[i][k] = p
        base = 1
        for f, p in zip(word[:-1], pts[:-1]):
            if not oracle.count(f.gen.space, tuple(p)):
                base = 0
                break
        if not base:
            continue
        if oracle.count(last.gen.space, tuple(pts[-1])):
            m[row, col] ^= 1
    return MorElement(tuple(source), dest, tuple(bases), dest_basis, m)


def ev(x: Element, oracle) -> MorElement:
    if x.omega:
        return MOR_OMEGA
    total = MOR_ZERO
    for w, c in x.terms:
        k = ct(c, oracle)
        total = mor_sum(total, mor_scale(k, ev_word(w, oracle)))
        if total.omega:
            return total
    return total


def ev_extended(g, oracle) -> MorElement:
    """Scalar, functional or chain element for a single pre-generator."""
    from .semialgebra import Factor
    if len(g.flow_out) > 1:
        return MOR_OMEGA
    return ev_word((Factor(g),), oracle)
