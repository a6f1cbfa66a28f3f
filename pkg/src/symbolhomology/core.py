"""Canonical cyclic words, points, moduli symbols and decorated pre-generators.

A boundary word is a cyclic sequence of labels stored as its lexicographically
least rotation.  Vertex ``i`` of a word ``w`` is the ordered pair
``(w[i], w[i+1 mod n])``.  Decorations of a pre-generator are stored
positionally, one per vertex, so words with repeated vertex types stay
unambiguous.
"""

from __future__ import annotations

import threading
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence, Union

from .errors import (
    AdjacentRepeat,
    AmbiguousSlot,
    IncompleteDecoration,
    MaslovBound,
    MissingFlowIn,
)

Label = str
Vertex = tuple  # (incoming label, outgoing label)
Filtration = Union[str, int]  # "none", "w0" or an n_w stratum index

UNFILTERED = "none"
W_FILTERED = "w0"

FLOW_IN = "in"
FLOW_OUT = "out"
POINTED = "pt"

GENERATOR = "generator"
FULLY_POINTED = "fully-pointed"
OTHER = "other"


def _rotations(seq: Sequence) -> list[tuple]:
    n = len(seq)
    return [tuple(seq[r:]) + tuple(seq[:r]) for r in range(n)]


def canonical_boundary(labels: Sequence[Label]) -> tuple:
    labels = tuple(labels)
    if len(labels) < 2:
        raise ValueError("a boundary word needs at least two labels")
    for i, lab in enumerate(labels):
        if not isinstance(lab, str) or not lab:
            raise ValueError(f"bad label {lab!r}")
        if lab == labels[(i + 1) % len(labels)]:
            raise AdjacentRepeat(f"adjacent repeat of {lab!r} in {labels}")
    return min(_rotations(labels))


def vertices_of(word: Sequence[Label]) -> list[Vertex]:
    n = len(word)
    return [(word[i], word[(i + 1) % n]) for i in range(n)]


def reverse(v: Vertex) -> Vertex:
    return (v[1], v[0])


@dataclass(frozen=True, order=True)
class Point:
    """An intersection point between the curves of two labels."""

    pair: tuple
    name: str

    def __post_init__(self):
        a, b = self.pair
        if a == b:
            raise ValueError("a point needs two distinct labels")
        if a > b:
            object.__setattr__(self, "pair", (b, a))

    def fits(self, vertex: Vertex) -> bool:
        return tuple(sorted(vertex)) == self.pair

    def __str__(self) -> str:
        return self.name


def make_point(name: str, a: Label, b: Label) -> Point:
    return Point((a, b), name)


def formal_dimension(arity: int, maslov: int) -> int:
    if arity == 2:
        return max(maslov - 1, 0)
    return maslov


def _check_filtration(tag) -> Filtration:
    if tag in (UNFILTERED, W_FILTERED):
        return tag
    if isinstance(tag, int) and not isinstance(tag, bool) and tag >= 0:
        return tag
    raise ValueError(f"bad filtration tag {tag!r}")


@dataclass(frozen=True)
class PolygonSymbol:
    word: tuple
    maslov: int
    filtration: Filtration = UNFILTERED

    @property
    def arity(self) -> int:
        return len(self.word)

    @property
    def dimension(self) -> int:
        return formal_dimension(self.arity, self.maslov)

    @property
    def vertices(self) -> list[Vertex]:
        return vertices_of(self.word)

    def with_filtration(self, tag) -> "PolygonSymbol":
        return polygon_symbol(self.word, self.maslov, tag)

    def sort_key(self):
        return (self.word, self.maslov, str(self.filtration))

    def __str__(self) -> str:
        tag = "" if self.filtration == UNFILTERED else (
            ";w0" if self.filtration == W_FILTERED else f";nw={self.filtration}")
        return f"M[{self.maslov};({','.join(self.word)}){tag}]"


_INTERN: dict = {}
_INTERN_LOCK = threading.Lock()


def polygon_symbol(word: Sequence[Label], maslov: int, filtration: Filtration = UNFILTERED) -> PolygonSymbol:
    """Interned constructor; rotates the word into canonical form."""
    # type in the key: True == 1 must not hit the cache for stratum 1
    key = (tuple(word), maslov, filtration, type(filtration))
    sym = _INTERN.get(key)
    if sym is not None:
        return sym
    canon = canonical_boundary(word)
    if not isinstance(maslov, int) or maslov < 0:
        raise MaslovBound(f"Maslov index must be a nonnegative integer, got {maslov!r}")
    limit = 2 if len(canon) == 2 else 1
    if maslov > limit:
        raise MaslovBound(f"Maslov index {maslov} exceeds {limit} for arity {len(canon)}")
    tag = _check_filtration(filtration)
    with _INTERN_LOCK:
        sym = _INTERN.get((canon, maslov, tag))
        if sym is None:
            sym = PolygonSymbol(canon, maslov, tag)
            _INTERN[(canon, maslov, tag)] = sym
        _INTERN[key] = sym
    return sym


def _deco_key(d):
    if d is None:
        return (3, ())
    kind, pt = d
    order = {FLOW_IN: 0, POINTED: 1, FLOW_OUT: 2}[kind]
    return (order, (pt.pair, pt.name) if pt is not None else ())


@dataclass(frozen=True)
class PreGenerator:
    """A moduli symbol with one decoration per vertex (positional)."""

    space: PolygonSymbol
    decos: tuple

    @property
    def word(self) -> tuple:
        return self.space.word

    @property
    def vertices(self) -> list[Vertex]:
        return self.space.vertices

    def indices(self, kind: str) -> list[int]:
        return [i for i, d in enumerate(self.decos) if d is not None and d[0] == kind]

    @property
    def flow_in(self) -> list[int]:
        return self.indices(FLOW_IN)

    @property
    def flow_out(self) -> list[int]:
        return self.indices(FLOW_OUT)

    @property
    def pointed(self) -> list[int]:
        return self.indices(POINTED)

    @property
    def is_fully_pointed(self) -> bool:
        return all(d is not None and d[0] == POINTED for d in self.decos)

    def fixed_points(self) -> dict:
        """Vertex index to point for every pointed or flow-out vertex."""
        return {i: d[1] for i, d in enumerate(self.decos) if d is not None and d[0] != FLOW_IN}

    def with_decos(self, decos) -> "PreGenerator":
        return PreGenerator(self.space, tuple(decos))

    def with_space(self, space: PolygonSymbol) -> "PreGenerator":
        return PreGenerator(space, self.decos)

    @cached_property
    def key(self):
        return (self.space.sort_key(), tuple(_deco_key(d) for d in self.decos))

    def sort_key(self):
        return self.key

    def __str__(self) -> str:
        parts = []
        for d in self.decos:
            if d is None:
                parts.append("?")
            elif d[0] == FLOW_IN:
                parts.append(".v")
            elif d[0] == FLOW_OUT:
                parts.append(f"^{d[1].name}")
            else:
                parts.append(f"@{d[1].name}")
        return f"{self.space}({', '.join(parts)})"


def canonical_pregenerator(word: Sequence[Label], maslov: int, decos: Sequence,
                           filtration: Filtration = UNFILTERED) -> tuple[PreGenerator, int]:
    """Build a pre-generator from any rotation; also return the index shift.

    Old vertex ``i`` ends up at position ``(i - shift) % n``.
    """
    word = tuple(word)
    decos = tuple(decos)
    n = len(word)
    if len(decos) != n:
        raise IncompleteDecoration(f"{n} vertices but {len(decos)} decorations")
    space = polygon_symbol(word, maslov, filtration)
    verts = vertices_of(word)
    for v, d in zip(verts, decos):
        if d is None:
            continue
        kind, pt = d
        if kind not in (FLOW_IN, FLOW_OUT, POINTED):
            raise ValueError(f"bad decoration kind {kind!r}")
        if kind == FLOW_IN:
            if pt is not None:
                raise ValueError("flow-in vertices carry no point")
        elif pt is None or not pt.fits(v):
            raise ValueError(f"point {pt} does not lie on vertex {v}")
    best = None
    for r in range(n):
        rw = word[r:] + word[:r]
        if rw != space.word:
            continue
        key = tuple(_deco_key(d) for d in decos[r:] + decos[:r])
        if best is None or key < best[0]:
            best = (key, r)
    r = best[1]
    return PreGenerator(space, decos[r:] + decos[:r]), r


def pregenerator(word: Sequence[Label], maslov: int, decos: Sequence,
                 filtration: Filtration = UNFILTERED) -> PreGenerator:
    return canonical_pregenerator(word, maslov, decos, filtration)[0]


def from_sets(space: PolygonSymbol, pointed: Iterable = (), flow_in: Iterable = (),
              flow_out: Iterable = ()) -> PreGenerator:
    """Build from the set form: pointings (vertex, point), flow-in vertices, flow-out pointings."""
    verts = space.vertices
    decos: list = [None] * len(verts)

    def slot(v):
        hits = [i for i, u in enumerate(verts) if u == tuple(v)]
        if not hits:
            raise IncompleteDecoration(f"vertex {v} is not on {space}")
        if len(hits) > 1:
            raise AmbiguousSlot(f"vertex {v} occurs {len(hits)} times on {space}")
        return hits[0]

    def put(v, d):
        i = slot(v)
        if decos[i] is not None:
            raise IncompleteDecoration(f"vertex {v} decorated twice")
        decos[i] = d

    for v, p in pointed:
        put(v, (POINTED, p))
    for v in flow_in:
        put(v, (FLOW_IN, None))
    for v, p in flow_out:
        put(v, (FLOW_OUT, p))
    return pregenerator(space.word, space.maslov, decos, space.filtration)


def classify(g: PreGenerator) -> str:
    if any(d is None for d in g.decos):
        raise IncompleteDecoration(f"{g} has undecorated vertices")
    n_in, n_out = len(g.flow_in), len(g.flow_out)
    if n_in > 0 and n_out == 1:
        return GENERATOR
    if n_in == 0 and n_out == 0:
        return FULLY_POINTED
    return OTHER


def k_up(g: PreGenerator) -> PreGenerator:
    """Turn every flow-out into a pointing at the same point."""
    if not g.flow_out:
        return g
    return g.with_decos((POINTED, d[1]) if d is not None and d[0] == FLOW_OUT else d
                        for d in g.decos)


def flow_in_slot(g: PreGenerator, vertex: Vertex) -> int:
    hits = [i for i in g.flow_in if g.vertices[i] == tuple(vertex)]
    if not hits:
        raise MissingFlowIn(f"{vertex} is not a flow-in vertex of {g}")
    if len(hits) > 1:
        raise AmbiguousSlot(f"{vertex} matches {len(hits)} flow-in vertices of {g}")
    return hits[0]


def k_down(g: PreGenerator, pointings: Iterable) -> PreGenerator:
    """Point the flow-in vertices named by ``pointings`` (pairs of vertex and point)."""
    decos = list(g.decos)
    for v, p in pointings:
        i = flow_in_slot(g, v)
        if decos[i][0] != FLOW_IN:
            raise MissingFlowIn(f"{v} consumed twice")
        if not p.fits(v):
            raise ValueError(f"point {p} does not lie on {v}")
        decos[i] = (POINTED, p)
    return g.with_decos(decos)


def multiplicity_profiles(word: Iterable[PreGenerator]) -> tuple[Counter, Counter]:
    inward: Counter = Counter()
    outward: Counter = Counter()
    for g in word:
        verts = g.vertices
        for i in g.flow_in:
            inward[verts[i]] += 1
        for i in g.flow_out:
            outward[verts[i]] += 1
    return inward, outward


def profile_key(counter: Counter) -> tuple:
    return tuple(sorted((v, c) for v, c in counter.items() if c))
