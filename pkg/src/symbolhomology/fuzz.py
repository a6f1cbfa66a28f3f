"""Building consistent declarative oracles from 0-dimensional data.

Given counts of 0-dimensional spaces, every 1-dimensional space is declared
with exactly the broken configurations whose pieces are nonempty.  The result
passes the consistency check precisely when every such end list has an even
weighted count, which the random generator arranges by solving the chain
condition over GF(2).
"""

from __future__ import annotations

import itertools
import random

import numpy as np

from .core import UNFILTERED, W_FILTERED, Point, polygon_symbol
from .gf2 import nullspace
from .oracle import DeclarativeOracle, canonical_pointed, expected_ends


def complete_with_ends(counts: dict, points, name: str = "generated") -> DeclarativeOracle:
    """``counts`` maps (symbol, canonical points) to 0/1 for nonempty 0-dimensional spaces."""
    points = sorted(set(points))
    base = DeclarativeOracle({k: ("count", v % 2) for k, v in counts.items()}, points, name)
    tags = {s.filtration for s, _ in counts} | {UNFILTERED}
    candidates = set()
    for s, _ in counts:
        if s.arity >= 3:
            candidates.add(polygon_symbol(s.word, 1, s.filtration))
    for pair in base.label_pairs():
        for t in tags:
            candidates.add(polygon_symbol(pair, 2, t))
    entries = dict(base.entries)
    for s in sorted(candidates, key=lambda s: s.sort_key()):
        if len(set(s.word)) != s.arity:
            continue
        for pts in itertools.product(*(base.points_on(v) for v in s.vertices)):
            ends = expected_ends(base, s, tuple(pts))
            if ends:
                entries[(s, tuple(pts))] = ("ends", sorted(ends, key=str))
    return DeclarativeOracle(entries, points, name)


def stratified(counts_by_nw: dict) -> dict:
    """Expand counts keyed by (word, maslov, points, n_w) into all filtration tags."""
    out: dict = {}
    for (word, maslov, pts, nw), c in counts_by_nw.items():
        for tag in (UNFILTERED, W_FILTERED, nw):
            if tag == W_FILTERED and nw != 0:
                continue
            space, cpts = canonical_pointed(word, maslov, tag, pts)
            out[(space, cpts)] = (out.get((space, cpts), 0) + c) % 2
            out.setdefault((space, cpts), 0)
    return out


def triangle_counts() -> dict:
    """Hand-chosen data for three complexes and a triangle map between them.

    Complex read at (b,a): x1 -> x2.  At (g,b): y1 -> y2.  At (g,a): q1 -> q2,
    the last disk passing once over w.
    """
    x1, x2 = Point(("a", "b"), "x1"), Point(("a", "b"), "x2")
    y1, y2 = Point(("b", "g"), "y1"), Point(("b", "g"), "y2")
    q1, q2 = Point(("a", "g"), "q1"), Point(("a", "g"), "q2")
    data = {
        # bigon word (a,b): corners (a,b), (b,a)
        (("a", "b"), 1, (x2, x1), 0): 1,
        (("b", "g"), 1, (y2, y1), 0): 1,
        (("a", "g"), 1, (q2, q1), 1): 1,
        # triangle word (a,g,b): corners (a,g), (g,b), (b,a)
        (("a", "g", "b"), 0, (q2, y2, x2), 1): 1,
        (("a", "g", "b"), 0, (q1, y1, x2), 0): 1,
        (("a", "g", "b"), 0, (q1, y2, x1), 0): 1,
        (("a", "g", "b"), 0, (q2, y1, x1), 0): 1,
    }
    return data


def triangle_oracle() -> DeclarativeOracle:
    data = triangle_counts()
    pts = {p for (_, _, ps, _) in data for p in ps}
    return complete_with_ends(stratified(data), pts, "triangle")


# ---------------------------------------------------------------------------
# random consistent oracles

_PAIRS = (("a", "b"), ("b", "g"), ("a", "g"))
_TRI = ("a", "g", "b")


def _random_differential(rng: random.Random, pts):
    """Square matrix d[target][source] with d @ d = 0 over GF(2), zero diagonal."""
    n = len(pts)
    while True:
        d = np.zeros((n, n), dtype=np.uint8)
        for i in range(n):
            for j in range(n):
                if i != j and rng.random() < 0.5:
                    d[i, j] = 1
        if not ((d.astype(int) @ d.astype(int)) % 2).any():
            return d


def random_consistent_oracle(rng: random.Random, name: str = "random") -> DeclarativeOracle:
    npts = {pair: rng.choice((1, 2)) for pair in _PAIRS}
    pts = {pair: [Point(pair, f"{pair[0]}{pair[1]}{k}") for k in range(npts[pair])] for pair in _PAIRS}
    counts: dict = {}
    diffs = {}
    for pair in _PAIRS:
        # complex read at the reversed word vertex: source at corner 1, target at corner 0
        ps = pts[pair]
        d = _random_differential(rng, ps)
        diffs[pair] = d
        for t, s in itertools.product(range(len(ps)), repeat=2):
            if t == s:
                continue
            nonempty = d[t, s] or rng.random() < 0.2
            if nonempty:
                space, cp = canonical_pointed(pair, 1, UNFILTERED, (ps[t], ps[s]))
                counts[(space, cp)] = int(d[t, s])
    # triangle map: inputs at (g,b) [pair (b,g)] and (b,a) [pair (a,b)], output at (a,g)
    qs, ys, xs = pts[("a", "g")], pts[("b", "g")], pts[("a", "b")]
    dq, dy, dx = diffs[("a", "g")], diffs[("b", "g")], diffs[("a", "b")]
    idx = {k: n for n, k in enumerate(itertools.product(range(len(qs)), range(len(ys)), range(len(xs))))}
    rows = []
    for qi, yi, xi in idx:
        # coefficient of q_qi in (dF + F(d_y x 1) + F(1 x d_x)) applied to y_yi x x_xi
        row = np.zeros(len(idx), dtype=np.uint8)
        for qk in range(len(qs)):
            if dq[qi, qk]:
                row[idx[(qk, yi, xi)]] ^= 1
        for yk in range(len(ys)):
            if dy[yk, yi]:
                row[idx[(qi, yk, xi)]] ^= 1
        for xk in range(len(xs)):
            if dx[xk, xi]:
                row[idx[(qi, yi, xk)]] ^= 1
        rows.append(row)
    basis = nullspace(np.array(rows, dtype=np.uint8))
    sol = np.zeros(len(idx), dtype=np.uint8)
    for b in basis:
        if rng.random() < 0.5:
            sol ^= b
    for (qi, yi, xi), n in idx.items():
        if sol[n] or rng.random() < 0.2:
            space, cp = canonical_pointed(_TRI, 0, UNFILTERED, (qs[qi], ys[yi], xs[xi]))
            counts[(space, cp)] = int(sol[n])
    allpts = [p for ps in pts.values() for p in ps]
    return complete_with_ends(counts, allpts, name)
