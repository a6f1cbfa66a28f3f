"""Analytic data providers: emptiness, mod-2 counts and ends of moduli spaces.

Two backends share one interface.  ``DeclarativeOracle`` reads spaces listed in
a JSON file; ``TorusOracle`` enumerates positive domains on a genus-one diagram
with two curves.  Points are always given positionally, aligned with the
canonical vertex order of the queried symbol.

Constant bigons (Maslov index 0, arity 2) are answered by the base class in
every backend: nonempty with count 1 exactly when both corners carry the same
point.
"""

from __future__ import annotations

import itertools
import json
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .core import (
    POINTED,
    UNFILTERED,
    W_FILTERED,
    Point,
    PolygonSymbol,
    canonical_boundary,
    canonical_pregenerator,
    formal_dimension,
    polygon_symbol,
    vertices_of,
)
from .errors import (
    DimensionMismatch,
    InconsistentComplex,
    MalformedEnd,
    MaslovBound,
    NonEmbeddedDomain,
    ParseError,
    Unsupported,
)


@dataclass(frozen=True)
class PointedQuery:
    space: PolygonSymbol
    points: tuple


@dataclass(frozen=True)
class EndRecord:
    """One broken configuration: cut along the chord named by ``pair``.

    ``left`` is the piece whose new corner has type ``pair``; ``right`` has the
    reversed new corner.  Both carry ``point`` at the new corner.
    """

    pair: tuple
    point: Point
    left: PolygonSymbol
    right: PolygonSymbol

    def flipped(self) -> "EndRecord":
        return EndRecord((self.pair[1], self.pair[0]), self.point, self.right, self.left)

    def __str__(self) -> str:
        return f"end({self.pair[0]},{self.pair[1]})@{self.point.name}[{self.left} | {self.right}]"


@dataclass(frozen=True)
class Cut:
    left_labels: tuple
    left_origin: tuple  # old vertex index per piece vertex; None marks the new corner
    right_labels: tuple
    right_origin: tuple


def cut_word(word: Sequence[str], pair: Sequence[str]) -> Cut:
    a, b = pair
    if a == b:
        raise MalformedEnd(f"split pair ({a},{b}) repeats a label")
    n = len(word)
    ia = [k for k in range(n) if word[k] == a]
    ib = [k for k in range(n) if word[k] == b]
    if len(ia) != 1 or len(ib) != 1:
        raise MalformedEnd(f"split pair ({a},{b}) does not name one chord of {tuple(word)}")
    i, j = ia[0], ib[0]
    left_len = (i - j) % n + 1
    right_len = (j - i) % n + 1
    left = tuple(word[(j + k) % n] for k in range(left_len))
    right = tuple(word[(i + k) % n] for k in range(right_len))
    lo = tuple((j + k) % n for k in range(left_len - 1)) + (None,)
    ro = tuple((i + k) % n for k in range(right_len - 1)) + (None,)
    return Cut(left, lo, right, ro)


def canonical_pointed(labels: Sequence[str], maslov: int, tag, points: Sequence[Point]):
    """Rotate a fully pointed piece into canonical position."""
    g, _ = canonical_pregenerator(labels, maslov, [(POINTED, p) for p in points], tag)
    return g.space, tuple(d[1] for d in g.decos)


def piece_points(cut: Cut, parent_points: Sequence[Point], point: Point):
    lp = tuple(point if k is None else parent_points[k] for k in cut.left_origin)
    rp = tuple(point if k is None else parent_points[k] for k in cut.right_origin)
    return lp, rp


def _is_constant_bigon(space: PolygonSymbol) -> bool:
    return space.arity == 2 and space.maslov == 0


class Oracle:
    """Common query logic; backends implement ``_full_nonempty``, ``_count``, ``_ends``."""

    name = "oracle"

    def __init__(self, points: Iterable[Point]):
        self._points = sorted(set(points))
        self._by_pair: dict = {}
        for p in self._points:
            self._by_pair.setdefault(p.pair, []).append(p)
        self._cache: dict = {}
        self._lock = threading.Lock()
        self.defaulted: set = set()

    # -- points ---------------------------------------------------------------
    @property
    def points(self) -> list[Point]:
        return list(self._points)

    def points_on(self, vertex) -> list[Point]:
        return list(self._by_pair.get(tuple(sorted(vertex)), ()))

    def point_named(self, name: str) -> Point:
        hits = [p for p in self._points if p.name == name]
        if len(hits) != 1:
            raise KeyError(f"no unique point named {name!r}")
        return hits[0]

    def label_pairs(self) -> list[tuple]:
        return sorted(self._by_pair)

    def max_stratum(self) -> int:
        return 0

    # -- memo -------------------------------------------------------------------
    def _memo(self, key, fn):
        hit = self._cache.get(key, self._cache)
        if hit is not self._cache:
            return hit
        val = fn()
        with self._lock:
            self._cache[key] = val
        return val

    # -- full pointings -----------------------------------------------------
    def _check_points(self, space: PolygonSymbol, pts: Sequence[Point]):
        if len(pts) != space.arity:
            raise ValueError(f"{space} needs {space.arity} points, got {len(pts)}")
        for v, p in zip(space.vertices, pts):
            if not p.fits(v):
                raise ValueError(f"point {p} does not lie on vertex {v}")

    def nonempty_full(self, space: PolygonSymbol, pts: Sequence[Point]) -> bool:
        pts = tuple(pts)
        if _is_constant_bigon(space):
            return pts[0] == pts[1] and space.filtration in (UNFILTERED, W_FILTERED, 0)
        return self._memo(("ne", space, pts), lambda: self._full_nonempty(space, pts))

    def count(self, space: PolygonSymbol, pts: Sequence[Point]) -> int:
        """Mod-2 count of a 0-dimensional fully pointed space (0 when empty)."""
        pts = tuple(pts)
        if space.dimension != 0:
            raise DimensionMismatch(f"{space} has dimension {space.dimension}, not 0")
        self._check_points(space, pts)
        if _is_constant_bigon(space):
            return 1 if self.nonempty_full(space, pts) else 0
        return self._memo(("ct", space, pts), lambda: self._count(space, pts))

    def query_count(self, q: PointedQuery) -> tuple[bool, int]:
        empty = not self.nonempty_full(q.space, q.points)
        return empty, self.count(q.space, q.points)

    def ends(self, space: PolygonSymbol, pts: Sequence[Point]) -> list[EndRecord]:
        pts = tuple(pts)
        if space.dimension != 1:
            raise DimensionMismatch(f"{space} has dimension {space.dimension}, not 1")
        self._check_points(space, pts)
        return self._memo(("ends", space, pts), lambda: list(self._ends(space, pts)))

    def query_ends(self, q: PointedQuery) -> list[EndRecord]:
        return self.ends(q.space, q.points)

    # -- partial pointings ----------------------------------------------------
    def completions(self, space: PolygonSymbol, fixed: dict):
        verts = space.vertices
        choices = [[fixed[i]] if i in fixed else self.points_on(v) for i, v in enumerate(verts)]
        return itertools.product(*choices)

    def nonempty(self, space: PolygonSymbol, fixed: dict) -> bool:
        """Is the space nonempty once the vertices in ``fixed`` carry the given points?"""
        if len(fixed) == space.arity:
            return self.nonempty_full(space, tuple(fixed[i] for i in range(space.arity)))
        key = ("pne", space, tuple(sorted(fixed.items())))
        return self._memo(key, lambda: any(self.nonempty_full(space, c)
                                           for c in self.completions(space, fixed)))

    # -- backend hooks --------------------------------------------------------
    def _full_nonempty(self, space, pts) -> bool:
        raise NotImplementedError

    def _count(self, space, pts) -> int:
        raise NotImplementedError

    def _ends(self, space, pts) -> list[EndRecord]:
        raise NotImplementedError

    def default_scope(self) -> set:
        raise NotImplementedError


# ---------------------------------------------------------------------------
# declarative backend

def _parse_tag(raw):
    if raw is None or raw == "none":
        return UNFILTERED
    if raw == "w0":
        return W_FILTERED
    if isinstance(raw, dict) and set(raw) == {"nw"}:
        return int(raw["nw"])
    raise ParseError(f"bad filtration {raw!r}")


def _dump_tag(tag):
    if tag in (UNFILTERED, W_FILTERED):
        return tag
    return {"nw": tag}


class DeclarativeOracle(Oracle):
    """Spaces listed explicitly; anything undeclared is empty."""

    def __init__(self, entries: dict, points: Iterable[Point], name: str = "declarative"):
        super().__init__(points)
        self.name = name
        self.entries = entries  # (space, pts) -> ("count", c) or ("ends", [EndRecord])

    @classmethod
    def from_dict(cls, data: dict, name: str = "declarative") -> "DeclarativeOracle":
        if not isinstance(data, dict) or "spaces" not in data:
            raise ParseError("declarative oracle needs a 'spaces' list")
        named: dict = {}
        for p in data.get("points", []):
            try:
                pt = Point(tuple(p["pair"]), p["id"])
            except (KeyError, TypeError, ValueError) as exc:
                raise ParseError(f"bad point entry {p!r}") from exc
            named[pt.name] = pt

        def point_for(pid, vertex):
            pt = named.get(pid)
            if pt is None:
                pt = Point(tuple(vertex), pid)
                named[pid] = pt
            if not pt.fits(vertex):
                raise ParseError(f"point {pid} does not lie on {vertex}")
            return pt

        # first pass registers points inferred from pointings
        raw_spaces = data["spaces"]
        for entry in raw_spaces:
            try:
                word = tuple(entry["boundary"])
            except (KeyError, TypeError) as exc:
                raise ParseError(f"space without boundary: {entry!r}") from exc
            for v, pid in _pointing_items(entry, word):
                point_for(pid, v)

        entries: dict = {}
        for entry in raw_spaces:
            word = tuple(entry["boundary"])
            try:
                maslov = int(entry["maslov"])
                tag = _parse_tag(entry.get("filtration", "none"))
                pts = [point_for(pid, v) for v, pid in _pointing_items(entry, word)]
                space, cpts = canonical_pointed(word, maslov, tag, pts)
            except ParseError:
                raise
            except (KeyError, TypeError, ValueError, MaslovBound) as exc:
                raise ParseError(f"bad space entry {entry!r}: {exc}") from exc
            has_count, has_ends = "count" in entry, "ends" in entry
            if has_count == has_ends:
                raise ParseError(f"space entry needs exactly one of count/ends: {entry!r}")
            if has_count:
                if space.dimension != 0:
                    raise ParseError(f"count given for {space} of dimension {space.dimension}")
                value = ("count", int(entry["count"]) % 2)
            else:
                if space.dimension != 1:
                    raise ParseError(f"ends given for {space} of dimension {space.dimension}")
                value = ("ends", [_parse_end(e, space, tag, named) for e in entry["ends"]])
            key = (space, cpts)
            if key in entries:
                raise ParseError(f"space {space} with pointing {cpts} declared twice")
            entries[key] = value
        return cls(entries, named.values(), data.get("name", name))

    @classmethod
    def load(cls, path) -> "DeclarativeOracle":
        path = Path(path)
        try:
            data = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: {exc}") from exc
        return cls.from_dict(data, name=path.stem)

    def to_dict(self) -> dict:
        spaces = []
        for (space, pts), (kind, val) in sorted(self.entries.items(), key=lambda kv: _entry_sort(kv[0])):
            item = {
                "boundary": list(space.word),
                "maslov": space.maslov,
                "filtration": _dump_tag(space.filtration),
                "pointings": {f"{v[0]},{v[1]}": p.name for v, p in zip(space.vertices, pts)},
            }
            if kind == "count":
                item["count"] = val
            else:
                item["ends"] = [_dump_end(e) for e in val]
            spaces.append(item)
        return {"name": self.name,
                "points": [{"id": p.name, "pair": list(p.pair)} for p in self._points],
                "spaces": spaces}

    def max_stratum(self) -> int:
        tags = [s.filtration for s, _ in self.entries if isinstance(s.filtration, int)]
        return max(tags, default=0)

    def _full_nonempty(self, space, pts) -> bool:
        return (space, pts) in self.entries

    def _count(self, space, pts) -> int:
        hit = self.entries.get((space, pts))
        if hit is None:
            self.defaulted.add((space, pts))
            return 0
        return hit[1]

    def _ends(self, space, pts):
        hit = self.entries.get((space, pts))
        return [] if hit is None else hit[1]

    def declared_symbols(self) -> set:
        return {s for s, _ in self.entries}

    def default_scope(self) -> set:
        scope = {s for s in self.declared_symbols() if s.dimension == 1}
        tags = {s.filtration for s in self.declared_symbols()} | {UNFILTERED}
        for pair in self.label_pairs():
            for tag in tags:
                scope.add(polygon_symbol(pair, 2, tag))
        return scope


def _entry_sort(key):
    space, pts = key
    return (space.sort_key(), tuple((p.pair, p.name) for p in pts))


def _pointing_items(entry: dict, word: tuple):
    raw = entry.get("pointings")
    verts = vertices_of(word)
    if isinstance(raw, list):
        if len(raw) != len(verts):
            raise ParseError(f"pointing list length mismatch in {entry!r}")
        return list(zip(verts, raw))
    if isinstance(raw, dict):
        if len(set(verts)) != len(verts):
            raise ParseError("repeated vertex types need a positional pointing list")
        out = []
        for v in verts:
            key = f"{v[0]},{v[1]}"
            if key not in raw:
                raise ParseError(f"vertex {key} not pointed in {entry!r}")
            out.append((v, raw[key]))
        if len(raw) != len(verts):
            raise ParseError(f"extra pointings in {entry!r}")
        return out
    raise ParseError(f"missing pointings in {entry!r}")


def _parse_end(raw: dict, parent: PolygonSymbol, tag, named: dict) -> EndRecord:
    try:
        pair = tuple(raw["pair"])
        ml, mr = (int(m) for m in raw["maslov_split"])
        pname = raw["point"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad end {raw!r}") from exc
    if len(pair) != 2:
        raise ParseError(f"bad split pair in {raw!r}")
    pt = named.get(pname)
    if pt is None:
        pt = Point(pair, pname)
        named[pname] = pt
    if isinstance(tag, int):
        if "nw_split" not in raw:
            raise ParseError(f"end of an n_w stratum needs nw_split: {raw!r}")
        tl, tr = (int(t) for t in raw["nw_split"])
    else:
        tl = tr = tag
    try:
        cut = cut_word(parent.word, pair)
        left = polygon_symbol(cut.left_labels, ml, tl)
        right = polygon_symbol(cut.right_labels, mr, tr)
    except (MalformedEnd, MaslovBound, ValueError) as exc:
        raise ParseError(f"bad end {raw!r} of {parent}: {exc}") from exc
    return EndRecord(pair, pt, left, right)


def _dump_end(e: EndRecord) -> dict:
    item = {"pair": list(e.pair), "point": e.point.name,
            "maslov_split": [e.left.maslov, e.right.maslov]}
    if isinstance(e.left.filtration, int):
        item["nw_split"] = [e.left.filtration, e.right.filtration]
    return item


# ---------------------------------------------------------------------------
# genus-one diagrams

@dataclass(frozen=True)
class Region:
    id: str
    chi: int
    boundary: tuple
    corners: tuple  # (Point, quadrant)
    contains: frozenset


@dataclass(frozen=True)
class TorusDiagram:
    name: str
    labels: tuple
    points: tuple
    regions: tuple

    def region(self, rid: str) -> Region:
        return next(r for r in self.regions if r.id == rid)


def load_torus_diagram(source) -> TorusDiagram:
    """Load and validate a diagram from a path or an already parsed dict."""
    if isinstance(source, dict):
        data, name = source, source.get("name", "diagram")
    else:
        path = Path(source)
        try:
            data = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: {exc}") from exc
        name = data.get("name", path.stem)
    try:
        labels = tuple(data["labels"])
        points = tuple(Point(tuple(p["pair"]), p["id"]) for p in data["points"])
        raw_regions = data["regions"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"diagram missing fields: {exc}") from exc
    if len(labels) != 2:
        raise ParseError("genus-one diagrams carry exactly two labels")
    named = {p.name: p for p in points}
    if len(named) != len(points):
        raise ParseError("duplicate point ids")
    for p in points:
        if set(p.pair) != set(labels):
            raise ParseError(f"point {p.name} is not on the two diagram curves")
    regions = []
    for r in raw_regions:
        try:
            corners = tuple((named[c["point"]], int(c["quadrant"])) for c in r.get("corners", []))
            contains = frozenset(r.get("contains", []))
            regions.append(Region(r["id"], int(r["chi"]), tuple(r["boundary"]), corners, contains))
        except KeyError as exc:
            raise ParseError(f"bad region {r!r}: unknown {exc}") from exc
        except (TypeError, ValueError) as exc:
            raise ParseError(f"bad region {r!r}") from exc
        if not contains <= {"z", "w"}:
            raise ParseError(f"region {r['id']} contains unknown basepoints {set(contains)}")
    if sum("z" in r.contains for r in regions) != 1:
        raise ParseError("z must lie in exactly one region")
    if sum("w" in r.contains for r in regions) > 1:
        raise ParseError("w lies in more than one region")
    # combinatorial consistency
    for p in points:
        quads = sorted(q for r in regions for (c, q) in r.corners if c == p)
        if quads != [0, 1, 2, 3]:
            raise InconsistentComplex(f"point {p.name} has quadrant incidences {quads}")
    arc_uses: dict = {}
    for r in regions:
        for arc in r.boundary:
            arc_uses[arc] = arc_uses.get(arc, 0) + 1
    bad = {a: k for a, k in arc_uses.items() if k != 2}
    if bad:
        raise InconsistentComplex(f"arcs not used exactly twice: {bad}")
    v, e = len(points), len(arc_uses)
    total_chi = sum(r.chi for r in regions)
    if v - e + total_chi != 0:
        raise InconsistentComplex(f"V - E + sum(chi) = {v} - {e} + {total_chi} != 0")
    if e != 2 * v:
        raise InconsistentComplex(f"{e} arcs for {v} points; expected {2 * v}")
    return TorusDiagram(name, labels, points, tuple(regions))


@dataclass(frozen=True)
class Domain:
    mults: tuple  # aligned with diagram.regions
    euler: Fraction
    n_w: int
    quadrant_sums: tuple  # per point: 4 quadrant multiplicities


class TorusOracle(Oracle):
    """Bigon data from enumeration of positive domains avoiding z."""

    def __init__(self, diagram: TorusDiagram, multiplicity_bound: int = 4):
        super().__init__(diagram.points)
        self.diagram = diagram
        self.name = diagram.name
        self.bound = multiplicity_bound
        self._domains = self._enumerate()

    @classmethod
    def load(cls, path, multiplicity_bound: int = 4) -> "TorusOracle":
        return cls(load_torus_diagram(path), multiplicity_bound)

    def _enumerate(self) -> list[Domain]:
        regs = self.diagram.regions
        ranges = [range(1) if "z" in r.contains else range(self.bound + 1) for r in regs]
        pts = self.diagram.points
        out = []
        for mults in itertools.product(*ranges):
            euler = sum((Fraction(r.chi) - Fraction(len(r.corners), 4)) * m for r, m in zip(regs, mults))
            n_w = sum(m for r, m in zip(regs, mults) if "w" in r.contains)
            sums = []
            for p in pts:
                q = [0, 0, 0, 0]
                for r, m in zip(regs, mults):
                    for c, k in r.corners:
                        if c == p:
                            q[k] += m
                sums.append(tuple(q))
            out.append(Domain(tuple(mults), euler, n_w, tuple(sums)))
        return out

    def max_stratum(self) -> int:
        return self.bound if any("w" in r.contains for r in self.diagram.regions) else 0

    def _sign(self, vertex, point: Point) -> int:
        u, w = point.pair if point.pair[0] == self.diagram.labels[0] else point.pair[::-1]
        # the first diagram label plays the role of u in the quadrant convention
        return 1 if tuple(vertex) == (u, w) else -1

    def _corner_target(self, space, pts) -> list[int]:
        target = [0] * len(self.diagram.points)
        index = {p: k for k, p in enumerate(self.diagram.points)}
        for v, p in zip(space.vertices, pts):
            target[index[p]] += self._sign(v, p)
        return target

    def domains(self, space: PolygonSymbol, pts) -> list[Domain]:
        if space.arity != 2:
            raise Unsupported("the torus backend answers bigon queries only")
        return self._memo(("dom", space, tuple(pts)), lambda: self._domains_for(space, tuple(pts)))

    def _domains_for(self, space, pts):
        target = self._corner_target(space, pts)
        index = {p: k for k, p in enumerate(self.diagram.points)}
        found = []
        for d in self._domains:
            if any(q[0] + q[2] - q[1] - q[3] != t for q, t in zip(d.quadrant_sums, target)):
                continue
            n_corner = sum(Fraction(sum(d.quadrant_sums[index[p]]), 4) for p in pts)
            mu = d.euler + n_corner
            if mu != space.maslov:
                continue
            tag = space.filtration
            if tag == W_FILTERED and d.n_w != 0:
                continue
            if isinstance(tag, int) and d.n_w != tag:
                continue
            if space.maslov > 0 and not any(d.mults):
                continue
            found.append(d)
        return found

    def _embedded(self, d: Domain) -> bool:
        live = [(r, m) for r, m in zip(self.diagram.regions, d.mults) if m]
        return len(live) == 1 and live[0][1] == 1 and live[0][0].chi == 1 and len(live[0][0].corners) == 2

    def _full_nonempty(self, space, pts) -> bool:
        if space.arity != 2:
            raise Unsupported("the torus backend answers bigon queries only")
        if space.maslov == 2:
            return bool(self.domains(space, pts)) or bool(self._ends(space, pts))
        return bool(self.domains(space, pts))

    def _count(self, space, pts) -> int:
        total = 0
        for d in self.domains(space, pts):
            if not self._embedded(d):
                raise NonEmbeddedDomain(f"domain {d.mults} for {space} is not an embedded bigon")
            total += 1
        return total % 2

    def _ends(self, space, pts):
        if space.arity != 2:
            raise Unsupported("the torus backend answers bigon queries only")
        a, b = space.word
        p, q = pts
        tag = space.filtration
        out = []
        for r in self.points_on((a, b)):
            first = polygon_symbol((a, b), 1, UNFILTERED)
            d1 = self.domains(first, (p, r))
            d2 = self.domains(first, (r, q))
            splits = set()
            for x in d1:
                for y in d2:
                    if tag == UNFILTERED:
                        splits.add((UNFILTERED, UNFILTERED))
                    elif tag == W_FILTERED:
                        if x.n_w == 0 and y.n_w == 0:
                            splits.add((W_FILTERED, W_FILTERED))
                    elif x.n_w + y.n_w == tag:
                        splits.add((x.n_w, y.n_w))
            for tl, tr in sorted(splits, key=str):
                out.append(EndRecord((b, a), r, polygon_symbol((a, b), 1, tl), polygon_symbol((a, b), 1, tr)))
        return out

    def default_scope(self) -> set:
        tags = [UNFILTERED, W_FILTERED] + list(range(self.max_stratum() + 1))
        return {polygon_symbol(pair, 2, t) for pair in self.label_pairs() for t in tags}


def load_oracle(path, multiplicity_bound: int = 4) -> Oracle:
    """Pick the backend from the file contents (``regions`` means a diagram)."""
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    if "regions" in data:
        data.setdefault("name", path.stem)
        return TorusOracle(load_torus_diagram(data), multiplicity_bound)
    return DeclarativeOracle.from_dict(data, name=path.stem)


# ---------------------------------------------------------------------------
# consistency checking

@dataclass
class Violation:
    kind: str
    space: PolygonSymbol
    points: tuple
    detail: str

    def __str__(self) -> str:
        pts = ",".join(p.name for p in self.points)
        return f"{self.kind} {self.space}<{pts}>: {self.detail}"


@dataclass
class OracleReport:
    name: str
    checked: int = 0
    violations: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def lines(self) -> list[str]:
        out = [f"CHECK oracle-consistency {'PASS' if self.ok else 'FAIL'} "
               f"{self.name}: {self.checked} pointed spaces, {len(self.violations)} violations"]
        out += [f"CHECK violation FAIL {v}" for v in self.violations]
        out += [f"NOTE {n}" for n in self.notes]
        return out


def _piece_ok(piece: PolygonSymbol) -> bool:
    return not (piece.arity == 2 and piece.maslov == 0)


def _tag_splits(tag, top: int):
    if isinstance(tag, int):
        return [(j, tag - j) for j in range(tag + 1)]
    return [(tag, tag)]


def expected_ends(o: Oracle, space: PolygonSymbol, pts: tuple) -> set:
    """All geometrically admissible broken configurations with nonempty pieces."""
    word = space.word
    n = len(word)
    out = set()
    if len(set(word)) != n:
        return out
    for i in range(n):
        for j in range(i + 1, n):
            pair = (word[i], word[j])
            cut = cut_word(word, pair)
            for pt in o.points_on(pair):
                lp, rp = piece_points(cut, pts, pt)
                for ml in range(0, 3):
                    mr = space.maslov - ml
                    if mr < 0:
                        continue
                    try:
                        left0 = polygon_symbol(cut.left_labels, ml)
                        right0 = polygon_symbol(cut.right_labels, mr)
                    except MaslovBound:
                        continue
                    if not (_piece_ok(left0) and _piece_ok(right0)):
                        continue
                    if left0.dimension + right0.dimension != space.dimension - 1:
                        continue
                    for tl, tr in _tag_splits(space.filtration, o.max_stratum()):
                        ls, lpp = canonical_pointed(cut.left_labels, ml, tl, lp)
                        rs, rpp = canonical_pointed(cut.right_labels, mr, tr, rp)
                        if o.nonempty_full(ls, lpp) and o.nonempty_full(rs, rpp):
                            out.add(EndRecord(pair, pt, ls, rs))
    return out


def oriented(space: PolygonSymbol, e: EndRecord) -> EndRecord:
    """Orientation with the pair's first label on the lower edge index."""
    word = space.word
    ia = word.index(e.pair[0]) if e.pair[0] in word else -1
    ib = word.index(e.pair[1]) if e.pair[1] in word else -1
    return e if ia < ib else e.flipped()


def end_pieces(space: PolygonSymbol, pts: tuple, e: EndRecord):
    cut = cut_word(space.word, e.pair)
    lp, rp = piece_points(cut, pts, e.point)
    ls, lpp = canonical_pointed(cut.left_labels, e.left.maslov, e.left.filtration, lp)
    rs, rpp = canonical_pointed(cut.right_labels, e.right.maslov, e.right.filtration, rp)
    return (ls, lpp), (rs, rpp)


def check_oracle(o: Oracle, scope: Optional[Iterable[PolygonSymbol]] = None) -> OracleReport:
    report = OracleReport(o.name)
    scope = sorted(o.default_scope() if scope is None else scope, key=lambda s: s.sort_key())
    for space in scope:
        if space.dimension != 1:
            report.notes.append(f"skipped {space}: dimension {space.dimension}")
            continue
        if len(set(space.word)) != space.arity:
            report.notes.append(f"skipped {space}: repeated labels")
            continue
        choices = [o.points_on(v) for v in space.vertices]
        for pts in itertools.product(*choices):
            report.checked += 1
            declared = o.ends(space, pts)
            bad = False
            seen = set()
            parity = 0
            for e in declared:
                try:
                    cut = cut_word(space.word, e.pair)
                except MalformedEnd as exc:
                    report.violations.append(Violation("split", space, pts, str(exc)))
                    bad = True
                    continue
                if not e.point.fits(e.pair):
                    report.violations.append(Violation("split", space, pts, f"{e.point} is not on {e.pair}"))
                    bad = True
                    continue
                if (e.left.word != canonical_boundary(cut.left_labels)
                        or e.right.word != canonical_boundary(cut.right_labels)):
                    report.violations.append(Violation("split", space, pts, f"pieces do not match cut for {e}"))
                    bad = True
                    continue
                if (e.left.dimension + e.right.dimension != space.dimension - 1
                        or e.left.maslov + e.right.maslov != space.maslov
                        or not (_piece_ok(e.left) and _piece_ok(e.right))):
                    report.violations.append(Violation("maslov", space, pts, f"non-additive end {e}"))
                    bad = True
                    continue
                key = oriented(space, e)
                if key in seen:
                    report.violations.append(Violation("duplicate", space, pts, f"end listed twice: {e}"))
                    bad = True
                    continue
                seen.add(key)
                (ls, lpp), (rs, rpp) = end_pieces(space, pts, e)
                if not (o.nonempty_full(ls, lpp) and o.nonempty_full(rs, rpp)):
                    report.violations.append(Violation("end-empty", space, pts, f"{e} has an empty piece"))
                    bad = True
                    continue
                parity ^= o.count(ls, lpp) & o.count(rs, rpp)
            if bad:
                continue
            expected = {oriented(space, e) for e in expected_ends(o, space, pts)}
            missing = sorted(map(str, expected - seen))
            extra = sorted(map(str, seen - expected))
            if missing or extra or parity:
                parts = []
                if missing:
                    parts.append("unmatched broken configuration " + "; ".join(missing))
                if extra:
                    parts.append("ends without a glued configuration " + "; ".join(extra))
                if parity:
                    parts.append("odd number of ends")
                report.violations.append(Violation("parity", space, pts, "; ".join(parts)))
    for space, pts in sorted(getattr(o, "defaulted", ()), key=_entry_sort):
        report.notes.append(f"defaulted query {space}<{','.join(p.name for p in pts)}>")
    return report
