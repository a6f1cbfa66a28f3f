"""Coefficients, algebra elements, the sum and product, scalars and normal forms.

An element is either the absorbing failure value (``OMEGA``) or a finite set of
terms ``coefficient • word``.  A word is a tuple of ``Factor`` objects: a
pre-generator plus bookkeeping of which of its pointed vertices were produced
by the product (``in_marks``: consumed flow-ins, ``out_marks``: former
flow-outs).  The marks never change emptiness or counts; they record how a
word was glued so the boundary map and evaluation can orient each factor.

Every operation takes an optional oracle.  Without one the algebra is purely
syntactic: no emptiness relation, only the constant-bigon unit rule.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property, lru_cache, reduce
from typing import Iterable, Optional

from .core import (
    FLOW_IN,
    FLOW_OUT,
    POINTED,
    UNFILTERED,
    W_FILTERED,
    PreGenerator,
    k_up,
    profile_key,
    reverse,
)
from .errors import AmbiguousSlot


# ---------------------------------------------------------------------------
# coefficients

def _is_unit(g: PreGenerator) -> bool:
    sp = g.space
    return (sp.arity == 2 and sp.maslov == 0 and g.decos[0][1] == g.decos[1][1]
            and sp.filtration in (UNFILTERED, W_FILTERED, 0))


def _is_syntactic_zero(g: PreGenerator) -> bool:
    sp = g.space
    if sp.arity == 2 and sp.maslov == 0:
        return not _is_unit(g)
    return False


def reduce_factor(g: PreGenerator, oracle=None):
    """Return 0, 1 or the fully pointed pre-generator itself."""
    if _is_unit(g):
        return 1
    if _is_syntactic_zero(g):
        return 0
    if oracle is not None and not oracle.nonempty_full(g.space, tuple(d[1] for d in g.decos)):
        return 0
    return g


def _mono_key(m):
    factors, u = m
    return (len(factors), tuple(f.key for f in factors), u)


@dataclass(frozen=True)
class Coeff:
    """GF(2) polynomial in fully pointed pre-generators (and optionally U).

    A monomial is ``(sorted tuple of pre-generators, power of U)``.
    """

    monomials: frozenset = frozenset()

    @staticmethod
    def zero() -> "Coeff":
        return _ZERO

    @staticmethod
    def one() -> "Coeff":
        return _ONE

    @staticmethod
    def u_power(k: int) -> "Coeff":
        return Coeff(frozenset({((), k)}))

    @staticmethod
    def of(g: PreGenerator, oracle=None) -> "Coeff":
        r = reduce_factor(g, oracle)
        if r == 0:
            return _ZERO
        if r == 1:
            return _ONE
        return Coeff(frozenset({((g,), 0)}))

    @staticmethod
    def product_of(factors: Iterable[PreGenerator], oracle=None) -> "Coeff":
        out = _ONE
        for g in factors:
            out = out * Coeff.of(g, oracle)
            if out.is_zero:
                break
        return out

    @property
    def is_zero(self) -> bool:
        return not self.monomials

    @property
    def is_one(self) -> bool:
        return self.monomials == _ONE.monomials

    def __add__(self, other: "Coeff") -> "Coeff":
        return Coeff(self.monomials ^ other.monomials)

    def __mul__(self, other: "Coeff") -> "Coeff":
        if self.is_one:
            return other
        if other.is_one:
            return self
        acc: set = set()
        for fa, ua in self.monomials:
            for fb, ub in other.monomials:
                m = (tuple(sorted(fa + fb, key=lambda g: g.key)), ua + ub)
                acc ^= {m}
        return Coeff(frozenset(acc))

    def sorted_monomials(self) -> list:
        return sorted(self.monomials, key=_mono_key)

    def generators(self) -> set:
        return {g for fs, _ in self.monomials for g in fs}

    def max_u(self) -> int:
        return max((u for _, u in self.monomials), default=0)

    @cached_property
    def key(self):
        return tuple(_mono_key(m) for m in self.sorted_monomials())

    def __str__(self) -> str:
        from .grammar import format_coeff
        return format_coeff(self)


_ZERO = Coeff(frozenset())
_ONE = Coeff(frozenset({((), 0)}))


# ---------------------------------------------------------------------------
# words

@dataclass(frozen=True)
class Factor:
    gen: PreGenerator
    in_marks: frozenset = frozenset()
    out_marks: frozenset = frozenset()

    @cached_property
    def key(self):
        return (self.gen.key, tuple(sorted(self.in_marks)), tuple(sorted(self.out_marks)))

    def unmarked(self) -> "Factor":
        return Factor(self.gen)


def word_profiles(word) -> tuple[Counter, Counter]:
    inward: Counter = Counter()
    outward: Counter = Counter()
    for f in word:
        verts = f.gen.vertices
        for i, d in enumerate(f.gen.decos):
            if d[0] == FLOW_IN:
                inward[verts[i]] += 1
            elif d[0] == FLOW_OUT:
                outward[verts[i]] += 1
    return inward, outward


def _pkey(inward: Counter, outward: Counter) -> tuple:
    return (profile_key(inward), profile_key(outward))


def _word_key(word) -> tuple:
    return tuple(f.key for f in word)


class _Mismatch(Exception):
    pass


def _glue(w1: tuple, w2: tuple):
    """Join two words; returns (absorbed fully pointed factors, new word)."""
    if not w1 or not w2:
        return [], w1 + w2
    left, right = w1[-1], w2[0]
    outs = left.gen.flow_out
    if not outs:
        return [], w1 + w2
    lverts = left.gen.vertices
    rverts = right.gen.vertices
    rdecos = list(right.gen.decos)
    consumed = set(right.in_marks)
    for i in outs:
        want = reverse(lverts[i])
        hits = [k for k, d in enumerate(rdecos) if d[0] == FLOW_IN and rverts[k] == want]
        if not hits:
            raise _Mismatch
        if len(hits) > 1:
            raise AmbiguousSlot(f"flow-out at {lverts[i]} matches {len(hits)} flow-in slots of {right.gen}")
        rdecos[hits[0]] = (POINTED, left.gen.decos[i][1])
        consumed.add(hits[0])
    new_left = Factor(k_up(left.gen), left.in_marks, left.out_marks | frozenset(outs))
    new_right = Factor(right.gen.with_decos(rdecos), frozenset(consumed), right.out_marks)
    absorbed, middle = [], []
    for f in (new_left, new_right):
        (absorbed if f.gen.is_fully_pointed else middle).append(f.gen if f.gen.is_fully_pointed else f)
    return absorbed, w1[:-1] + tuple(middle) + w2[1:]


# ---------------------------------------------------------------------------
# elements

@dataclass(frozen=True, eq=False)
class Element:
    """Ω̂, or terms with a shared profile.

    ``profile`` is None only for the formal zero, which matches every profile.
    A sum that cancels keeps the profile of its summands so that the sum stays
    associative.
    """

    omega: bool = False
    terms: tuple = ()  # sorted tuple of (word, Coeff)
    profile: Optional[tuple] = None

    @property
    def is_zero(self) -> bool:
        return not self.omega and not self.terms

    def term_map(self) -> dict:
        return {w: c for w, c in self.terms}

    def __eq__(self, other) -> bool:
        if not isinstance(other, Element):
            return NotImplemented
        if self.omega or other.omega:
            return self.omega == other.omega
        return self._tkey == other._tkey

    def __hash__(self):
        return hash((self.omega, self._tkey))

    @cached_property
    def _tkey(self):
        return tuple((_word_key(w), c.key) for w, c in self.terms)

    def same(self, other: "Element") -> bool:
        """Equality that also compares the profile of zero sums."""
        return self == other and self.profile == other.profile

    def __str__(self) -> str:
        from .grammar import format_element
        return format_element(self)

    __repr__ = __str__

    def __add__(self, other):
        return boxplus(self, other)


OMEGA = Element(omega=True)
ZERO = Element()


def zero() -> Element:
    return ZERO


def _sort_terms(d: dict) -> tuple:
    return tuple(sorted(d.items(), key=lambda kv: (len(kv[0]), _word_key(kv[0]), kv[1].key)))


def _make(d: dict, profile) -> Element:
    d = {w: c for w, c in d.items() if not c.is_zero}
    return Element(False, _sort_terms(d), profile)


def term(word: Iterable, coeff: Coeff = None, oracle=None) -> Element:
    """Single term; factors may be pre-generators or ``Factor`` objects."""
    coeff = Coeff.one() if coeff is None else coeff
    facs = []
    for f in word:
        if isinstance(f, PreGenerator):
            f = Factor(f)
        if f.gen.is_fully_pointed:
            coeff = coeff * Coeff.of(f.gen, oracle)
        else:
            facs.append(f)
    return normalize(_make({tuple(facs): coeff}, _pkey(*word_profiles(facs))), oracle)


def generator(g: PreGenerator, oracle=None) -> Element:
    return term([g], None, oracle)


def constant(c: Coeff) -> Element:
    return _make({(): c}, _pkey(Counter(), Counter()))


def boxplus(x: Element, y: Element) -> Element:
    if x.omega or y.omega:
        return OMEGA
    if x.profile is not None and y.profile is not None and x.profile != y.profile:
        return OMEGA
    prof = x.profile if x.profile is not None else y.profile
    d = x.term_map()
    for w, c in y.terms:
        d[w] = d[w] + c if w in d else c
    return _make(d, prof)


def boxsum(items: Iterable[Element]) -> Element:
    return reduce(boxplus, items, ZERO)


_MISMATCH = object()


def _product_profile(px, py):
    """Profile of a product computed from the factor profiles alone."""
    if px is None or py is None:
        return None
    out = _product_profile_cached(px, py)
    if out is _MISMATCH:
        raise _Mismatch
    return out


@lru_cache(maxsize=65536)
def _product_profile_cached(px, py):
    if px == ((), ()):
        return py
    if py == ((), ()):
        return px
    in_x, out_x = Counter(dict(px[0])), Counter(dict(px[1]))
    in_y, out_y = Counter(dict(py[0])), Counter(dict(py[1]))
    if not out_x:
        return _pkey(in_x + in_y, out_x + out_y)
    need = Counter({reverse(v): c for v, c in out_x.items()})
    if any(in_y[v] < c for v, c in need.items()):
        return _MISMATCH
    return _pkey(in_x + (in_y - need), out_y)


def boxtimes(x: Element, y: Element, oracle=None) -> Element:
    if x.omega or y.omega:
        return OMEGA
    if x.profile is None or y.profile is None:
        return ZERO
    try:
        prof = _product_profile(x.profile, y.profile)
    except _Mismatch:
        return OMEGA
    d: dict = {}
    for w1, c1 in x.terms:
        for w2, c2 in y.terms:
            try:
                absorbed, w = _glue(w1, w2)
            except _Mismatch:
                return OMEGA
            c = c1 * c2 * Coeff.product_of(absorbed, oracle)
            if c.is_zero:
                continue
            d[w] = d[w] + c if w in d else c
    return normalize(_make(d, prof), oracle)


def boxproduct(items: Iterable[Element], oracle=None) -> Element:
    items = list(items)
    return reduce(lambda a, b: boxtimes(a, b, oracle), items[1:], items[0])


def scalar(f: Coeff, x: Element, oracle=None) -> Element:
    if x.omega:
        return OMEGA
    return normalize(_make({w: f * c for w, c in x.terms}, x.profile), oracle)


def factor_nonempty(f: Factor, oracle) -> bool:
    return oracle.nonempty(f.gen.space, f.gen.fixed_points())


def normalize(x: Element, oracle=None) -> Element:
    """Drop terms with an empty factor and reduce coefficients; idempotent."""
    if x.omega or oracle is None:
        return x
    d: dict = {}
    for w, c in x.terms:
        if not all(factor_nonempty(f, oracle) for f in w):
            continue
        c2 = _ZERO
        for fs, u in c.monomials:
            c2 = c2 + Coeff.product_of(fs, oracle) * Coeff.u_power(u)
        if not c2.is_zero:
            d[w] = d[w] + c2 if w in d else c2
    return _make(d, x.profile)


def profiles_of(x: Element):
    """Inward and outward multiplicity profiles as Counters (None for the formal zero)."""
    if x.omega or x.profile is None:
        return None
    return Counter(dict(x.profile[0])), Counter(dict(x.profile[1]))


def unmarked(x: Element) -> Element:
    """Forget product bookkeeping so differently built equal terms compare equal."""
    if x.omega:
        return x
    d: dict = {}
    for w, c in x.terms:
        w2 = tuple(f.unmarked() for f in w)
        d[w2] = d[w2] + c if w2 in d else c
    return _make(d, x.profile)


def map_coefficients(x: Element, fn) -> Element:
    if x.omega:
        return x
    d: dict = {}
    for w, c in x.terms:
        c2 = fn(c)
        d[w] = d[w] + c2 if w in d else c2
    return _make(d, x.profile)
