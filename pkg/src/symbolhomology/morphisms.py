"""The w-filtering map, the U-expansion map, and property polynomials.

Both maps act factor by factor on words and on the fully pointed factors of
coefficients, keeping decorations and product marks untouched.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass

from .core import UNFILTERED, W_FILTERED, reverse
from .errors import ParseError, StratumBoundExceeded
from .semialgebra import (
    OMEGA,
    ZERO,
    Coeff,
    Element,
    Factor,
    _make,
    boxplus,
    boxtimes,
    normalize,
    profiles_of,
)

VARIABLE = "X"


def _retag(f: Factor, tag) -> Factor:
    g = f.gen
    return Factor(g.with_space(g.space.with_filtration(tag)), f.in_marks, f.out_marks)


def _expand_coeff(c: Coeff, choices, oracle) -> Coeff:
    total = Coeff.zero()
    for fs, u in c.monomials:
        acc = Coeff.u_power(u)
        for g in fs:
            part = Coeff.zero()
            for tag, k in choices(g.space.filtration):
                gg = g.with_space(g.space.with_filtration(tag))
                part = part + Coeff.of(gg, oracle) * Coeff.u_power(k)
            acc = acc * part
        total = total + acc
    return total


def _apply(x: Element, choices, oracle) -> Element:
    if x.omega:
        return OMEGA
    d: dict = {}
    for w, c in x.terms:
        c2 = _expand_coeff(c, choices, oracle)
        if c2.is_zero:
            continue
        options = [[(_retag(f, t), k) for t, k in choices(f.gen.space.filtration)] for f in w]
        for pick in itertools.product(*options):
            word = tuple(f for f, _ in pick)
            cc = c2 * Coeff.u_power(sum(k for _, k in pick))
            d[word] = d[word] + cc if word in d else cc
    return normalize(_make(d, x.profile), oracle)


def filter_w(x: Element, oracle=None) -> Element:
    """Keep only the part of each space missing the w basepoint."""

    def choices(tag):
        return [(W_FILTERED, 0)] if tag == UNFILTERED else [(tag, 0)]

    return _apply(x, choices, oracle)


def filter_U(x: Element, oracle, bound: int | None = None) -> Element:
    """Split each space by how often it covers w, weighting stratum i by U^i."""
    top = oracle.max_stratum()
    if bound is not None and top > bound:
        raise StratumBoundExceeded(f"oracle has strata up to {top}, bound is {bound}")

    def choices(tag):
        if tag == UNFILTERED:
            return [(i, i) for i in range(top + 1)]
        return [(tag, 0)]

    return _apply(x, choices, oracle)


def identity_for(x: Element, oracle) -> Element:
    """Sum of constant bigons that right-multiplies ``x`` into the same module."""
    from .homology import identity_element
    prof = profiles_of(x)
    if prof is None or len(prof[1]) != 1:
        return OMEGA
    (out_vertex,) = prof[1]
    return identity_element(reverse(out_vertex), oracle)


def decorate_o(x: Element, oracle) -> Element:
    if x.omega:
        return OMEGA
    return boxtimes(x, identity_for(x, oracle), oracle)


# ---------------------------------------------------------------------------
# property polynomials

@dataclass(frozen=True)
class PropertyPolynomial:
    """Sum of monomials; each monomial is a tuple of ``VARIABLE`` or coefficient elements."""

    monomials: tuple

    def __post_init__(self):
        if not any(VARIABLE in m for m in self.monomials):
            raise ValueError("a property polynomial needs degree at least 1")

    def map_coefficients(self, fn) -> "PropertyPolynomial":
        return PropertyPolynomial(tuple(tuple(i if i == VARIABLE else fn(i) for i in m)
                                        for m in self.monomials))

    def to_text(self) -> str:
        from .grammar import format_element
        return " + ".join(" * ".join(i if i == VARIABLE else f"({format_element(i)})" for i in m)
                          for m in self.monomials)


def _split_top(text: str, sep: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts]


def parse_property(text: str, oracle=None) -> PropertyPolynomial:
    from .grammar import parse_element
    monos = []
    for mono in _split_top(text, "+"):
        items = []
        for it in _split_top(mono, "*"):
            if it == VARIABLE:
                items.append(VARIABLE)
            elif re.fullmatch(r"\(.*\)", it, re.S):
                items.append(parse_element(it[1:-1], oracle))
            else:
                raise ParseError(f"property item must be X or parenthesised, got {it!r}")
        monos.append(tuple(items))
    return PropertyPolynomial(tuple(monos))


def eval_property(p: PropertyPolynomial, s: Element, oracle) -> Element:
    total = ZERO
    for m in p.monomials:
        acc = None
        for it in m:
            v = s if it == VARIABLE else it
            acc = v if acc is None else boxtimes(acc, v, oracle)
        total = boxplus(total, acc)
    return total


def transport_property(p: PropertyPolynomial, kind: str, oracle) -> PropertyPolynomial:
    if kind == "F":
        return p.map_coefficients(lambda e: filter_w(e, oracle))
    if kind == "F_U":
        return p.map_coefficients(lambda e: filter_U(e, oracle))
    if kind == "O":
        return p.map_coefficients(lambda e: decorate_o(e, oracle))
    raise ValueError(f"unknown transport {kind!r}")


def is_root(p: PropertyPolynomial, s: Element, oracle, witnesses=(), max_word_len: int = 4) -> bool:
    """Root test in homology: the value is zero or the boundary of a combination of witnesses."""
    from .errors import ClosureEscape
    from .homology import closure, is_boundary
    value = eval_property(p, s, oracle)
    if value.omega:
        return False
    if value.is_zero:
        return True
    c = closure(list(witnesses) + [value], max_word_len, oracle, word_products=False)
    try:
        return is_boundary(value, c)
    except ClosureEscape:
        return False
