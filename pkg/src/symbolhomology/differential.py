"""Boundary map on coefficients and on algebra elements.

A 1-dimensional factor breaks along every end reported by the oracle.  The
piece holding the factor's output corner (its flow-out, or the corner that
was a flow-out before the factor was glued) is placed second.  If the other
piece still has an input corner the end contributes the glued pair of pieces;
otherwise that piece is fully pointed and becomes a coefficient.
"""

from __future__ import annotations

import itertools

from .core import FLOW_IN, FLOW_OUT, POINTED, canonical_pregenerator
from .errors import DimensionMismatch, MalformedEnd, Unsupported
from .oracle import EndRecord, cut_word, oriented
from .semialgebra import (
    OMEGA,
    ZERO,
    Coeff,
    Element,
    Factor,
    _make,
    normalize,
)


def _anchor(f: Factor):
    outs = f.gen.flow_out
    if len(outs) == 1:
        return outs[0]
    if not outs and len(f.out_marks) == 1:
        return next(iter(f.out_marks))
    return None


def _completions(oracle, f: Factor):
    g = f.gen
    verts = g.vertices
    choices = [oracle.points_on(verts[i]) if d[0] == FLOW_IN else [d[1]] for i, d in enumerate(g.decos)]
    return itertools.product(*choices)


def _collect_ends(oracle, f: Factor, anchor):
    """Distinct ends over all completions of the free corners, oriented."""
    space = f.gen.space
    seen: dict = {}
    for pts in _completions(oracle, f):
        local = set()
        for e in oracle.ends(space, pts):
            cut = cut_word(space.word, e.pair)
            if e.left.dimension + e.right.dimension != space.dimension - 1:
                raise MalformedEnd(f"{e} of {space} is not dimension additive")
            if anchor is None:
                e = oriented(space, e)
            elif anchor in cut.left_origin:
                e = e.flipped()
            if e in local:
                raise MalformedEnd(f"duplicate end {e} for {space} at {[p.name for p in pts]}")
            local.add(e)
            seen.setdefault(e, None)
    return list(seen)


def _piece(f: Factor, labels, origin, maslov, tag, point, new_in: bool, new_out: bool) -> Factor:
    decos, ins, outs = [], set(), set()
    for pos, k in enumerate(origin):
        if k is None:
            decos.append((POINTED, point))
            if new_in:
                ins.add(pos)
            if new_out:
                outs.add(pos)
        else:
            decos.append(f.gen.decos[k])
            if k in f.in_marks:
                ins.add(pos)
            if k in f.out_marks:
                outs.add(pos)
    g, shift = canonical_pregenerator(labels, maslov, decos, tag)
    n = len(labels)
    return Factor(g, frozenset((i - shift) % n for i in ins), frozenset((i - shift) % n for i in outs))


def break_factor(f: Factor, oracle):
    """Boundary of one factor as a list of (coefficient, replacement word) or OMEGA."""
    space = f.gen.space
    if space.dimension == 0:
        return []
    if space.dimension != 1:
        raise DimensionMismatch(f"{space} has dimension {space.dimension}")
    anchor = _anchor(f)
    if anchor is None and not f.gen.is_fully_pointed:
        raise Unsupported(f"cannot orient the boundary of {f.gen}: no unique output corner")
    out = []
    for e in _collect_ends(oracle, f, anchor):
        cut = cut_word(space.word, e.pair)
        left_inputs = [k for k in cut.left_origin if k is not None and f.gen.decos[k][0] == FLOW_IN]
        left_marks = [k for k in cut.left_origin if k is not None and k in f.in_marks]
        right_marks = [k for k in cut.right_origin if k is not None and k in f.in_marks]
        nice = bool(left_inputs) or bool(left_marks)
        if anchor is None:
            nice = False
        if nice and right_marks:
            return OMEGA
        p1 = _piece(f, cut.left_labels, cut.left_origin, e.left.maslov, e.left.filtration,
                    e.point, False, nice)
        p2 = _piece(f, cut.right_labels, cut.right_origin, e.right.maslov, e.right.filtration,
                    e.point, nice, False)
        coeff = Coeff.one()
        word = []
        for p in (p1, p2):
            if p.gen.is_fully_pointed:
                coeff = coeff * Coeff.of(p.gen, oracle)
            else:
                word.append(p)
        if not coeff.is_zero:
            out.append((coeff, tuple(word)))
    return out


def diff_coeff(c: Coeff, oracle) -> Coeff:
    total = Coeff.zero()
    for fs, u in c.monomials:
        upow = Coeff.u_power(u)
        for i, g in enumerate(fs):
            if g.space.dimension == 0:
                continue
            rest = Coeff.product_of(fs[:i] + fs[i + 1:], oracle) * upow
            for piece_coeff, word in break_factor(Factor(g), oracle):
                assert not word
                total = total + piece_coeff * rest
    return total


def diff(x: Element, oracle) -> Element:
    if x.omega:
        return ZERO
    acc: dict = {}

    def add(w, c):
        if c.is_zero:
            return
        acc[w] = acc[w] + c if w in acc else c

    for w, c in x.terms:
        add(w, diff_coeff(c, oracle))
        for i, f in enumerate(w):
            pieces = break_factor(f, oracle)
            if pieces is OMEGA:
                return OMEGA
            for pc, repl in pieces:
                add(w[:i] + repl + w[i + 1:], c * pc)
    return normalize(_make(acc, x.profile), oracle)


def diff_generator(g, oracle) -> Element:
    from .semialgebra import generator
    return diff(generator(g, oracle), oracle)
