"""Text form of elements.

    M[1;(a,b)](.v, ^x2)            flow-in at (a,b), flow-out x2 at (b,a)
    M[1;(a,b);w0](@x1, @x2)        fully pointed, w-filtered
    M[0;(a,b);nw=1](@x1<, ^x2)     n_w stratum 1; ``<`` marks a consumed
                                   flow-in, ``>`` a former flow-out
    {M[1;(a,b)](@x1, @x2) & U^2 + 1}•A   coefficient times A
    A * B   product,   A + B   sum,   0   zero,   Omega   failure value
"""

from __future__ import annotations

import re

from .core import (
    FLOW_IN,
    FLOW_OUT,
    POINTED,
    UNFILTERED,
    W_FILTERED,
    Point,
    canonical_pregenerator,
    vertices_of,
)
from .errors import ParseError
from .semialgebra import (
    OMEGA,
    ZERO,
    Coeff,
    Element,
    Factor,
    boxplus,
    boxtimes,
    constant,
    scalar,
    term,
)

BULLET = "•"


def _tag_text(tag) -> str:
    if tag == UNFILTERED:
        return ""
    if tag == W_FILTERED:
        return ";w0"
    return f";nw={tag}"


def format_factor(f) -> str:
    if not isinstance(f, Factor):
        f = Factor(f)
    g = f.gen
    parts = []
    for i, d in enumerate(g.decos):
        if d[0] == FLOW_IN:
            parts.append(".v")
        elif d[0] == FLOW_OUT:
            parts.append(f"^{d[1].name}")
        else:
            s = f"@{d[1].name}"
            if i in f.in_marks:
                s += "<"
            if i in f.out_marks:
                s += ">"
            parts.append(s)
    sp = g.space
    return f"M[{sp.maslov};({','.join(sp.word)}){_tag_text(sp.filtration)}]({', '.join(parts)})"


def format_coeff(c: Coeff) -> str:
    if c.is_zero:
        return "0"
    monos = []
    for fs, u in c.sorted_monomials():
        bits = [format_factor(g) for g in fs]
        if u:
            bits.append("U" if u == 1 else f"U^{u}")
        monos.append(" & ".join(bits) if bits else "1")
    return " + ".join(monos)


def format_term(word, c: Coeff) -> str:
    body = " * ".join(format_factor(f) for f in word) if word else "1"
    if c.is_one:
        return body
    return "{" + format_coeff(c) + "}" + BULLET + body


def format_element(x: Element) -> str:
    if x.omega:
        return "Omega"
    if not x.terms:
        return "0"
    return " + ".join(format_term(w, c) for w, c in x.terms)


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(Omega|M\[[^\]]*\]\([^)]*\)|U\^\d+|U|\d+|[{}()+*&]|" + BULLET + r"|\.)")
_HEAD = re.compile(r"M\[\s*(\d+)\s*;\s*\(([^)]*)\)\s*(?:;\s*(w0|nw\s*=\s*\d+))?\s*\]\((.*)\)$", re.S)


def _tokens(text: str) -> list[str]:
    out, pos = [], 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected text at {pos}: {text[pos:pos + 20]!r}")
        out.append(m.group(1))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


def parse_factor(text: str, oracle=None) -> Factor:
    m = _HEAD.match(text.strip())
    if not m:
        raise ParseError(f"bad pre-generator {text!r}")
    maslov = int(m.group(1))
    word = tuple(s.strip() for s in m.group(2).split(","))
    raw_tag = m.group(3)
    if raw_tag is None:
        tag = UNFILTERED
    elif raw_tag == "w0":
        tag = W_FILTERED
    else:
        tag = int(raw_tag.split("=")[1])
    verts = vertices_of(word)
    items = [s.strip() for s in m.group(4).split(",")]
    if len(items) != len(word):
        raise ParseError(f"{text!r}: {len(word)} vertices but {len(items)} decorations")
    decos, ins, outs = [], set(), set()
    for i, (v, it) in enumerate(zip(verts, items)):
        if it == ".v":
            decos.append((FLOW_IN, None))
            continue
        km = re.fullmatch(r"([\^@])([A-Za-z0-9_']+)(<?)(>?)", it)
        if not km:
            raise ParseError(f"bad decoration {it!r} in {text!r}")
        pt = _point(km.group(2), v, oracle)
        if km.group(1) == "^":
            if km.group(3) or km.group(4):
                raise ParseError(f"marks only apply to pointed vertices: {it!r}")
            decos.append((FLOW_OUT, pt))
        else:
            decos.append((POINTED, pt))
            if km.group(3):
                ins.add(i)
            if km.group(4):
                outs.add(i)
    try:
        g, shift = canonical_pregenerator(word, maslov, decos, tag)
    except ValueError as exc:
        raise ParseError(f"{text!r}: {exc}") from exc
    n = len(word)
    return Factor(g, frozenset((i - shift) % n for i in ins), frozenset((i - shift) % n for i in outs))


def _point(name: str, vertex, oracle) -> Point:
    if oracle is not None:
        for p in oracle.points_on(vertex):
            if p.name == name:
                return p
        raise ParseError(f"oracle has no point {name!r} on {vertex}")
    return Point(tuple(vertex), name)


class _Parser:
    def __init__(self, text: str, oracle):
        self.toks = _tokens(text)
        self.i = 0
        self.oracle = oracle

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, want=None):
        tok = self.peek()
        if tok is None or (want is not None and tok != want):
            raise ParseError(f"expected {want or 'token'}, found {tok!r}")
        self.i += 1
        return tok

    def sum(self):
        x = self.product()
        while self.peek() == "+":
            self.take()
            x = boxplus(x, self.product())
        return x

    def product(self):
        x = self.scaled()
        while self.peek() == "*":
            self.take()
            x = boxtimes(x, self.scaled(), self.oracle)
        return x

    def scaled(self):
        if self.peek() == "{":
            self.take()
            c = self.coeff()
            self.take("}")
            if self.peek() in (BULLET, "."):
                self.take()
            return scalar(c, self.atom(), self.oracle)
        return self.atom()

    def atom(self):
        tok = self.take()
        if tok == "Omega":
            return OMEGA
        if tok == "0":
            return ZERO
        if tok == "1":
            return constant(Coeff.one())
        if tok == "(":
            x = self.sum()
            self.take(")")
            return x
        if tok.startswith("M["):
            return term([parse_factor(tok, self.oracle)], None, self.oracle)
        raise ParseError(f"unexpected token {tok!r}")

    def coeff(self) -> Coeff:
        c = self.cmono()
        while self.peek() == "+":
            self.take()
            c = c + self.cmono()
        return c

    def cmono(self) -> Coeff:
        c = self.cfactor()
        while self.peek() == "&":
            self.take()
            c = c * self.cfactor()
        return c

    def cfactor(self) -> Coeff:
        tok = self.take()
        if tok in ("0", "1"):
            return Coeff.one() if tok == "1" else Coeff.zero()
        if tok == "U":
            return Coeff.u_power(1)
        if tok.startswith("U^"):
            return Coeff.u_power(int(tok[2:]))
        if tok.startswith("M["):
            f = parse_factor(tok, self.oracle)
            if not f.gen.is_fully_pointed:
                raise ParseError(f"coefficient factor {tok!r} is not fully pointed")
            return Coeff.of(f.gen, self.oracle)
        raise ParseError(f"unexpected token {tok!r} in coefficient")


def parse_element(text: str, oracle=None) -> Element:
    p = _Parser(text, oracle)
    x = p.sum()
    if p.peek() is not None:
        raise ParseError(f"trailing input starting at {p.peek()!r}")
    return x


def parse_coeff(text: str, oracle=None) -> Coeff:
    p = _Parser(text, oracle)
    c = p.coeff()
    if p.peek() is not None:
        raise ParseError(f"trailing input starting at {p.peek()!r}")
    return c
