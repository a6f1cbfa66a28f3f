"""Randomised checks of the algebraic laws against one oracle.

Every check returns a list of failure descriptions; an empty list means the
law held on every sampled instance.
"""

from __future__ import annotations

import random
from collections import Counter

from .core import FLOW_IN, FLOW_OUT, POINTED, canonical_pregenerator, polygon_symbol
from .differential import diff
from .errors import SymbolError
from .evaluation import ev, mor_comp, mor_sum
from .semialgebra import (
    OMEGA,
    ZERO,
    Coeff,
    _Mismatch,
    _product_profile,
    boxplus,
    boxtimes,
    generator,
    profiles_of,
    scalar,
    word_profiles,
)


def generator_pool(oracle, rng: random.Random, size: int = 16, dims=(0, 1)) -> list:
    """Random nonzero generators: one flow-out and at least one flow-in."""
    spaces = [polygon_symbol(pair, m) for pair in oracle.label_pairs() for m in (0, 1, 2)]
    spaces += [s for s in oracle.default_scope() if s.arity >= 3 and s.filtration == "none"]
    spaces += [polygon_symbol(s.word, 0) for s in spaces if s.arity >= 3]
    spaces = sorted({s for s in spaces if s.dimension in dims and len(set(s.word)) == s.arity},
                    key=lambda s: s.sort_key())
    pool, seen = [], set()
    for _ in range(size * 4):
        if len(pool) >= size or not spaces:
            break
        sp = rng.choice(spaces)
        verts = sp.vertices
        out = rng.randrange(sp.arity)
        decos = []
        for i, v in enumerate(verts):
            pts = oracle.points_on(v)
            if i == out:
                decos.append((FLOW_OUT, rng.choice(pts)))
            elif rng.random() < 0.25:
                decos.append((POINTED, rng.choice(pts)))
            else:
                decos.append((FLOW_IN, None))
        if all(d[0] != FLOW_IN for d in decos):
            continue
        g, _ = canonical_pregenerator(sp.word, sp.maslov, decos, sp.filtration)
        if g in seen:
            continue
        seen.add(g)
        x = generator(g, oracle)
        if not x.is_zero:
            pool.append(x)
    return pool


def _sample(pool, rng, k=2):
    x = rng.choice(pool)
    for _ in range(rng.randrange(k)):
        x = boxplus(x, rng.choice(pool))
    return x


def _tick(ran, key):
    if ran is not None:
        ran[key] += 1


def _fmt(*xs) -> str:
    return " | ".join(str(x) for x in xs)


def check_sum_laws(pool, rng, trials=10, ran: Counter | None = None) -> list[str]:
    bad = []
    for _ in range(trials):
        x, y, z = (_sample(pool, rng) for _ in range(3))
        _tick(ran, "sum")
        if boxplus(x, y) != boxplus(y, x):
            bad.append("sum-commutative: " + _fmt(x, y))
        if boxplus(boxplus(x, y), z) != boxplus(x, boxplus(y, z)):
            bad.append("sum-associative: " + _fmt(x, y, z))
        if boxplus(x, ZERO) != x or boxplus(x, OMEGA) != OMEGA:
            bad.append("sum-units: " + _fmt(x))
    return bad


def _same_profile(pool, y, rng):
    mates = [z for z in pool if z.profile == y.profile]
    return rng.choice(mates)


def _profiles_match(a, b) -> bool:
    try:
        _product_profile(a.profile, b.profile)
    except _Mismatch:
        return False
    return True


def _compatible(pool, y, oracle, rng, left=True):
    """An element whose product with ``y`` (on the given side) has matching profiles."""
    opts = [x for x in pool if (_profiles_match(x, y) if left else _profiles_match(y, x))]
    return rng.choice(opts) if opts else rng.choice(pool)


def check_product_laws(pool, oracle, rng, trials=10, ran: Counter | None = None) -> list[str]:
    bad = []
    for _ in range(trials):
        y = rng.choice(pool)
        x = _compatible(pool, y, oracle, rng, left=True)
        z = _compatible(pool, y, oracle, rng, left=False)
        try:
            left = boxtimes(boxtimes(x, y, oracle), z, oracle)
            right = boxtimes(x, boxtimes(y, z, oracle), oracle)
        except SymbolError:
            continue
        _tick(ran, "product-associative")
        if not left.omega and not left.is_zero:
            _tick(ran, "product-associative-nontrivial")
        if left != right:
            bad.append("product-associative: " + _fmt(x, y, z))
        z2 = _same_profile(pool, y, rng)
        yz = boxplus(y, z2)
        try:
            pairs = ((boxtimes(x, yz, oracle), boxplus(boxtimes(x, y, oracle), boxtimes(x, z2, oracle)), "left"),
                     (boxtimes(yz, z, oracle), boxplus(boxtimes(y, z, oracle), boxtimes(z2, z, oracle)), "right"))
        except SymbolError:
            pairs = ()
        for lhs, rhs, side in pairs:
            if lhs.omega and rhs.omega:
                continue
            _tick(ran, "distributive")
            if lhs != rhs:
                bad.append(f"{side}-distributive: " + _fmt(x, y, z2, z))
        if (not x.omega and boxtimes(x, ZERO, oracle) != ZERO) or boxtimes(OMEGA, x, oracle) != OMEGA:
            bad.append("product-units: " + _fmt(x))
    return bad


def random_coefficient(pool, oracle, rng) -> Coeff:
    c = Coeff.u_power(rng.randrange(2))
    if rng.random() < 0.5:
        return c + Coeff.one()
    return c


def check_scalar_laws(pool, oracle, rng, trials=6, ran: Counter | None = None) -> list[str]:
    bad = []
    for _ in range(trials):
        x, y = _sample(pool, rng), _sample(pool, rng)
        f = random_coefficient(pool, oracle, rng)
        try:
            xy = boxtimes(x, y, oracle)
        except SymbolError:
            continue
        a = scalar(f, xy, oracle)
        b = boxtimes(scalar(f, x, oracle), y, oracle)
        c = boxtimes(x, scalar(f, y, oracle), oracle)
        _tick(ran, "scalar")
        if not (a == b == c):
            bad.append("scalar: " + _fmt(f, x, y))
    return bad


def check_multiplicity(pool, oracle, rng, trials=10, ran: Counter | None = None) -> list[str]:
    """Every term of a product carries the profile predicted from the factors."""
    bad = []
    for _ in range(trials):
        x, y = rng.choice(pool), rng.choice(pool)
        try:
            xy = boxtimes(x, y, oracle)
        except SymbolError:
            continue
        if xy.omega or xy.profile is None:
            continue
        prof = profiles_of(xy)
        _tick(ran, "multiplicity")
        for w, _ in xy.terms:
            got = word_profiles(w)
            if (+got[0], +got[1]) != (+prof[0], +prof[1]):
                bad.append("multiplicity: " + _fmt(x, y))
                break
    return bad


def check_differential(pool, oracle, rng, trials=8, ran: Counter | None = None) -> list[str]:
    bad = []
    for x in pool:
        try:
            d = diff(x, oracle)
        except SymbolError:
            continue
        _tick(ran, "d-squared")
        if not diff(d, oracle).is_zero:
            bad.append("d-squared: " + _fmt(x))
        if any(f.gen.space.dimension for w, _ in x.terms for f in w):
            e = ev(d, oracle)
            _tick(ran, "ev-of-boundary")
            if not e.is_zero():
                bad.append("ev-of-boundary: " + _fmt(x))
    for _ in range(trials):
        x, y = rng.choice(pool), rng.choice(pool)
        try:
            xy = boxtimes(x, y, oracle)
            if xy.omega:
                continue
            lhs = diff(xy, oracle)
            dx, dy = diff(x, oracle), diff(y, oracle)
            rhs = boxplus(boxtimes(dx, y, oracle), boxtimes(x, dy, oracle))
        except SymbolError:
            continue
        if lhs.omega or rhs.omega:
            continue
        _tick(ran, "leibniz")
        if lhs != rhs:
            bad.append("leibniz: " + _fmt(x, y))
    return bad


def check_evaluation(pool, oracle, rng, trials=10, ran: Counter | None = None) -> list[str]:
    flat = [x for x in pool if all(f.gen.space.dimension == 0 for w, _ in x.terms for f in w)]
    bad = []
    if not flat:
        return bad
    for _ in range(trials):
        x, y = rng.choice(flat), rng.choice(flat)
        s = boxplus(x, y)
        if not s.omega:
            lhs, rhs = ev(s, oracle), mor_sum(ev(x, oracle), ev(y, oracle))
            if not lhs.omega and not rhs.omega:
                _tick(ran, "ev-sum")
            if not lhs.omega and not rhs.omega and lhs != rhs:
                bad.append("ev-sum: " + _fmt(x, y))
        try:
            p = boxtimes(x, y, oracle)
        except SymbolError:
            continue
        if p.omega:
            continue
        lhs = ev(p, oracle)
        rhs = mor_comp(ev(y, oracle), ev(x, oracle))
        if not lhs.omega and not rhs.omega:
            _tick(ran, "ev-product")
        if not lhs.omega and not rhs.omega and lhs != rhs:
            bad.append("ev-product: " + _fmt(x, y))
    return bad


LAWS = ("sum", "product", "scalar", "multiplicity", "differential", "evaluation")


def check_all(oracle, rng: random.Random, ran: Counter | None = None) -> Counter:
    """Run every law once; returns a Counter of failure messages."""
    pool = generator_pool(oracle, rng)
    fails: Counter = Counter()
    if not pool:
        return fails
    for msg in (check_sum_laws(pool, rng, ran=ran) + check_product_laws(pool, oracle, rng, ran=ran)
                + check_scalar_laws(pool, oracle, rng, ran=ran) + check_multiplicity(pool, oracle, rng, ran=ran)
                + check_differential(pool, oracle, rng, ran=ran) + check_evaluation(pool, oracle, rng, ran=ran)):
        fails[msg] += 1
    return fails
