"""Command-line front end.

Every command prints line-oriented ``CHECK <name> PASS|FAIL <detail>`` reports
(plus ``RESULT``/``NOTE`` lines for values).  The exit status is 0 exactly when
no CHECK line failed.
"""

from __future__ import annotations

import argparse
import random
import sys
from collections import Counter
from pathlib import Path

from . import __version__
from .differential import diff
from .errors import SymbolError
from .evaluation import ev
from .examples import EXAMPLES, fixture_path
from .fuzz import random_consistent_oracle
from .grammar import format_element, parse_element
from .homology import DEFAULT_U_DEGREE, DEFAULT_WORD_LEN, closure, homology_gf2, homology_rank, recover_cf
from .laws import check_all
from .morphisms import filter_U, filter_w
from .oracle import check_oracle, load_oracle

SHIPPED = ("T_ml.json", "T_mm.json", "T_mm_w_in_B1.json", "triangle.json")
# laws that must run at least once during check-axioms
LAW_KEYS = ("sum", "product-associative", "distributive", "scalar", "multiplicity",
            "d-squared", "leibniz", "ev-of-boundary", "ev-sum", "ev-product")


def _positive(text: str) -> int:
    n = int(text)
    if n <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return n


def _resolve(text: str) -> Path:
    """A path on disk, or the name of a shipped fixture."""
    p = Path(text)
    if p.is_file():
        return p
    try:
        q = Path(str(fixture_path(text)))
    except (FileNotFoundError, TypeError):
        q = None
    if q is not None and q.is_file():
        return q
    raise argparse.ArgumentTypeError(f"no such file or shipped fixture: {text}")


def _oracle(args):
    src = args.diagram or args.oracle
    if src is None:
        raise SystemExit("error: this command needs --oracle or --diagram")
    return load_oracle(src, multiplicity_bound=args.max_multiplicity)


# ---------------------------------------------------------------------------
# commands

def cmd_check_axioms(args) -> list[str]:
    rng = random.Random(args.seed)
    oracles = [load_oracle(fixture_path(n), args.max_multiplicity) for n in SHIPPED]
    oracles += [random_consistent_oracle(rng, f"random{i}") for i in range(args.count)]
    ran: Counter = Counter()
    fails: Counter = Counter()
    for o in oracles:
        fails.update(check_all(o, rng, ran))
    lines = []
    for key in LAW_KEYS:
        bad = sum(n for m, n in fails.items() if m.split(":", 1)[0].endswith(key))
        ok = ran[key] > 0 and bad == 0
        lines.append(f"CHECK law[{key}] {'PASS' if ok else 'FAIL'} instances={ran[key]} failures={bad}")
    known = {m for m in fails if any(m.split(":", 1)[0].endswith(k) for k in LAW_KEYS)}
    for m in sorted(set(fails) - known):
        lines.append(f"CHECK law[other] FAIL {m}")
    lines += [f"NOTE failure {m}" for m in sorted(known)]
    lines.append(f"NOTE oracles={len(oracles)} seed={args.seed}")
    return lines


def cmd_check_oracle(args) -> list[str]:
    paths = [args.file] if args.file else ([Path(args.diagram or args.oracle)] if (args.diagram or args.oracle)
                                           else [Path(str(fixture_path(n))) for n in SHIPPED])
    lines = []
    for p in paths:
        o = load_oracle(p, args.max_multiplicity)
        lines += [ln for ln in check_oracle(o).lines() if args.verbose or not ln.startswith("NOTE")]
    return lines


def cmd_homology(args) -> list[str]:
    o = _oracle(args)
    seeds = [parse_element(t, o) for t in args.element]
    c = closure(seeds, args.max_word_len, o, u_degree=args.max_u_degree,
                word_products=not args.no_products)
    lines = [f"CHECK closure-d-squared {'PASS' if c.squares_to_zero() else 'FAIL'} basis={c.size}",
             f"RESULT homology-rank {homology_rank(c)}"]
    lines += [f"RESULT representative {format_element(r)}" for r in homology_gf2(c)]
    return lines


def cmd_verify_example(args) -> list[str]:
    fn = EXAMPLES[args.name]
    o = _oracle(args) if (args.oracle or args.diagram) else None
    return fn(o)


def cmd_recover_cf(args) -> list[str]:
    o = _oracle(args)
    pairs = [tuple(args.pair)] if args.pair else [p for pair in o.label_pairs() for p in (pair, pair[::-1])]
    variants = [args.variant] if args.variant != "both" else ["homology", "cohomology"]
    lines = []
    for a, b in pairs:
        for v in variants:
            lines += recover_cf(a, b, v, o)
    return lines


def cmd_ev(args) -> list[str]:
    o = _oracle(args)
    x = parse_element(args.element, o)
    m = ev(x, o)
    return [f"RESULT ev {line}" for line in m.to_text().splitlines()]


def cmd_filter(args) -> list[str]:
    o = _oracle(args)
    x = parse_element(args.element, o)
    if args.kind == "w":
        fx, dfx = filter_w(x, o), filter_w(diff(x, o), o)
    else:
        fx, dfx = filter_U(x, o, args.max_u_degree), filter_U(diff(x, o), o, args.max_u_degree)
    ok = diff(fx, o) == dfx
    return [f"RESULT filter-{args.kind} {format_element(fx)}",
            f"CHECK filter-{args.kind}-commutes-with-boundary {'PASS' if ok else 'FAIL'}"]


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--oracle", type=_resolve, help="declarative oracle JSON (path or shipped fixture name)")
    common.add_argument("--diagram", type=_resolve, help="torus diagram JSON (path or shipped fixture name)")
    common.add_argument("--max-word-len", type=_positive, default=DEFAULT_WORD_LEN)
    common.add_argument("--max-u-degree", type=_positive, default=DEFAULT_U_DEGREE)
    common.add_argument("--max-multiplicity", type=_positive, default=4)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", type=Path, help="also write the report here")

    p = argparse.ArgumentParser(prog="symbolhomology", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check-axioms", parents=[common], help="fuzz the algebraic laws")
    s.add_argument("--count", type=int, default=1000, help="number of random consistent oracles")
    s.set_defaults(fn=cmd_check_axioms)

    s = sub.add_parser("check-oracle", parents=[common], help="consistency of ends (parity, splits)")
    s.add_argument("--file", type=_resolve)
    s.add_argument("--verbose", action="store_true")
    s.set_defaults(fn=cmd_check_oracle)

    s = sub.add_parser("homology", parents=[common], help="homology of a truncated closure")
    s.add_argument("--element", action="append", required=True)
    s.add_argument("--no-products", action="store_true", help="close the seeds alone, without products")
    s.set_defaults(fn=cmd_homology)

    s = sub.add_parser("verify-example", parents=[common], help="run a worked example")
    s.add_argument("name", choices=sorted(EXAMPLES))
    s.set_defaults(fn=cmd_verify_example)

    s = sub.add_parser("recover-cf", parents=[common], help="rebuild Floer differentials from symbols")
    s.add_argument("--pair", nargs=2, metavar=("A", "B"))
    s.add_argument("--variant", choices=("homology", "cohomology", "both"), default="both")
    s.set_defaults(fn=cmd_recover_cf)

    s = sub.add_parser("ev", parents=[common], help="evaluate an element to a chain-level map")
    s.add_argument("element")
    s.set_defaults(fn=cmd_ev)

    s = sub.add_parser("filter", parents=[common], help="apply the w or U filtration map")
    s.add_argument("element")
    s.add_argument("--kind", choices=("w", "U"), default="w")
    s.set_defaults(fn=cmd_filter)
    return p


def _status(line: str):
    parts = line.split(" ", 3)
    return parts[2] if len(parts) > 2 and parts[0] == "CHECK" else None


def run(argv=None, stream=None) -> int:
    args = build_parser().parse_args(argv)
    stream = stream or sys.stdout
    try:
        lines = args.fn(args)
    except SymbolError as exc:
        lines = [f"CHECK {args.command} FAIL {type(exc).__name__}: {exc}"]
    report = "\n".join(lines) + "\n"
    stream.write(report)
    if args.out:
        args.out.write_text(report)
    failed = any(_status(ln) == "FAIL" for ln in lines)
    return 1 if failed else 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
