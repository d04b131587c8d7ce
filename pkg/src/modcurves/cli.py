"""Command-line entry point.

Exit codes: 0 on success, 2 on a parse or validation error, 1 when an
internal consistency check fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .classes import ModuliSignature, SignatureError
from .graphs import GraphError, automorphisms, edge_orientation_trivial, enumerate_graphs, graph_to_json
from .keel import keel_basis, verify_basis_independence
from .parsing import ParseError, format_expr, format_rational, parse_expr
from .presentation import dim_h2_bar, presentation
from .pullbacks import pullback_pi, pullback_theta, pullback_xi
from .spectral import open_cohomology, vanishing_bounds

EXIT_OK, EXIT_INTERNAL, EXIT_INPUT = 0, 1, 2


class InvariantViolation(RuntimeError):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=True)


def _signature(args) -> ModuliSignature:
    if args.labels is None:
        return ModuliSignature.standard(args.g, args.n)
    labels = tuple(p.strip() for p in args.labels.split(",") if p.strip())
    if len(labels) != args.n:
        raise SignatureError(f"--labels gives {len(labels)} labels but --n is {args.n}")
    return ModuliSignature(args.g, labels)


def _labels_arg(text: str) -> list[str]:
    return [p.strip() for p in text.split(",") if p.strip()]


def cmd_graphs(args, out) -> int:
    sig = _signature(args)
    graphs = enumerate_graphs(sig, args.edges)
    if args.json:
        rows = []
        for G in graphs:
            rows.append({"graph": graph_to_json(G), "automorphisms": len(automorphisms(G)),
                         "orientation_trivial": edge_orientation_trivial(G)})
        print(_dump(rows), file=out)
        return EXIT_OK
    for i, G in enumerate(graphs):
        print(f"{i}\taut={len(automorphisms(G))}\t{G}", file=out)
    return EXIT_OK


def cmd_dim(args, out) -> int:
    print(dim_h2_bar(_signature(args)), file=out)
    return EXIT_OK


def cmd_reduce(args, out) -> int:
    sig = _signature(args)
    pres = presentation(sig)
    coords = pres.reduce(parse_expr(args.expr, sig))
    names = [b.text(sig) for b in pres.basis]
    if args.json:
        print(_dump({"basis": names, "coordinates": [format_rational(c) for c in coords]}), file=out)
        return EXIT_OK
    for name, c in zip(names, coords):
        print(f"{name}\t{format_rational(c)}", file=out)
    return EXIT_OK


def cmd_pullback(args, out) -> int:
    sig = _signature(args)
    e = parse_expr(args.expr, sig)
    if args.map == "pi":
        image = pullback_pi(e, args.x)
    elif args.map == "xi":
        image = pullback_xi(e, args.q, args.r)
    else:
        image = pullback_theta(e, args.a, _labels_arg(args.A or ""), args.q)
    target = image.signature
    if args.json:
        print(_dump({"genus": target.genus, "labels": list(target.labels),
                     "expr": format_expr(image)}), file=out)
        return EXIT_OK
    print(f"{target}\t{format_expr(image)}", file=out)
    return EXIT_OK


def cmd_keel(args, out) -> int:
    sig = ModuliSignature.standard(0, args.n)
    triples = [tuple(_labels_arg(t)) for t in args.triple] if args.triple else [tuple(sig.labels[:3])]
    failed = False
    for t in triples:
        if len(t) != 3:
            raise SignatureError(f"a triple needs three labels, got {t}")
        basis = keel_basis(sig, *t)
        ok = verify_basis_independence(sig, basis)
        failed |= not ok
        print(f"{','.join(t)}\tsize={len(basis)}\t{'ok' if ok else 'FAIL'}", file=out)
    if failed:
        raise InvariantViolation("Keel basis candidate is not a basis")
    return EXIT_OK


def cmd_open(args, out) -> int:
    res = open_cohomology(_signature(args))
    if args.json:
        print(_dump(res), file=out)
    else:
        print(" ".join(f"{k}={v}" for k, v in res.items()), file=out)
    return EXIT_OK


def cmd_vanishing(args, out) -> int:
    c, d = vanishing_bounds(args.g, args.n)
    if args.json:
        print(_dump({"c": c, "d": d}), file=out)
    else:
        print(f"c={c} d={d}", file=out)
    return EXIT_OK


def _common(p: argparse.ArgumentParser, json_flag: bool = True, labels: bool = True) -> None:
    p.add_argument("--g", type=int, required=True, help="genus")
    p.add_argument("--n", type=int, required=True, help="number of marked points")
    if labels:
        p.add_argument("--labels", help="comma-separated point labels (default 1..N)")
    if json_flag:
        p.add_argument("--json", action="store_true", help="emit JSON")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="modcurves",
                                     description="Divisor classes, boundary strata and low-degree "
                                                 "cohomology of moduli spaces of pointed curves.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("graphs", help="list stable graphs with a given number of edges")
    _common(p)
    p.add_argument("--edges", type=int, required=True)
    p.set_defaults(func=cmd_graphs)

    p = sub.add_parser("dim-h2bar", help="dimension of H^2 of the compactified space")
    _common(p, json_flag=False)
    p.set_defaults(func=cmd_dim)

    p = sub.add_parser("reduce", help="coordinates of a divisor expression in the H^2 basis")
    _common(p)
    p.add_argument("--expr", required=True)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("pullback", help="pull back a divisor expression")
    maps = p.add_subparsers(dest="map", required=True)
    m = maps.add_parser("pi", help="forget a new point x")
    _common(m)
    m.add_argument("--expr", required=True)
    m.add_argument("--x", required=True)
    m.set_defaults(func=cmd_pullback)
    m = maps.add_parser("xi", help="glue new points q and r (genus drops by one)")
    _common(m)
    m.add_argument("--expr", required=True)
    m.add_argument("--q", required=True)
    m.add_argument("--r", required=True)
    m.set_defaults(func=cmd_pullback)
    m = maps.add_parser("theta", help="attach a fixed tail carrying the complement of A at q")
    _common(m)
    m.add_argument("--expr", required=True)
    m.add_argument("--a", type=int, required=True)
    m.add_argument("--A", default="", help="comma-separated labels kept on the moving side")
    m.add_argument("--q", required=True)
    m.set_defaults(func=cmd_pullback)

    p = sub.add_parser("keel-verify", help="certify the genus-0 boundary basis")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--triple", action="append", help="labels i,j,k (repeatable; default 1,2,3)")
    p.set_defaults(func=cmd_keel)

    p = sub.add_parser("open", help="h1, h2 of the open moduli space and the vanishing bounds")
    _common(p)
    p.set_defaults(func=cmd_open)

    p = sub.add_parser("vanishing", help="vanishing bounds c(g,n), d(g,n)")
    _common(p, labels=False)
    p.set_defaults(func=cmd_vanishing)
    return parser


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_INPUT
    try:
        return args.func(args, out)
    except ParseError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INPUT
    except (SignatureError, GraphError, ValueError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INPUT
    except (InvariantViolation, ArithmeticError, AssertionError) as exc:
        print(f"internal error: {exc}", file=err)
        return EXIT_INTERNAL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
