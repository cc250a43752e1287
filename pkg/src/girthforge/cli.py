"""Command line entry point: ``girthforge <command> ...``.

Exit codes: 0 success, 1 a verification or invariant check failed,
2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import harness, labeled, lattice
from .forge import GeneratorSet, build_genset, enum_omega, margulis_genset, verify_genset
from .girth import (
    DEFAULT_BUDGET,
    MemoryBudgetExceeded,
    build_gl_spec,
    cayley_spec,
    component_size,
    even_girth_bfs,
    evaluate_witness,
    girth_bfs,
    girth_oracle,
    is_cyclically_reduced,
)

OK, FAILED, BAD_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _prime(text: str) -> int:
    try:
        p = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if not lattice.is_prime(p):
        raise argparse.ArgumentTypeError(f"{p} is not prime")
    return p


def _positive(text: str) -> int:
    try:
        value = int(float(text))
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number") from None
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _emit(doc) -> None:
    print(json.dumps(doc, indent=2))


def _relation_doc(spec, res, oracle_maxlen, even):
    doc = {
        "p": spec.p,
        "degree": spec.degree,
        "injective": spec.injective,
        "girth": res.girth,
        "witness": list(res.witness),
        "degenerate": res.degenerate,
    }
    if spec.labels:
        doc["witness_words"] = [spec.labels[i] for i in res.witness]
    ok = evaluate_witness(spec, res.witness).is_identity() and is_cyclically_reduced(spec, res.witness)
    doc["witness_valid"] = ok
    if oracle_maxlen is not None:
        ref = girth_oracle(spec, oracle_maxlen, even=even)
        doc["oracle_girth"] = None if ref is None else ref.girth
        if ref is None:
            ok = ok and res.girth > oracle_maxlen
        else:
            ok = ok and ref.girth == res.girth
    return doc, ok


def cmd_forge(args) -> int:
    W = build_genset(args.radius)
    p = args.prime if args.prime else lattice.next_prime(36 * args.radius**2)
    report = verify_genset(W, p, free_depth=args.free_depth)
    text = W.to_json()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    summary = {"radius": W.radius, "size": W.size, "max_norm": W.max_norm, "omega_size": W.omega_size,
               "verified_prime": p, "checks": report.checks}
    print(json.dumps(summary), file=sys.stderr)
    return OK if report.ok else FAILED


def _load_genset(path: str) -> GeneratorSet:
    try:
        return GeneratorSet.from_json(Path(path).read_text())
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise InputError(f"cannot read generator set {path}: {exc}") from None


def cmd_girth(args) -> int:
    W = _load_genset(args.genset)
    try:
        spec = build_gl_spec(W, args.prime) if args.gl else cayley_spec(W, args.prime)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    res = even_girth_bfs(spec) if args.even else girth_bfs(spec)
    doc, ok = _relation_doc(spec, res, args.oracle_maxlen, args.even)
    doc["mode"] = "gl" if args.gl else "sl"
    doc["even"] = args.even
    _emit(doc)
    return OK if ok else FAILED


def cmd_margulis(args) -> int:
    W = margulis_genset()
    p = args.prime
    spec = cayley_spec(W, p)
    res = girth_bfs(spec)
    doc, ok = _relation_doc(spec, res, args.oracle_maxlen, False)
    doc["lemma_bound"] = harness.lemma_bound(p, W.max_norm, W.eta)
    doc["bound_holds"] = harness.half_girth_bound_holds(res.girth, p, W.max_norm)
    try:
        n = component_size(spec, args.budget)
        doc["n_p"] = n
        doc["generates_sl2"] = n == p * (p * p - 1)
        if n > 4:
            doc["ratio_C"] = res.girth * math.log(3) / math.log(n)
    except MemoryBudgetExceeded as exc:
        doc["n_p"] = None
        doc["note"] = str(exc)
    doc["reference_C"] = harness.MARGULIS_C
    _emit(doc)
    return OK if ok and (res.degenerate or doc["bound_holds"]) else FAILED


def cmd_count(args) -> int:
    R = args.radius
    if args.what == "prim":
        count = lattice.prim_count(R, args.mode)
    elif args.what == "sl2":
        count = lattice.sl2_ball_count(R)
    else:
        count = len(enum_omega(R))
    doc = {"what": args.what, "R": R, "count": count, "density": count / R**2}
    if args.what == "prim":
        doc["mode"] = args.mode
    _emit(doc)
    return OK


def _parse_radii(text: str) -> list:
    out = []
    for tok in text.split(","):
        tok = tok.strip().lower()
        if tok in ("m", harness.MARGULIS):
            out.append(harness.MARGULIS)
        elif tok.isdigit() and int(tok) >= 1:
            out.append(int(tok))
        else:
            raise InputError(f"bad radius {tok!r}")
    return out


def _parse_primes(text: str, radii):
    text = text.strip()
    if text.startswith("auto:"):
        k = int(text[5:])
        return {R: harness.admissible_primes(R, k) for R in radii}
    if ":" in text:
        lo, hi = (int(x) for x in text.split(":"))
        return [q for q in range(lo, hi + 1) if lattice.is_prime(q)]
    primes = [int(x) for x in text.split(",")]
    bad = [q for q in primes if not lattice.is_prime(q)]
    if bad:
        raise InputError(f"not prime: {bad}")
    return primes


def cmd_survey(args) -> int:
    radii = _parse_radii(args.radii)
    try:
        primes = _parse_primes(args.primes, radii)
    except ValueError as exc:
        raise InputError(f"bad prime list {args.primes!r}: {exc}") from None
    cells = harness.survey(radii, primes, budget=args.budget, even=not args.no_even, jobs=args.jobs)
    text = harness.cells_to_csv(cells)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    computed = [c for c in cells if c.computed]
    failed = [c for c in computed if not c.passed or "moore_violation" in c.flags or "bad_witness" in c.flags]
    print(
        json.dumps({"cells": len(cells), "computed": len(computed), "failed": len(failed),
                    "margulis_reference_C": harness.MARGULIS_C}),
        file=sys.stderr,
    )
    return FAILED if failed else OK


def cmd_graph(args) -> int:
    try:
        G = labeled.parse_graph(Path(args.file).read_text())
        basis = labeled.pi1_basis(G)
    except (OSError, ValueError) as exc:
        raise InputError(str(exc)) from None
    _emit({
        "vertices": len(G.vertices),
        "edges": len(G.edges),
        "stallings": labeled.is_stallings(G),
        "cover": labeled.is_cover(G),
        "spanning_tree": labeled.spanning_tree(G),
        "pi1_basis": basis,
    })
    return OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="girthforge", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("forge", help="build and verify the generator set W_R")
    p.add_argument("--radius", type=_positive, required=True)
    p.add_argument("--out")
    p.add_argument("--prime", type=_prime, help="prime for the distinctness check (default: first prime > 36R^2)")
    p.add_argument("--free-depth", type=int, default=4)
    p.set_defaults(func=cmd_forge)

    p = sub.add_parser("girth", help="girth of Cay(SL2(F_p), W) from a genset file")
    p.add_argument("--genset", required=True)
    p.add_argument("--prime", type=_prime, required=True)
    p.add_argument("--even", action="store_true", help="shortest even relation instead")
    p.add_argument("--gl", action="store_true", help="use the bipartite graph on G(p) with generators wJ")
    p.add_argument("--oracle-maxlen", type=int)
    p.set_defaults(func=cmd_girth)

    p = sub.add_parser("margulis", help="girth and size for Margulis' four generators")
    p.add_argument("--prime", type=_prime, required=True)
    p.add_argument("--oracle-maxlen", type=int)
    p.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET)
    p.set_defaults(func=cmd_margulis)

    p = sub.add_parser("count", help="lattice and ball counts")
    p.add_argument("--what", choices=["prim", "sl2", "omega"], required=True)
    p.add_argument("--radius", type=_positive, required=True)
    p.add_argument("--mode", choices=["quadrant", "all"], default="quadrant")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("survey", help="girth survey over radii and primes, as CSV")
    p.add_argument("--radii", required=True, help="comma list; 'margulis' selects the four Margulis generators")
    p.add_argument("--primes", required=True, help="comma list, START:END, or auto:K (first K primes > 36R^2)")
    p.add_argument("--out")
    p.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET, help="bytes per closure walk")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--no-even", action="store_true", help="skip the even-girth column")
    p.set_defaults(func=cmd_survey)

    p = sub.add_parser("graph", help="inspect a labeled graph file (base line + 'src dst letter' lines)")
    p.add_argument("--file", required=True)
    p.set_defaults(func=cmd_graph)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
