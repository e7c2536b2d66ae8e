"""Command-line interface.

Exit codes: 0 success, 1 property failure, 2 usage or parse error,
3 resource bound exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys

from .core import (GroupSpecError, parse_element, parse_elements, parse_group, ulm_invariant)
from .errors import PropertyViolation, SearchInconclusive, SplitPreconditionError
from .homset import HomomorphismError, aut_order, end_order, make_hom
from .sublattice import DEFAULT_ENUMERATION_BOUND, EnumerationBoundError, span

EXIT_OK, EXIT_PROPERTY, EXIT_USAGE, EXIT_BOUND = 0, 1, 2, 3

COLORS = {"fully_invariant": "palegreen", "characteristic": "gold", "neither": "white"}


class UsageError(Exception):
    pass


def _emit(obj, as_json, text_lines):
    if as_json:
        print(json.dumps(obj, indent=2, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def _parse_matrix(text):
    try:
        m = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GroupSpecError(f"invalid matrix JSON ({exc.msg})", text, exc.pos) from None
    if not isinstance(m, list) or not all(isinstance(r, list) for r in m):
        raise GroupSpecError("matrix must be a JSON list of rows", text, 0)
    return m


def _group_arg(args):
    G = parse_group(args.group)
    if args.limit_order is not None and G.order > args.limit_order:
        raise EnumerationBoundError(f"|G| = {G.order} exceeds --limit-order {args.limit_order}")
    return G


# -- commands --------------------------------------------------------------------


def cmd_describe(args):
    G = _group_arg(args)
    ulm = {n: ulm_invariant(G, n) for n in range(G.length) if ulm_invariant(G, n)}
    obj = {"group": G.to_json(), "order": G.order, "exponent": G.exponent,
           "ulm_invariants": {str(n): f for n, f in ulm.items()},
           "end_order": end_order(G), "aut_order": aut_order(G)}
    lines = [f"group      {G}", f"order      {G.order}", f"exponent   {G.exponent}",
             "ulm        " + (", ".join(f"f{n}={f}" for n, f in ulm.items()) or "none"),
             f"|End|      {end_order(G)}", f"|Aut|      {aut_order(G)}"]
    _emit(obj, args.json, lines)
    return EXIT_OK


def _dot(report):
    from .invariance import covering_edges

    subs = report.subgroups
    lines = ["digraph subgroups {", "  rankdir=BT;", "  node [style=filled];"]
    for i, X in enumerate(subs):
        label = ";".join(repr(g) for g in X.generators) or "0"
        lines.append(f'  s{i} [label="{label}\\n|X|={X.order}", fillcolor={COLORS[report.kind(X)]}];')
    for i, j in covering_edges(subs):
        lines.append(f"  s{i} -> s{j};")
    lines.append("}")
    return "\n".join(lines)


def cmd_classify(args):
    from .invariance import classify

    G = _group_arg(args)
    report = classify(G, bound=args.limit_order or DEFAULT_ENUMERATION_BOUND)
    if args.dot:
        print(_dot(report))
        return EXIT_OK
    lines = [f"group {G}: {report.total} subgroups, {len(report.fully_invariant)} fully invariant, "
             f"{len(report.characteristic)} characteristic"]
    for X in report.gap:
        w = report.witnesses[X]
        lines.append(f"characteristic only: {X}; witness {list(map(list, w.map.matrix))} "
                     f"sends {w.element} to {w.image}")
    _emit(report.to_json(), args.json, lines)
    return EXIT_OK


def cmd_inertia(args):
    from .inertia import inertia_profile

    G = _group_arg(args)
    X = span(G, parse_elements(G, args.gens))
    prof = inertia_profile(X, mode=args.mode, strategy=args.strategy, seed=args.seed,
                           samples=args.samples)
    header = f"# seed {args.seed}" if args.strategy == "sampled" else "# exhaustive"
    lines = [header, f"subgroup {X}", f"mode {args.mode}, {len(prof.records)} maps",
             f"sup |hat| = {prof.sup}"]
    _emit(prof.to_json(), args.json, lines)
    return EXIT_OK


def cmd_decompose(args):
    from .inertia import four_auto_decompose, two_auto_decompose

    G = _group_arg(args)
    gamma = make_hom(G, G, _parse_matrix(args.endo))
    if args.four:
        dec = four_auto_decompose(gamma)
    else:
        dec = two_auto_decompose(gamma, budget=args.budget)
        if dec is None:
            _emit({"target": [list(r) for r in gamma.matrix], "parts": None, "proven_absent": True},
                  args.json, ["no decomposition into two automorphisms (search exhaustive)"])
            return EXIT_OK
    lines = [f"target {[list(r) for r in gamma.matrix]}"]
    lines += [f"part {i}: {[list(r) for r in c.hom.matrix]} inverse {[list(r) for r in c.inverse.matrix]}"
              for i, c in enumerate(dec.parts)]
    _emit(dec.to_json(), args.json, lines)
    return EXIT_OK


def cmd_noone(args):
    from .inertia import noone_family

    fam = noone_family(args.p, args.N)
    lines = [f"G = {fam.G}", "k  |hat phi_k(X)|"] + [f"{k}  {o}" for k, o in enumerate(fam.orders)]
    _emit(fam.to_json(), args.json, lines)
    return EXIT_OK


def cmd_split_height(args):
    from .invariance import split_by_height

    G = _group_arg(args)
    x, z = parse_element(G, args.x), parse_element(G, args.z)
    res = split_by_height(x, z)
    lines = [f"y0 = {res.y0}", f"y0' = {res.y0p}", "j  y_j  y'_j  case"]
    lines += [f"{s.j}  {s.y}  {s.y_prime}  {s.case}" for s in res.chain]
    _emit(res.to_json(), args.json, lines)
    return EXIT_OK


def cmd_square_hull(args):
    from .inertia import square_hull

    G = _group_arg(args)
    X = span(G, parse_elements(G, args.gens))
    res = square_hull(X)
    lines = [f"Y = {res.Y}", f"|(Y+Y)/X| = {res.index} <= {res.bound} "
             f"(R1={res.R1}, R2={res.R2}, S1={res.S1}, S2={res.S2})"]
    _emit(res.to_json(), args.json, lines)
    return EXIT_OK


def cmd_suite(args):
    from .acceptance import DEFAULT_CORPUS, run_criteria, suite_report

    specs = DEFAULT_CORPUS if args.corpus is None else [s for s in args.corpus.split(";") if s.strip()]
    corpus = [parse_group(s) for s in specs]
    if not corpus:
        print("warning: empty corpus; corpus-wide criteria are vacuous", file=sys.stderr)
    results = run_criteria(corpus, seed=args.seed, corrupt_oracle=args.corrupt_oracle)
    report = suite_report(corpus, args.seed, results)
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        for r in results:
            print(r.line())
    failed = [r for r in results if not r.passed]
    if failed:
        print(f"first failure: criterion {failed[0].number} ({failed[0].name}): {failed[0].detail}",
              file=sys.stderr)
        return EXIT_PROPERTY
    return EXIT_OK


# -- parser --------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON")
    common.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    common.add_argument("--limit-order", type=int, default=None, help="refuse groups above this order")
    common.add_argument("--budget", type=int, default=10 ** 6, help="search budget (candidates)")

    ap = _Parser(prog="pgrouplab", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("describe", parents=[common], help="order, Ulm invariants, |End|, |Aut|")
    p.add_argument("group")
    p.set_defaults(fn=cmd_describe)

    p = sub.add_parser("classify", parents=[common], help="fully invariant vs characteristic")
    p.add_argument("group")
    p.add_argument("--dot", action="store_true", help="emit the subgroup lattice as DOT")
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("inertia", parents=[common], help="inertia profile of a subgroup")
    p.add_argument("--group", required=True)
    p.add_argument("--gens", default="", help='generators, e.g. "(2,1);(0,1)"')
    p.add_argument("--mode", choices=("endo", "auto"), default="endo")
    p.add_argument("--strategy", choices=("exhaustive", "sampled"), default="exhaustive")
    p.add_argument("--samples", type=int, default=100)
    p.set_defaults(fn=cmd_inertia)

    p = sub.add_parser("decompose", parents=[common], help="write an endomorphism as automorphism sums")
    p.add_argument("--group", required=True)
    p.add_argument("--endo", required=True, help='matrix, e.g. "[[1,0],[0,1]]"')
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--four", action="store_true")
    g.add_argument("--two", action="store_true")
    p.set_defaults(fn=cmd_decompose)

    p = sub.add_parser("noone", parents=[common], help="swap family k -> |hat phi_k(X)|")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.set_defaults(fn=cmd_noone)

    p = sub.add_parser("split-height", parents=[common], help="z = y0 + y0' with equal heights")
    p.add_argument("--group", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--z", required=True)
    p.set_defaults(fn=cmd_split_height)

    p = sub.add_parser("square-hull", parents=[common], help="hull of a subgroup of A + A")
    p.add_argument("--group", required=True)
    p.add_argument("--gens", default="")
    p.set_defaults(fn=cmd_square_hull)

    p = sub.add_parser("suite", parents=[common], help="run the acceptance criteria")
    p.add_argument("--corpus", default=None, help='";"-separated group specs (default corpus if omitted)')
    p.add_argument("--corrupt-oracle", action="store_true", help="harness self-test: invert the oracle")
    p.set_defaults(fn=cmd_suite)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
        return args.fn(args)
    except UsageError as exc:
        print(f"pgrouplab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GroupSpecError, HomomorphismError, SplitPreconditionError, ValueError) as exc:
        print(f"pgrouplab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (EnumerationBoundError, SearchInconclusive) as exc:
        print(f"pgrouplab: bound exceeded: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except (PropertyViolation, AssertionError) as exc:
        print(f"pgrouplab: property failure: {exc}", file=sys.stderr)
        return EXIT_PROPERTY


if __name__ == "__main__":
    sys.exit(main())
