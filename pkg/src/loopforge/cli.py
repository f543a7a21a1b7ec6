"""``loopforge`` command line.

Exit status: 0 success, 1 a checked property failed, 2 bad input.
Loop arguments are table files (JSON or text) or ``catalog:NAME``.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .catalog import catalog, catalog_names
from .graded import GradedError, graded_group, graded_report, report_ok
from .higman import higman_witness
from .loops import CayleyLoop, LoopError, check_axioms, load_loop
from .series import (DEFAULT_DEPTH, DEFAULT_MAX_EVALS, KINDS, compare_series,
                     filtration)
from .terms import (TermSyntaxError, count_alphas, deviation, enumerate_alphas,
                    eval_term, generators, parse_term, print_term, validate_alphas, Gen)

log = logging.getLogger("loopforge")

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _positive(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def _nonneg(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def _triple(text):
    try:
        p, q, r = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected p,q,r") from None
    if min(p, q, r) < 1:
        raise argparse.ArgumentTypeError("degrees must be positive")
    return (p, q, r)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", metavar="PATH", help="also write the result as JSON")
    common.add_argument("--max-evals", type=_positive, default=DEFAULT_MAX_EVALS,
                        help="evaluation budget per generator family (default %(default)s)")

    parser = argparse.ArgumentParser(prog="loopforge", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="axiom flags of a loop")
    p.add_argument("file")

    p = sub.add_parser("series", parents=[common], help="one filtration")
    p.add_argument("--kind", choices=KINDS, default="ca")
    p.add_argument("--depth", type=_positive, default=DEFAULT_DEPTH)
    p.add_argument("file")

    p = sub.add_parser("compare", parents=[common], help="gamma, ca and naive side by side")
    p.add_argument("--depth", type=_positive, default=DEFAULT_DEPTH)
    p.add_argument("file")

    p = sub.add_parser("graded", parents=[common], help="associated graded group")
    p.add_argument("--depth", type=_positive, default=DEFAULT_DEPTH)
    p.add_argument("--kind", choices=KINDS, default="ca")
    p.add_argument("--akivis", type=_triple, action="append", default=[], metavar="P,Q,R")
    p.add_argument("file")

    p = sub.add_parser("eval", parents=[common], help="evaluate a term in a loop")
    p.add_argument("--table", required=True)
    p.add_argument("--bind", default="", help="a=NAME,b=NAME,...")
    p.add_argument("term")

    p = sub.add_parser("deviation", parents=[common], help="deviation census")
    p.add_argument("--level", type=_nonneg, required=True)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--count", action="store_true")
    g.add_argument("--list", action="store_true")
    g.add_argument("--show", metavar="ALPHAS", help="print the term for e.g. 1,3")

    p = sub.add_parser("higman-witness", parents=[common], help="certify a deviation outside gamma_3")
    p.add_argument("-m", type=_positive, required=True)
    p.add_argument("-n", type=_nonneg, required=True)

    p = sub.add_parser("catalog", help="built-in loops")
    csub = p.add_subparsers(dest="action", required=True)
    csub.add_parser("list", parents=[common])
    e = csub.add_parser("emit", parents=[common])
    e.add_argument("name")
    e.add_argument("--format", choices=("json", "text"), default="json")
    return parser


def resolve_loop(source: str) -> CayleyLoop:
    if source.startswith("catalog:"):
        return catalog(source[len("catalog:"):])
    if not Path(source).exists() and source in catalog_names():
        return catalog(source)
    return load_loop(source)


def _write_json(path, doc):
    if path:
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
        try:
            Path(path).write_text(text)
        except OSError as exc:
            raise InputError(f"cannot write {path}: {exc.strerror}") from None


def _loop_label(L):
    return L.name or "loop"


def cmd_check(args, out):
    L = resolve_loop(args.file)
    flags = check_axioms(L)
    doc = {"loop": _loop_label(L), "identity_element": L.names[L.identity], **flags}
    print(f"{_loop_label(L)}: order {L.order}, identity {L.names[L.identity]}", file=out)
    for k in ("quasigroup", "identity", "associative", "commutative", "moufang"):
        print(f"  {k:12s} {'yes' if flags[k] else 'no'}", file=out)
    return doc, EXIT_OK


def cmd_series(args, out):
    L = resolve_loop(args.file)
    F = filtration(L, args.kind, args.depth, args.max_evals)
    doc = F.to_dict()
    print(f"{args.kind} series of {_loop_label(L)} (order {L.order}), depth {args.depth}", file=out)
    for t in doc["terms"]:
        mark = "  (lower bound)" if t["lower_bound"] else ""
        members = " {" + ", ".join(t["members"]) + "}" if "members" in t else ""
        print(f"  {t['index']}: order {t['order']}{members}{mark}", file=out)
    print("  orders: " + ", ".join(str(o) for o in F.orders), file=out)
    if F.is_lower_bound:
        log.warning("evaluation budget exceeded: sampled terms are lower bounds")
    return doc, EXIT_OK


def cmd_compare(args, out):
    L = resolve_loop(args.file)
    doc = compare_series(L, args.depth, args.max_evals)
    print(f"{_loop_label(L)} (order {L.order})", file=out)
    print("   i  gamma     ca  naive", file=out)
    for r in doc["terms"]:
        print(f"  {r['index']:2d} {r['gamma']:6d} {r['ca']:6d} {r['naive']:6d}", file=out)
    for k, v in doc["flags"].items():
        print(f"  {k}: {v}", file=out)
    if doc["flags"]["lower_bound"]:
        log.warning("evaluation budget exceeded: sampled terms are lower bounds")
    ok = doc["flags"]["containments_ok"] and doc["flags"]["gamma2_eq_ca2"]
    return doc, EXIT_OK if ok else EXIT_VIOLATION


def cmd_graded(args, out):
    L = resolve_loop(args.file)
    F = filtration(L, args.kind, args.depth, args.max_evals)
    G = graded_group(F)
    doc = graded_report(G, akivis=args.akivis)
    print(f"graded group of the {args.kind} filtration of {_loop_label(L)}", file=out)
    for c in doc["components"]:
        factors = " + ".join(f"Z{d}" for d in c["invariant_factors"]) or "0"
        print(f"  degree {c['degree']}: order {c['order']}  {factors}", file=out)
    for name, block in doc["checks"].items():
        tag = " (sampled)" if block.get("sampled") else ""
        print(f"  {name}: {block['checked']} checked, {len(block['violations'])} violations{tag}",
              file=out)
    return doc, EXIT_OK if report_ok(doc) else EXIT_VIOLATION


def cmd_eval(args, out):
    L = resolve_loop(args.table)
    t = parse_term(args.term)
    env = {}
    for item in filter(None, (s.strip() for s in args.bind.split(","))):
        name, sep, value = item.partition("=")
        if not sep:
            raise InputError(f"binding {item!r} is not of the form gen=element")
        env[name.strip()] = L.element(value.strip())
    missing = generators(t) - set(env)
    if missing:
        raise InputError("unbound generators: " + ", ".join(sorted(missing)))
    v = int(eval_term(t, env, L))
    doc = {"term": print_term(t), "value": L.names[v],
           "bindings": {k: L.names[x] for k, x in sorted(env.items())}}
    print(L.names[v], file=out)
    return doc, EXIT_OK


def cmd_deviation(args, out):
    n = args.level
    doc = {"level": n, "count": count_alphas(n)}
    if args.list:
        doc["alphas"] = [list(a) for a in enumerate_alphas(n)]
        for a in doc["alphas"]:
            print("(" + ",".join(map(str, a)) + ")", file=out)
    elif args.show is not None:
        try:
            alphas = validate_alphas(int(x) for x in args.show.split(",") if x.strip())
        except (TypeError, ValueError) as exc:
            raise InputError(str(exc)) from None
        if len(alphas) != n:
            raise InputError(f"--show needs {n} alpha values")
        t = deviation([Gen(f"a{k}") for k in range(1, n + 4)], alphas)
        doc["term"] = print_term(t)
        print(doc["term"], file=out)
    else:
        print(doc["count"], file=out)
    return doc, EXIT_OK


def cmd_witness(args, out):
    doc = higman_witness(args.m, args.n)
    p, q = doc["leading_symbol"]
    print(f"delta (y^{args.m}, y, ..., y)_(1 x {args.n}) over Z", file=out)
    print(f"  loop part      {doc['loop_part']}", file=out)
    print(f"  leading symbol f({p},{q}) coefficient {doc['leading_coeff']}", file=out)
    print(f"  max other p    {doc['max_other_p']}", file=out)
    print(f"  g(y) coeff     {doc['g_coeff']}", file=out)
    print(f"  verdict        {doc['verdict']}", file=out)
    return doc, EXIT_OK if doc["nonzero"] else EXIT_VIOLATION


def cmd_catalog(args, out):
    if args.action == "list":
        loops = [{"name": n, "order": catalog(n).order} for n in catalog_names()]
        for item in loops:
            print(f"{item['name']:10s} {item['order']}", file=out)
        return {"loops": loops}, EXIT_OK
    L = catalog(args.name)
    if args.format == "text":
        out.write(L.to_text())
    else:
        out.write(json.dumps(L.to_json()) + "\n")
    return L.to_json(), EXIT_OK


COMMANDS = {
    "check": cmd_check, "series": cmd_series, "compare": cmd_compare,
    "graded": cmd_graded, "eval": cmd_eval, "deviation": cmd_deviation,
    "higman-witness": cmd_witness, "catalog": cmd_catalog,
}


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        doc, code = COMMANDS[args.command](args, out)
        _write_json(args.json, doc)
    except GradedError as exc:
        print(f"loopforge: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except (LoopError, TermSyntaxError, InputError, KeyError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"loopforge: error: {msg}", file=sys.stderr)
        return EXIT_INPUT
    return code


def main():
    sys.exit(run())
