"""Command-line front end.

Membership is reported through the exit code: 0 member (or true), 1
non-member (or false), 2 unknown because a search budget ran out, 3 bad
input.  Stdout carries line-delimited key=value records plus, where a
command produces objects, their concrete syntax.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional

import networkx as nx

from . import catalog
from .classes import everything, minimal_bounds_relative
from .dsl import (DslDocument, SignatureDecl, StructureDecl, _print_decl,
                  parse, parse_fexpr, print_document)
from .errors import InputError, SearchBudgetExceeded
from .expressions import (LocalExpression, Certificate, decide_with_stats,
                          render_snp, verify)
from .graphio import read_graph_file
from .logic import FunctorTable, logically_equivalent, synthesize_definition
from .solver import SearchStats
from .structures import (DIGRAPH_SIGNATURE, GRAPH_SIGNATURE, Signature,
                         Structure, graph_edges)
from .dsl import DefinitionDecl

EXIT_MEMBER = 0
EXIT_NON_MEMBER = 1
EXIT_UNKNOWN = 2
EXIT_INPUT_ERROR = 3


def _load_expression(spec: str) -> LocalExpression:
    """A catalog name, a document path, or 'path#name' when the document
    declares several expressions."""
    if "#" in spec or spec.endswith(".lx"):
        path, _, which = spec.partition("#")
        try:
            with open(path, encoding="utf-8") as fh:
                doc = parse(fh.read())
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc}") from None
        names = doc.expression_names()
        if not which:
            if len(names) != 1:
                raise InputError(
                    f"{path} declares {len(names)} expressions; pick one "
                    f"with {path}#NAME (available: {', '.join(names)})")
            which = names[0]
        return doc.expression(which)
    return catalog.builtin(spec).expression


def _load_signature(spec: str) -> Signature:
    if spec == "graph":
        return GRAPH_SIGNATURE
    if spec == "digraph":
        return DIGRAPH_SIGNATURE
    path, _, which = spec.partition("#")
    try:
        with open(path, encoding="utf-8") as fh:
            doc = parse(fh.read())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    if not which:
        raise InputError("signature files need path#NAME")
    return doc.signature(which)


def _print_stats(stats: SearchStats) -> None:
    print(f"nodes={stats.nodes}")
    print(f"wall_time={stats.wall_time:.6f}")
    for kind in sorted(stats.failures):
        print(f"failures.{kind}={stats.failures[kind]}")


def _certificate_document(e: LocalExpression, cert: Certificate) -> str:
    decls = (SignatureDecl("carrier_sig", e.carrier),
             StructureDecl("certificate", "carrier_sig", cert.expansion))
    return print_document(DslDocument(decls))


def _cmd_decide(args) -> int:
    e = _load_expression(args.expr)
    G = read_graph_file(args.graph)
    threads = 1 if args.deterministic else 4
    try:
        cert, stats = decide_with_stats(e, G, max_nodes=args.max_nodes,
                                        max_seconds=args.max_seconds,
                                        threads=threads)
    except SearchBudgetExceeded as exc:
        print("result=unknown")
        print(f"reason={exc}")
        if args.stats:
            _print_stats(exc.stats)
        return EXIT_UNKNOWN
    print(f"result={'member' if cert else 'non-member'}")
    if cert is not None and args.cert:
        with open(args.cert, "w", encoding="utf-8") as fh:
            fh.write(_certificate_document(e, cert))
        print(f"certificate={args.cert}")
    if args.stats:
        _print_stats(stats)
    return EXIT_MEMBER if cert else EXIT_NON_MEMBER


def _cmd_verify(args) -> int:
    e = _load_expression(args.expr)
    G = read_graph_file(args.graph)
    try:
        with open(args.cert, encoding="utf-8") as fh:
            doc = parse(fh.read())
    except OSError as exc:
        raise InputError(f"cannot read {args.cert}: {exc}") from None
    names = [d.name for d in doc.decls if isinstance(d, StructureDecl)]
    if len(names) != 1:
        raise InputError("certificate file must declare exactly one structure")
    ok = verify(e, G, Certificate(doc.structure(names[0])))
    print(f"result={'valid' if ok else 'invalid'}")
    return EXIT_MEMBER if ok else EXIT_NON_MEMBER


def _cmd_bounds(args) -> int:
    e = _load_expression(args.expr)
    ambient = everything(e.target)

    def member(G: Structure) -> bool:
        got, _ = decide_with_stats(e, G, max_nodes=args.max_nodes,
                                   max_seconds=args.max_seconds)
        return got is not None

    try:
        bounds = minimal_bounds_relative(member, ambient, args.max_n)
    except SearchBudgetExceeded:
        print("result=unknown")
        return EXIT_UNKNOWN
    print(f"bounds={len(bounds)}")
    for i, b in enumerate(bounds):
        print()
        print(_print_decl(StructureDecl(f"bound{i}", "target_sig", b)))
    return EXIT_MEMBER


def _cmd_equiv(args) -> int:
    sig = _load_signature(args.sig)
    phi, k1 = parse_fexpr(args.f, sig)
    psi, k2 = parse_fexpr(args.g, sig)
    k = max(k1, k2)
    eq = logically_equivalent(phi, psi, sig, arity=k)
    print(f"result={'equivalent' if eq else 'inequivalent'}")
    return EXIT_MEMBER if eq else EXIT_NON_MEMBER


def _cmd_synth(args) -> int:
    try:
        with open(args.table, encoding="utf-8") as fh:
            doc = parse(fh.read())
    except OSError as exc:
        raise InputError(f"cannot read {args.table}: {exc}") from None
    ins = {d.name[:-3]: d.structure for d in doc.decls
           if isinstance(d, StructureDecl) and d.name.endswith("_in")}
    outs = {d.name[:-4]: d.structure for d in doc.decls
            if isinstance(d, StructureDecl) and d.name.endswith("_out")}
    if not ins or set(ins) != set(outs):
        raise InputError("table file must pair structures NAME_in/NAME_out")
    entries = tuple((ins[k], outs[k]) for k in sorted(ins))
    carrier = entries[0][0].signature
    target = entries[0][1].signature
    table = FunctorTable(carrier, target, entries)
    D = synthesize_definition(table)
    decls = [SignatureDecl("target_sig", target)]
    carrier_name = "target_sig"
    if carrier != target:
        carrier_name = "carrier_sig"
        decls.append(SignatureDecl(carrier_name, carrier))
    decls.append(DefinitionDecl("synthesized", "target_sig", carrier_name, D))
    sys.stdout.write(print_document(DslDocument(tuple(decls))))
    return EXIT_MEMBER


def _cmd_snp(args) -> int:
    e = _load_expression(args.expr)
    print(render_snp(e))
    return EXIT_MEMBER


def _cmd_enumerate(args) -> int:
    e = _load_expression(args.expr)
    if e.target != GRAPH_SIGNATURE:
        raise InputError("enumerate lists graphs; the expression's target "
                         "is not the graph signature")
    sizes = range(1, args.max_n + 1) if args.all else [args.max_n]
    count = 0
    for n in sizes:
        for G in catalog._all_graphs(n):
            got, _ = decide_with_stats(e, G, max_nodes=args.max_nodes,
                                       max_seconds=args.max_seconds)
            if got is not None:
                g = nx.Graph()
                g.add_nodes_from(range(G.n))
                g.add_edges_from(tuple(fs) for fs in graph_edges(G))
                line = nx.to_graph6_bytes(g, header=False).decode().strip()
                print(line)
                count += 1
    print(f"members={count}")
    return EXIT_MEMBER


def _cmd_catalog(args) -> int:
    for name in catalog.catalog_names():
        entry = catalog.builtin(name)
        print(f"{name}\t{entry.note}")
    return EXIT_MEMBER


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="localexpr",
        description="Decide membership in locally expressible graph "
                    "classes and work with their defining documents.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, graph=True, budget=True):
        p.add_argument("--expr", required=True,
                       help="catalog entry name, document path, or path#NAME")
        if graph:
            p.add_argument("--graph", required=True,
                           help="input graph (.g6 or .edgelist)")
        if budget:
            p.add_argument("--max-nodes", type=int, default=None)
            p.add_argument("--max-seconds", type=float, default=None)

    p = sub.add_parser("decide", help="search for a certificate")
    common(p)
    p.add_argument("--cert", help="write the certificate here (DSL syntax)")
    p.add_argument("--stats", action="store_true")
    p.add_argument("--deterministic", action="store_true",
                   help="sequential search; parallel search returns the "
                        "same output, this removes the doubt")
    p.set_defaults(fn=_cmd_decide)

    p = sub.add_parser("verify", help="check a certificate without search")
    common(p, budget=False)
    p.add_argument("--cert", required=True)
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("bounds", help="mine minimal obstructions of the "
                                      "decided class")
    common(p, graph=False)
    p.add_argument("--max-n", type=int, required=True)
    p.set_defaults(fn=_cmd_bounds)

    p = sub.add_parser("equiv", help="decide logical equivalence of two "
                                     "quantifier-free formulas")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--sig", default="graph",
                   help="graph, digraph, or path#NAME")
    p.set_defaults(fn=_cmd_equiv)

    p = sub.add_parser("synth", help="synthesize a definition from a "
                                     "structure-pair table")
    p.add_argument("--table", required=True,
                   help="document pairing structures NAME_in/NAME_out")
    p.set_defaults(fn=_cmd_synth)

    p = sub.add_parser("snp", help="print the expression as an "
                                   "existential-universal sentence")
    common(p, graph=False, budget=False)
    p.set_defaults(fn=_cmd_snp)

    p = sub.add_parser("enumerate", help="list member graphs in graph6")
    common(p, graph=False)
    p.add_argument("--max-n", type=int, required=True)
    p.add_argument("--all", action="store_true",
                   help="every size up to --max-n, not just --max-n")
    p.set_defaults(fn=_cmd_enumerate)

    p = sub.add_parser("catalog", help="list the built-in expressions")
    p.set_defaults(fn=_cmd_catalog)
    return ap


def main(argv: Optional[list[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except SearchBudgetExceeded:
        print("result=unknown")
        return EXIT_UNKNOWN
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
