"""Command-line interface: generate, analyze, reduce, pack/cover, verify,
and run randomized duality experiments over labeled graphs.

All output is a single JSON document (or plain table for `experiment`) on
stdout unless --out is given.  Exit codes: 0 success, 1 failed
certificate, 2 parse/parameter error, 3 enumeration limit exceeded.
"""

from __future__ import annotations

import argparse
import itertools
import json
import random
import sys
from typing import Optional

from . import cycles, groups, packing, reductions
from .cycles import EnumerationLimitError
from .graphs import (
    Edge,
    GraphFormatError,
    LabeledGraph,
    decode_graph,
    encode_graph,
    is_gamma_bipartite,
)
from .obstructions import (
    ObstructionFormatError,
    ObstructionSpec,
    build_obstruction,
    escher_wall,
    verify_obstruction,
)
from .walls import WallFormatError, elementary_wall, encode_wall

PARSE_ERROR, CERT_ERROR, LIMIT_ERROR = 2, 1, 3


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _dump(doc, out: Optional[str]) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read instance: {exc}", PARSE_ERROR)


def _load_graph(path: str) -> LabeledGraph:
    doc = _load(path)
    try:
        if "graph" in doc:
            return decode_graph(doc["graph"])
        return decode_graph(doc)
    except (GraphFormatError, groups.GroupParseError, KeyError, ValueError) as exc:
        raise CliError(f"bad instance: {exc}", PARSE_ERROR)


def _descriptor(text: str) -> groups.GroupDescriptor:
    try:
        return groups.parse_descriptor(text)
    except groups.GroupParseError as exc:
        raise CliError(str(exc), PARSE_ERROR)


def _random_graph(rng: random.Random, desc, max_n: int, max_m: int) -> LabeledGraph:
    n = rng.randint(2, max_n)
    pairs = list(itertools.combinations(range(n), 2))
    m = rng.randint(1, min(max_m, len(pairs)))
    chosen = rng.sample(pairs, m)
    edges = [
        Edge(i, u, v, groups.random_element(desc, rng))
        for i, (u, v) in enumerate(chosen)
    ]
    return LabeledGraph(desc, range(n), edges)


# ---------------------------------------------------------------------------
# subcommands


def cmd_gen(args) -> int:
    if args.kind == "wall":
        if args.r is None:
            raise CliError("gen wall needs --r", PARSE_ERROR)
        desc = _descriptor(args.groups) if args.groups else None
        try:
            doc = encode_wall(elementary_wall(args.r, desc))
        except WallFormatError as exc:
            raise CliError(str(exc), PARSE_ERROR)
        doc["kind"] = "wall"
    elif args.kind == "escher":
        if args.h is None:
            raise CliError("gen escher needs --h", PARSE_ERROR)
        try:
            graph = escher_wall(args.h)
        except ObstructionFormatError as exc:
            raise CliError(str(exc), PARSE_ERROR)
        doc = {"kind": "escher", "h": args.h, "graph": encode_graph(graph)}
    elif args.kind == "obstruction":
        if args.h is None or not args.p or not args.q:
            raise CliError("gen obstruction needs --h, --p, --q", PARSE_ERROR)
        names = (args.groups or "z3,z3").split(",")
        if len(names) != 2:
            raise CliError("--groups takes two comma-separated descriptors", PARSE_ERROR)
        g1, g2 = _descriptor(names[0]), _descriptor(names[1])
        rng = random.Random(args.seed)
        def nonzero(desc):
            while True:
                x = groups.random_element(desc, rng)
                if not groups.is_zero(x):
                    return x
        v1, v2 = nonzero(g1), nonzero(g2)
        spec = ObstructionSpec(
            h=args.h,
            p_type=args.p,
            q_type=args.q,
            gamma1=g1,
            gamma2=g2,
            p_values=(v1,) * args.h,
            q_values=(v2,) * args.h,
        )
        try:
            graph = build_obstruction(spec)
        except ObstructionFormatError as exc:
            raise CliError(str(exc), PARSE_ERROR)
        doc = {"kind": "obstruction", "h": args.h, "graph": encode_graph(graph)}
    elif args.kind == "random":
        desc = _descriptor(args.groups or "sum(z2,z3)")
        rng = random.Random(args.seed)
        graph = _random_graph(rng, desc, args.max_n, args.max_m)
        doc = {"kind": "random", "graph": encode_graph(graph)}
    else:
        raise CliError(f"unknown kind {args.kind!r}", PARSE_ERROR)
    _dump(doc, args.out)
    return 0


def cmd_analyze(args) -> int:
    graph = _load_graph(args.file)
    checks = args.checks.split(",") if args.checks else ["bipartite", "robust", "classify"]
    report = {}
    for check in checks:
        if check == "bipartite":
            flat, data = is_gamma_bipartite(graph)
            report["bipartite"] = flat
            if flat:
                report["bipartite_shifts"] = [
                    [v, groups.encode_element(a)] for v, a in data
                ]
            else:
                report["bipartite_witness"] = sorted(data.edges)
        elif check == "robust":
            ok, witness = cycles.is_robust(graph, limit=args.limit)
            report["robust"] = ok
            if witness is not None:
                report["robust_witness"] = {
                    "coordinate": witness.coordinate,
                    "first": sorted(witness.first.edges),
                    "second": sorted(witness.second.edges),
                }
        elif check == "classify":
            found = cycles.enumerate_cycles(graph, limit=args.limit)
            report["classify"] = {
                "cycles": len(found),
                "nonzero_first": sum(1 for c in found if c.nonzero_in(0)),
                "nonzero_second": sum(1 for c in found if c.nonzero_in(1)),
                "doubly_nonzero": sum(1 for c in found if c.doubly_nonzero),
            }
        else:
            raise CliError(f"unknown check {check!r}", PARSE_ERROR)
    _dump(report, args.out)
    return 0


def _pack_report(graph: LabeledGraph, limit) -> dict:
    report = packing.pack_and_cover(graph, limit=limit)
    return {
        "nu": report.nu,
        "nu_half": report.nu_half,
        "tau": report.tau,
        "packing": [sorted(s) for s in report.packing],
        "half_packing": [sorted(s) for s in report.half_packing],
        "transversal": sorted(report.transversal),
    }


def cmd_pack(args) -> int:
    _dump(_pack_report(_load_graph(args.file), args.limit), args.out)
    return 0


def cmd_cover(args) -> int:
    report = _pack_report(_load_graph(args.file), args.limit)
    _dump({"tau": report["tau"], "transversal": report["transversal"]}, args.out)
    return 0


def cmd_reduce(args) -> int:
    graph = _load_graph(args.file)
    s1 = [int(x) for x in args.s1.split(",")] if args.s1 else []
    s2 = [int(x) for x in args.s2.split(",")] if args.s2 else []
    if args.kind == "plain":
        reduced = reductions.reduce_plain_cycles(graph)
    elif args.kind == "odd":
        reduced = reductions.reduce_odd_cycles(graph)
    elif args.kind == "s":
        reduced = reductions.reduce_S_cycles(graph, s1)
    elif args.kind == "odd_s":
        reduced = reductions.reduce_odd_S_cycles(graph, s1)
    elif args.kind == "s1s2":
        reduced = reductions.reduce_S1_S2_cycles(graph, s1, s2)
    else:
        raise CliError(f"unknown reduction {args.kind!r}", PARSE_ERROR)
    _dump({"kind": f"reduced-{args.kind}", "graph": encode_graph(reduced)}, args.out)
    return 0


def cmd_verify(args) -> int:
    graph = _load_graph(args.file)
    cert = _load(args.certificate)
    kind = cert.get("type")
    if kind == "transversal":
        removed = frozenset(int(v) for v in cert.get("vertices", ()))
        rest = graph.without_vertices(removed)
        for c in cycles.enumerate_cycles(rest, limit=args.limit):
            if c.doubly_nonzero:
                raise CliError(
                    "transversal misses the doubly nonzero cycle with edges "
                    f"{sorted(c.edges)}",
                    CERT_ERROR,
                )
        _dump({"verified": True, "type": "transversal"}, args.out)
        return 0
    if kind == "packing":
        edge_sets = [frozenset(int(e) for e in es) for es in cert.get("cycles", ())]
        max_use = int(cert.get("max_use", 1))
        if not packing.verify_packing(graph, edge_sets, max_use=max_use):
            raise CliError("packing certificate violates disjointness", CERT_ERROR)
        _dump({"verified": True, "type": "packing"}, args.out)
        return 0
    if kind == "obstruction":
        h = int(cert.get("h", 1))
        report = verify_obstruction(graph, h, limit=args.limit)
        if not report["nu_ok"]:
            raise CliError("instance packs more or fewer than one cycle", CERT_ERROR)
        _dump(report, args.out)
        return 0
    raise CliError(f"unknown certificate type {kind!r}", PARSE_ERROR)


def cmd_experiment(args) -> int:
    desc = _descriptor(args.groups or "sum(z2,z3)")
    rng = random.Random(args.seed)
    lines = []
    best = (0.0, "0/0")
    for i in range(args.count):
        graph = _random_graph(rng, desc, args.max_n, args.max_m)
        report = packing.pack_and_cover(graph, limit=args.limit)
        lines.append(
            f"{i}\t{len(graph.vertices)}\t{len(graph.edge_ids())}"
            f"\t{report.nu}\t{report.nu_half}\t{report.tau}"
        )
        if report.nu_half and report.tau / report.nu_half > best[0]:
            best = (report.tau / report.nu_half, f"{report.tau}/{report.nu_half}")
    lines.append(f"max tau/nu_half = {best[1]}")
    text = "index\tn\tm\tnu\tnu_half\ttau\n" + "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nonzero-cycles",
        description="generate and analyze doubly-labeled graph instances",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", help="write output to this file instead of stdout")
        p.add_argument("--limit", type=int, help="enumeration limit override")

    p = sub.add_parser("gen", help="generate an instance")
    p.add_argument("kind", choices=["wall", "escher", "obstruction", "random"])
    p.add_argument("--r", type=int, help="wall size")
    p.add_argument("--h", type=int, help="height")
    p.add_argument("--p", choices=["series", "nested", "crossing"])
    p.add_argument("--q", choices=["series", "nested", "crossing"])
    p.add_argument("--groups", help="group descriptor(s)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-n", type=int, default=7)
    p.add_argument("--max-m", type=int, default=12)
    common(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("analyze", help="run checks on an instance")
    p.add_argument("file")
    p.add_argument("--checks", help="comma-separated: bipartite,robust,classify")
    common(p)
    p.set_defaults(func=cmd_analyze)

    for name, func in (("pack", cmd_pack), ("cover", cmd_cover)):
        p = sub.add_parser(name, help=f"exact {name} numbers")
        p.add_argument("file")
        common(p)
        p.set_defaults(func=func)

    p = sub.add_parser("reduce", help="encode a constrained-cycle problem")
    p.add_argument("file")
    p.add_argument("kind", choices=["plain", "odd", "s", "odd_s", "s1s2"])
    p.add_argument("--s1", help="comma-separated vertex ids")
    p.add_argument("--s2", help="comma-separated vertex ids")
    common(p)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("verify", help="check a certificate against an instance")
    p.add_argument("file")
    p.add_argument("certificate")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("experiment", help="randomized duality sweep")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--max-n", type=int, default=7)
    p.add_argument("--max-m", type=int, default=12)
    p.add_argument("--groups", help="group descriptor")
    common(p)
    p.set_defaults(func=cmd_experiment)

    return parser


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(str(exc), file=sys.stderr)
        return exc.code
    except EnumerationLimitError as exc:
        print(str(exc), file=sys.stderr)
        return LIMIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
