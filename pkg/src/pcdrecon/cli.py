"""Command-line interface: ``pcdrecon <subcommand> ...``.

Every subcommand reads JSON from a file (``-`` for stdin) and writes JSON
to ``-o`` (stdout by default). Exit status is 0 on success, 1 when a
validation or verification check fails and 2 on malformed input, I/O
problems or bad arguments; failures also print an error object to stderr.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import serialize
from .compliance import clean
from .dot import graph_to_dot, tree_to_dot
from .errors import PCDReconError, SchemaError, UnsatisfiableParamsError
from .generator import GeneratorParams, random_network
from .graph import DEFAULT_EPS, is_symmetric_routing, validate
from .pcd import build_receiver_tree, build_source_tree, measure
from .reconstruct import reconstruct, reconstruct_symmetric
from .verify import boundary_anchored_isomorphic, check_theorem, pcd_equal


class UsageError(PCDReconError):
    code = "USAGE"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc.strerror}", path=path) from exc


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise SchemaError(f"cannot write {path}: {exc.strerror}", path=path) from exc


def cmd_generate(args) -> int:
    data = {}
    if args.params:
        data = serialize.loads(_read(args.params))
        if not isinstance(data, dict):
            raise SchemaError("generator params must be a JSON object")
    flags = {
        "seed": args.seed,
        "boundary_count": args.boundary_count,
        "internal_count": args.internal_count,
        "edge_density": args.edge_density,
        "symmetric_routing": args.symmetric_routing or None,
        "symmetric_weights": args.symmetric_weights or None,
        "ensure_compliant": args.ensure_compliant or None,
        "integer_weights": args.integer_weights or None,
        "jitter": False if args.no_jitter else None,
    }
    if args.weight_min is not None or args.weight_max is not None:
        lo, hi = data.get("weight_range", GeneratorParams.weight_range)
        flags["weight_range"] = (
            args.weight_min if args.weight_min is not None else lo,
            args.weight_max if args.weight_max is not None else hi,
        )
    data.update({k: v for k, v in flags.items() if v is not None})
    try:
        params = GeneratorParams.from_dict(data)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, PCDReconError):
            raise
        raise SchemaError(str(exc)) from exc
    _write(args.output, serialize.dumps(random_network(params)))
    return 0


def cmd_validate(args) -> int:
    graph = serialize.load_graph(_read(args.input))
    report = validate(graph)
    _write(args.output, serialize.dumps(report))
    return 0 if report.valid else 1


def cmd_measure(args) -> int:
    graph = serialize.load_graph(_read(args.input))
    _write(args.output, serialize.dumps(measure(graph)))
    return 0


def cmd_trees(args) -> int:
    pcd = serialize.load_pcd(_read(args.input))
    roots = args.root or list(pcd.boundary)
    out = {}
    for b in roots:
        if b not in pcd.index:
            raise SchemaError(f"{b!r} is not a boundary vertex")
        trees = {
            "source": build_source_tree(pcd, b, args.epsilon),
            "receiver": build_receiver_tree(pcd, b, args.epsilon),
        }
        out[b] = {kind: t.to_dict() for kind, t in trees.items()}
        if args.dot_dir:
            os.makedirs(args.dot_dir, exist_ok=True)
            for kind, t in trees.items():
                _write(os.path.join(args.dot_dir, f"{kind}_{b}.dot"), tree_to_dot(t))
    _write(args.output, serialize.dumps(out))
    return 0


def cmd_reconstruct(args) -> int:
    if args.algorithm == "specialized" and not args.symmetric_routing:
        raise UsageError("--algorithm specialized requires --symmetric-routing")
    pcd = serialize.load_pcd(_read(args.input))
    if args.algorithm == "specialized":
        result = reconstruct_symmetric(pcd, eps=args.epsilon)
    else:
        result = reconstruct(pcd, args.symmetric_routing, eps=args.epsilon)
    _write(args.output, serialize.dumps(result.graph))
    if args.stats:
        _write(args.stats, serialize.dumps(result.stats))
    if args.dot:
        _write(args.dot, graph_to_dot(result.graph))
    return 0


def cmd_clean(args) -> int:
    graph = serialize.load_graph(_read(args.input))
    report = validate(graph)
    if not report.valid:
        _write(args.report, serialize.dumps(report))
        return 1
    cleaned, cleaning = clean(graph, args.symmetric, args.epsilon)
    _write(args.output, serialize.dumps(cleaned))
    if args.report:
        _write(args.report, serialize.dumps(cleaning))
    return 0


def cmd_verify(args) -> int:
    graph = serialize.load_graph(_read(args.input))
    report = check_theorem(graph, args.epsilon).to_dict()
    if args.reference:
        ref = serialize.load_graph(_read(args.reference))
        ref_clean, _ = clean(ref, is_symmetric_routing(ref), args.epsilon)
        witness = boundary_anchored_isomorphic(graph, ref_clean, args.epsilon)
        same_pcd = pcd_equal(measure(graph), measure(ref), args.epsilon)
        report["assertions"]["isomorphic_to_cleaned_reference"] = witness is not None
        report["assertions"]["pcd_matches_reference"] = same_pcd
        report["reference_witness"] = witness.to_dict() if witness else None
        report["passed"] = report["passed"] and witness is not None and same_pcd
    _write(args.output, serialize.dumps(report))
    return 0 if report["passed"] else 1


def cmd_export_dot(args) -> int:
    graph = serialize.load_graph(_read(args.input))
    _write(args.output, graph_to_dot(graph))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pcdrecon", description="Network graph reconstruction from path correlation data.")
    parser.add_argument("--epsilon", type=float, default=DEFAULT_EPS, help="numeric tolerance (default 1e-9)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name, func, help_, takes_input=True):
        p = sub.add_parser(name, help=help_)
        if takes_input:
            p.add_argument("input", nargs="?", default="-", help="input JSON file (default stdin)")
        p.add_argument("-o", "--output", help="output file (default stdout)")
        p.set_defaults(func=func)
        return p

    p = command("generate", cmd_generate, "draw a random network graph", takes_input=False)
    p.add_argument("--params", help="JSON file with generator parameters; flags override it")
    p.add_argument("--seed", type=int)
    p.add_argument("--boundary-count", type=int)
    p.add_argument("--internal-count", type=int)
    p.add_argument("--edge-density", type=float)
    p.add_argument("--weight-min", type=float)
    p.add_argument("--weight-max", type=float)
    p.add_argument("--symmetric-routing", action="store_true")
    p.add_argument("--symmetric-weights", action="store_true")
    p.add_argument("--ensure-compliant", action="store_true")
    p.add_argument("--integer-weights", action="store_true")
    p.add_argument("--no-jitter", action="store_true")

    command("validate", cmd_validate, "check graph well-formedness and tree consistency")
    command("measure", cmd_measure, "compute the PCD of a graph")

    p = command("trees", cmd_trees, "logical source and receiver trees per root")
    p.add_argument("--root", action="append", help="restrict to this root (repeatable)")
    p.add_argument("--dot-dir", help="also write one DOT file per tree into this directory")

    p = command("reconstruct", cmd_reconstruct, "rebuild a graph from a PCD")
    p.add_argument("--symmetric-routing", action="store_true")
    p.add_argument("--algorithm", choices=("general", "specialized"), default="general")
    p.add_argument("--stats", help="write propagation statistics JSON here")
    p.add_argument("--dot", help="write the graph as DOT here")

    p = command("clean", cmd_clean, "reduce a graph to its compliant form")
    p.add_argument("--symmetric", action="store_true", help="use the symmetric-routing predicates")
    p.add_argument("--report", help="write the cleaning report JSON here")

    p = command("verify", cmd_verify, "round-trip check: reconstruction matches the cleaned graph")
    p.add_argument("--reference", help="also compare against this graph")

    command("export-dot", cmd_export_dot, "render a graph as DOT")
    return parser


def _fail(exc: PCDReconError, status: int) -> int:
    sys.stderr.write(json.dumps(exc.to_dict()) + "\n")
    return status


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except (SchemaError, UsageError, UnsatisfiableParamsError) as exc:
        return _fail(exc, 2)
    except PCDReconError as exc:
        return _fail(exc, 1)


if __name__ == "__main__":
    sys.exit(main())
