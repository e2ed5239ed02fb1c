"""Command-line front end.

Subcommands:

  spline-basis FILE [--based v1,v2,...]   generators + structure as JSON
  reduce FILE [--verbose]                 genus-preserving reduction
  decompose FILE [--verbose]              spline module decomposition
  hd --ring R --ideals J --max-pairs N --mode dim|zrank [--guess dx,dt]
  verify [FILE | --corpus DIR]            invariant suites (builtin corpus
                                          when no input is given)

Exit codes: 0 success, 1 a computation or verification failed (honestly
reported), 2 invalid input.
"""

from __future__ import annotations

import argparse
import glob
import json
import os
import sys

from .decomp import reduce_graph, spline_decomposition
from .dyckseries import guess_algebraic_relation, hilbert_dyck_prefix
from .errors import ConsistencyError, GraphSplinesError, ModeMismatch
from .jsonio import (
    DocumentError,
    decomposition_to_json,
    graph_from_json,
    ideal_from_json,
    module_to_json,
    reduction_to_json,
    ring_from_json,
)
from .splinecore import based_spline_module, compute_spline_module
from .verify import builtin_corpus, run_suites

EXIT_OK = 0
EXIT_COMPUTATION = 1
EXIT_INPUT = 2


def _load_graph(path: str):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            doc = json.load(handle)
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path}: invalid JSON: {exc}") from exc
    return graph_from_json(doc)


def _emit(doc) -> None:
    json.dump(doc, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def _parse_ring_spec(text: str):
    """Compact ring specs: Z, ZmodN:12, Fp:5; JSON objects for the rest."""
    text = text.strip()
    if text.startswith("{"):
        return ring_from_json(json.loads(text))
    head, _, tail = text.partition(":")
    if head == "Z" and not tail:
        return ring_from_json({"type": "Z"})
    if head == "ZmodN":
        return ring_from_json({"type": "ZmodN", "n": int(tail)})
    if head == "Fp":
        return ring_from_json({"type": "Fp", "p": int(tail)})
    raise DocumentError(f"ring spec {text!r} not understood")


def cmd_spline_basis(args) -> int:
    graph, _ = _load_graph(args.file)
    if args.based:
        try:
            based = [int(x) for x in args.based.split(",") if x != ""]
        except ValueError as exc:
            raise DocumentError(f"--based: {exc}") from exc
        module = based_spline_module(graph, based)
    else:
        module = compute_spline_module(graph)
    _emit(module_to_json(module))
    return EXIT_OK


def cmd_reduce(args) -> int:
    graph, _ = _load_graph(args.file)
    result = reduce_graph(graph)
    if args.verbose:
        for i, step in enumerate(result.steps):
            print(f"step {i}: {step.kind}", file=sys.stderr)
    _emit(reduction_to_json(result))
    return EXIT_OK


def cmd_decompose(args) -> int:
    graph, _ = _load_graph(args.file)
    result = spline_decomposition(graph)
    if args.verbose:
        sizes = [p.module.z_rank for p in result.kernel_parts]
        print(
            f"size {result.total_size} = {result.reduced_module.z_rank} "
            f"(reduced) + {sizes} (kernel parts)",
            file=sys.stderr,
        )
    _emit(decomposition_to_json(result))
    return EXIT_OK


def cmd_hd(args) -> int:
    ring = _parse_ring_spec(args.ring)
    try:
        ideal_docs = json.loads(args.ideals)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"--ideals: invalid JSON: {exc}") from exc
    if not isinstance(ideal_docs, list) or not ideal_docs:
        raise DocumentError("--ideals: expected a nonempty list of generator lists")
    ideals = tuple(ideal_from_json(ring, doc) for doc in ideal_docs)
    if args.max_pairs < 0:
        raise DocumentError("--max-pairs must be nonnegative")
    if args.max_pairs > args.cap:
        raise DocumentError(
            f"--max-pairs {args.max_pairs} exceeds the cap {args.cap}"
        )
    mode = {"dim": "dim", "zrank": "zrank"}[args.mode]
    prefix = hilbert_dyck_prefix(ring, ideals, args.max_pairs, mode)
    out = {"mode": prefix.mode, "coefficients": list(prefix.coefficients)}
    if args.guess:
        try:
            dx, dt = (int(x) for x in args.guess.split(","))
        except ValueError as exc:
            raise DocumentError(f"--guess: expected dx,dt: {exc}") from exc
        relation = guess_algebraic_relation(prefix, dx, dt)
        out["relation"] = relation
    _emit(out)
    return EXIT_OK


def cmd_verify(args) -> int:
    graphs = []
    problems = []
    if args.file:
        graphs.append((os.path.basename(args.file), _load_graph(args.file)[0]))
    elif args.corpus:
        paths = sorted(glob.glob(os.path.join(args.corpus, "*.json")))
        for path in paths:
            try:
                graphs.append((os.path.basename(path), _load_graph(path)[0]))
            except DocumentError as exc:
                problems.append(f"{os.path.basename(path)}: {exc}")
    else:
        graphs = builtin_corpus()
    suites = run_suites(graphs)
    report = {
        "graphs": len(graphs),
        "suites": [s.to_json() for s in suites],
        "inputProblems": problems,
        "pass": all(s.ok for s in suites) and not problems,
    }
    if not graphs and not problems:
        report["warnings"] = ["corpus is empty; nothing was checked"]
    _emit(report)
    return EXIT_OK if report["pass"] else EXIT_COMPUTATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphsplines",
        description="Exact spline modules on edge-labeled graphs",
    )
    parser.add_argument(
        "--seed", type=int, default=None, help="reserved; all computations are deterministic"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    basis = sub.add_parser("spline-basis", help="compute module generators")
    basis.add_argument("file")
    basis.add_argument("--based", default="", help="comma-separated vertices")
    basis.set_defaults(func=cmd_spline_basis)

    reduce_p = sub.add_parser("reduce", help="reduce a graph, preserving genus")
    reduce_p.add_argument("file")
    reduce_p.add_argument("--verbose", action="store_true")
    reduce_p.set_defaults(func=cmd_reduce)

    decomp_p = sub.add_parser("decompose", help="decompose the spline module")
    decomp_p.add_argument("file")
    decomp_p.add_argument("--verbose", action="store_true")
    decomp_p.set_defaults(func=cmd_decompose)

    hd = sub.add_parser("hd", help="Hilbert-Dyck series prefix")
    hd.add_argument("--ring", required=True, help="Z | ZmodN:n | Fp:p | JSON")
    hd.add_argument("--ideals", required=True, help="JSON list of generator lists")
    hd.add_argument("--max-pairs", type=int, required=True)
    hd.add_argument("--mode", choices=["dim", "zrank"], required=True)
    hd.add_argument("--guess", default="", help="dx,dt degree bounds")
    hd.add_argument("--cap", type=int, default=8, help="largest allowed --max-pairs")
    hd.set_defaults(func=cmd_hd)

    verify_p = sub.add_parser("verify", help="run the invariant suites")
    verify_p.add_argument("file", nargs="?", default="")
    verify_p.add_argument("--corpus", default="", help="directory of graph documents")
    verify_p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DocumentError, ModeMismatch) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ConsistencyError as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return EXIT_COMPUTATION
    except GraphSplinesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
