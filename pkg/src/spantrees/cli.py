"""Command-line entry point.

Exit codes: 0 success / valid, 1 invalid certificate or refusal, 2 structured
simulation obstruction, 3 input or I/O error, 4 invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .coverpack import (
    DensityCertificate,
    PartitionWitness,
    covering,
    max_packing_size,
    max_tree_packing,
    min_cover_number,
    nash_williams_check,
    verify_certificate,
)
from .errors import InvariantViolation, SpanTreeError
from .exchange import run_finite
from .generators import GENERATORS, generate
from .graph import MultiGraph, edge_connectivity, is_connected
from .io import emit_graph, read_certificate, read_graph
from .lazy import DEFAULT_BUDGET, DEFAULT_CHECKPOINT, FAMILIES, make_family, run_budgeted
from .ordering import back_edge_partition, build_edge_order, degeneracy_ordering

EXIT_OK, EXIT_INVALID, EXIT_OBSTRUCTION, EXIT_INPUT, EXIT_INVARIANT = 0, 1, 2, 3, 4


def analyze(g: MultiGraph) -> dict:
    connected = is_connected(g)
    order = degeneracy_ordering(g)
    return {
        "vertices": g.vertex_count,
        "edges": g.edge_count,
        "colouring_number": order.mu,
        "edge_connectivity": edge_connectivity(g) if g.vertex_count >= 2 else None,
        "min_cover_number": min_cover_number(g) if connected else None,
        "max_packing_size": max_packing_size(g) if connected else None,
    }


def decompose(g: MultiGraph, k: int) -> tuple[dict, int, object]:
    """The full finite pipeline; returns ``(payload, exit code, trace or None)``."""
    if not is_connected(g):
        return {"status": "refused", "reason": "disconnected"}, EXIT_INVALID, None
    packing = max_tree_packing(g, k)
    if isinstance(packing, PartitionWitness):
        return {"status": "refused", "reason": "no-packing", "witness": packing.to_json()}, EXIT_INVALID, None
    order = degeneracy_ordering(g)
    if order.mu > k + 1:
        return {
            "status": "refused",
            "reason": "colouring-number",
            "colouring_number": order.mu,
            "detail": f"colouring number {order.mu} exceeds k+1={k + 1}",
        }, EXIT_INVALID, None
    eord = build_edge_order(back_edge_partition(g, order))
    cert, trace = run_finite(g, order, eord, packing)
    return {**cert.to_json(), "status": "ok", "swaps": trace.swaps}, EXIT_OK, trace


def _emit(payload: dict, out: str | None):
    text = json.dumps(payload, indent=2, sort_keys=False) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_analyze(args):
    _emit(analyze(read_graph(args.graph)), args.out)
    return EXIT_OK


def cmd_order(args):
    g = read_graph(args.graph)
    order = degeneracy_ordering(g)
    part = back_edge_partition(g, order)
    _emit({
        "order": list(order.order),
        "mu": order.mu,
        "back_degrees": list(order.back_degrees),
        "blocks": [list(b) for b in part.blocks],
    }, args.out)
    return EXIT_OK


def cmd_pack(args):
    g = read_graph(args.graph)
    res = max_tree_packing(g, args.k, mode="exhaustive" if args.mode == "exhaustive" else "matroid")
    if isinstance(res, PartitionWitness):
        _emit({"status": "failed", "witness": res.to_json()}, args.out)
        return EXIT_INVALID
    _emit(res.to_json(), args.out)
    return EXIT_OK


def cmd_cover(args):
    g = read_graph(args.graph)
    check = nash_williams_check(g, args.k, mode=args.mode)
    if not check.ok:
        _emit(_density_json(check), args.out)
        return EXIT_INVALID
    res = covering(g, args.k)
    if isinstance(res, DensityCertificate):
        raise InvariantViolation("density check passed but no forest partition was found")
    _emit(res.to_json(), args.out)
    return EXIT_OK


def _density_json(c: DensityCertificate) -> dict:
    return {
        "status": "violated",
        "k": c.k,
        "witness_set": sorted(c.witness),
        "edge_count": c.edge_count,
        "bound": c.bound,
    }


def cmd_decompose(args):
    g = read_graph(args.graph)
    payload, code, trace = decompose(g, args.k)
    if trace is not None and args.trace:
        Path(args.trace).write_text(trace.to_jsonl(), encoding="utf-8")
    _emit(payload, args.out)
    return code


def cmd_verify(args):
    g = read_graph(args.graph)
    cert = read_certificate(args.certificate)
    res = verify_certificate(g, cert)
    _emit({"valid": res.ok, "reason": res.reason}, args.out)
    return EXIT_OK if res.ok else EXIT_INVALID


def cmd_generate(args):
    params = {name: getattr(args, name, None) for name in ("n", "m", "k", "levels", "c", "seed")}
    g = generate(args.family, **params)
    if "seed" in GENERATORS[args.family][1]:
        print(f"seed={args.seed}", file=sys.stderr)
    text = emit_graph(g, args.format)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_simulate(args):
    params = {"k": args.k}
    if args.m is not None:
        params["m"] = args.m
    family = make_family(args.family, **params)
    result = run_budgeted(family, args.k, args.N, args.checkpoints)
    summary = result.summary()
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "trace.jsonl").write_text(result.trace.to_jsonl(), encoding="utf-8")
        (out / "summary.json").write_text(json.dumps(summary, indent=2) + "\n", encoding="utf-8")
    brief = {k: v for k, v in summary.items() if k != "overlays"}
    sys.stdout.write(json.dumps(brief, indent=2) + "\n")
    if result.obstruction is not None:
        return EXIT_OBSTRUCTION
    if not result.report.clean or not result.stabilization["stable"]:
        return EXIT_INVARIANT
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # usage errors are input errors; exit 2 is reserved for obstructions
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="spantrees", description="Spanning-tree packings, coverings and decompositions.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, graph=True):
        if graph:
            sp.add_argument("graph", help="graph file (text or JSON)")
        sp.add_argument("--out", help="write output here instead of stdout")
        return sp

    common(sub.add_parser("analyze", help="summary invariants of a graph")).set_defaults(func=cmd_analyze)
    common(sub.add_parser("order", help="degeneracy ordering and back-edge blocks")).set_defaults(func=cmd_order)
    for name, func, help_ in (
        ("pack", cmd_pack, "k edge-disjoint spanning trees"),
        ("cover", cmd_cover, "k spanning trees covering every edge"),
        ("decompose", cmd_decompose, "k spanning trees partitioning the edges"),
    ):
        sp = common(sub.add_parser(name, help=help_))
        sp.add_argument("-k", type=int, required=True)
        sp.add_argument("--mode", choices=("exhaustive", "matroid"), default="matroid")
        if name == "decompose":
            sp.add_argument("--trace", help="write the exchange trace (JSON lines) here")
        sp.set_defaults(func=func)

    sp = common(sub.add_parser("verify", help="check a certificate against a graph"))
    sp.add_argument("certificate")
    sp.set_defaults(func=cmd_verify)

    sp = common(sub.add_parser("generate", help="write a generated graph"), graph=False)
    sp.add_argument("family", choices=sorted(GENERATORS))
    for flag in ("n", "m", "k", "levels", "c"):
        sp.add_argument(f"--{flag}", type=int)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--format", choices=("json", "text", "dot"), default="json")
    sp.set_defaults(func=cmd_generate)

    sp = common(sub.add_parser("simulate", help="budgeted exchange run on a lazy infinite family"), graph=False)
    sp.add_argument("family", choices=sorted(FAMILIES))
    sp.add_argument("-k", type=int, default=2)
    sp.add_argument("-N", type=int, default=DEFAULT_BUDGET)
    sp.add_argument("--m", type=int, help="multiplicity for multiplied_ray")
    sp.add_argument("--checkpoints", type=int, default=DEFAULT_CHECKPOINT, help="checkpoint interval")
    sp.set_defaults(func=cmd_simulate)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (SpanTreeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
