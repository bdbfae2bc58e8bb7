"""Command-line interface.

Structured results go to stdout as a single JSON object, JSON lines, or
CSV; human-readable traces go to stderr under --verbose. Exit codes:
0 success, 1 infeasible input or failed validation (JSON detail on
stderr), 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

from . import bundles, pips, slices, solvers
from .errors import ForcelabError
from .forcing import RelaxedChronology, Rule, propagate, validate_chronology
from .graphs import load_graph, to_dot
from .pips import BlockPartition, PipWitness


def _parse_ids(text: str) -> list[int]:
    if not text:
        return []
    return [int(tok) for tok in text.split(",")]


def _load_chronology(path: str) -> RelaxedChronology:
    with open(path, "r", encoding="utf-8") as fh:
        return RelaxedChronology.from_json_dict(json.load(fh))


def _load_witness(path: str) -> PipWitness:
    with open(path, "r", encoding="utf-8") as fh:
        return PipWitness.from_json_dict(json.load(fh))


def _load_partitions(path: str) -> list[BlockPartition]:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    return [BlockPartition(data["K"], blocks) for blocks in data["partitions"]]


def _emit(payload: dict) -> None:
    print(json.dumps(payload, sort_keys=True))


def cmd_simulate(args) -> int:
    g = load_graph(args.graph)
    rule = Rule.from_token(args.rule)
    blue = _parse_ids(args.blue)
    if args.chronology:
        chron = _load_chronology(args.chronology)
        expansion = validate_chronology(g, chron)
        _emit(
            {
                "valid": True,
                "ct": chron.ct,
                "rule": chron.rule.value,
                "expansion": [sorted(s) for s in expansion],
            }
        )
        return 0
    result = propagate(rule, g, blue)
    if args.verbose and result.chronology is not None:
        for k, step in enumerate(result.chronology.steps, start=1):
            forces = " ".join(f"{f.src}->{f.dst}" for f in step)
            print(f"step {k}: {forces}", file=sys.stderr)
    if not result.ok:
        _emit(
            {
                "ok": False,
                "rule": rule.value,
                "stalled_blue": sorted(result.blue),
            }
        )
        return 1
    _emit(
        {
            "ok": True,
            "rule": rule.value,
            "base": sorted(blue),
            "pt": result.pt,
            "steps": result.chronology.to_json_dict()["steps"],
        }
    )
    return 0


def cmd_solve(args) -> int:
    g = load_graph(args.graph)
    report = solvers.solve_parameter(g, args.param, m=args.m, cap=args.cap)
    payload = report.to_json_dict()
    payload["n"] = g.n
    if args.m is not None:
        payload["m"] = args.m
    _emit(payload)
    return 0


def cmd_witness(args) -> int:
    g = load_graph(args.graph)
    if args.action == "extract":
        chron = _load_chronology(args.chronology)
        witness = pips.chronology_to_witness(g, chron)
        _emit(witness.to_json_dict())
        return 0
    witness = _load_witness(args.witness)
    if args.action == "apply":
        chron = pips.witness_to_chronology(g, witness)
        _emit(chron.to_json_dict())
        return 0
    check = pips.verify_witness(g, witness)
    _emit({"valid": check.ok, "violation": check.violation})
    return 0 if check.ok else 1


def cmd_family(args) -> int:
    parts = _load_partitions(args.partitions)
    layout = pips.family_layout(parts)
    header = {
        "witness": layout.witness.to_json_dict(),
        "base": sorted(layout.witness.base()),
        "path_edges": [list(e) for e in layout.path_edges],
        "optional_edges": [list(e) for e in layout.cross_edges],
    }
    print(json.dumps(header, sort_keys=True))
    for member in pips.generate_family(
        parts, mode=args.mode, count=args.count, seed=args.seed
    ):
        record = {
            "graph_id": member.index,
            "n": member.graph.n,
            "edges": [list(e) for e in member.graph.edges()],
            "witness_ref": 0,
            "certified_Z_upper": member.certified_forcing_upper,
            "certified_pt_upper": member.certified_pt_upper,
        }
        print(json.dumps(record, sort_keys=True))
    return 0


def cmd_bundle(args) -> int:
    g = load_graph(args.graph)
    chron = _load_chronology(args.chronology)
    if args.action == "induce":
        bundle = bundles.induced_path_bundle(g, chron, args.vertex)
        _emit(bundle.to_json_dict(host_ref=args.chronology, x=args.vertex))
        return 0
    if args.action == "reverse":
        base, new_chron = bundles.relocate_psd_set(g, chron, args.vertex)
        _emit({"base": sorted(base), "chronology": new_chron.to_json_dict()})
        return 0
    cert = bundles.certify_rigid_linkage(g, chron, args.vertex)
    _emit(cert.to_json_dict())
    return 0


def cmd_verify(args) -> int:
    if args.target != "bounds":
        raise ValueError(f"unknown verify target {args.target!r}")
    if args.graphs.startswith("all-n:"):
        max_n = int(args.graphs.split(":", 1)[1])
        stream = solvers.atlas_stream(max_n=max_n, connected_only=args.connected_only)
    else:
        stream = solvers.stream_from_file(args.graphs)
    checks = tuple(args.checks.split(","))
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(solvers.BOUNDS_HEADER)
    failures = 0
    for row in solvers.sweep_bounds(stream, checks=checks, jobs=args.jobs):
        writer.writerow(row.as_csv_fields())
        if not row.ok:
            failures += 1
    if failures:
        print(
            json.dumps({"error": "BoundFailure", "detail": f"{failures} rows failed"}),
            file=sys.stderr,
        )
        return 1
    return 0


def cmd_export(args) -> int:
    g = load_graph(args.graph)
    colors = None
    if args.slice is not None:
        if not args.chronology:
            raise ValueError("--slice needs --chronology")
        chron = _load_chronology(args.chronology)
        report = slices.time_slice(g, chron, args.slice)
        colors = {}
        for v in report.minus:
            colors[v] = "gray75"
        for v in report.at:
            colors[v] = "dodgerblue"
        for v in report.plus:
            colors[v] = "white"
    sys.stdout.write(to_dot(g, colors=colors))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="forcelab",
        description="Zero forcing processes, certificates, and exhaustive solvers",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="propagate from a blue set or validate a schedule")
    p.add_argument("--rule", required=True, choices=["z", "zplus", "pd", "rl"])
    p.add_argument("--graph", required=True)
    p.add_argument("--blue", default="")
    p.add_argument("--chronology")
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("solve", help="exhaustive parameter computation")
    p.add_argument(
        "--param",
        required=True,
        choices=["z", "zplus", "pd", "pt", "ptplus", "ppt", "thr", "thrplus"],
    )
    p.add_argument("--graph", required=True)
    p.add_argument("-m", type=int, default=None)
    p.add_argument("--cap", type=int, default=None)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("witness", help="convert or verify path-cover witnesses")
    p.add_argument("action", choices=["extract", "apply", "verify"])
    p.add_argument("--graph", required=True)
    p.add_argument("--chronology")
    p.add_argument("--witness")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("family", help="generate graphs from block partitions")
    p.add_argument("action", choices=["generate"])
    p.add_argument("--partitions", required=True)
    p.add_argument("--mode", default="extremes", choices=["extremes", "enumerate", "sample"])
    p.add_argument("--count", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("bundle", help="vertex-induced bundles, PSD reversal, RL certificates")
    p.add_argument("action", choices=["induce", "reverse", "certify"])
    p.add_argument("--graph", required=True)
    p.add_argument("--chronology", required=True)
    p.add_argument("--vertex", type=int, required=True)
    p.set_defaults(func=cmd_bundle)

    p = sub.add_parser("verify", help="sweep bound checks over a graph stream")
    p.add_argument("target", choices=["bounds"])
    p.add_argument("--graphs", required=True, help="'all-n:K' or a graph6 file")
    p.add_argument("--checks", default="bounds,thrplus,zeq")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--connected-only", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("export", help="write DOT, optionally colored by a time slice")
    p.add_argument("format", choices=["dot"])
    p.add_argument("--graph", required=True)
    p.add_argument("--slice", type=int, default=None)
    p.add_argument("--chronology")
    p.set_defaults(func=cmd_export)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ForcelabError as exc:
        print(
            json.dumps({"error": type(exc).__name__, "detail": str(exc)}),
            file=sys.stderr,
        )
        return 1
    except (ValueError, OSError) as exc:
        print(
            json.dumps({"error": type(exc).__name__, "detail": str(exc)}),
            file=sys.stderr,
        )
        return 1


if __name__ == "__main__":
    sys.exit(main())
