"""Command-line client for the analysis service.

Each subcommand posts one request to the service and prints a short
summary of what was written.  With ``--server URL`` an external instance
is used; otherwise the service runs in-process, so the CLI works without
any server setup.
"""

from __future__ import annotations

import argparse
import sys


def _post(args, endpoint: str, payload: dict) -> dict | None:
    """POST to the service; returns the response body or None on failure."""
    if args.server:
        import httpx

        resp = httpx.post(args.server.rstrip("/") + endpoint, json=payload,
                          timeout=600.0)
    else:
        import warnings

        with warnings.catch_warnings():
            warnings.simplefilter("ignore", DeprecationWarning)
            from fastapi.testclient import TestClient

        from .service import app

        with TestClient(app, raise_server_exceptions=False) as client:
            resp = client.post(endpoint, json=payload)
    if resp.status_code != 200:
        try:
            detail = resp.json().get("detail", resp.text)
        except ValueError:
            detail = resp.text
        print(f"error: {detail}", file=sys.stderr)
        return None
    return resp.json()


def cmd_ingest(args) -> int:
    body = _post(args, "/ingest", {
        "input": args.input, "format": args.format, "out": args.out,
        "seed": args.seed})
    if body is None:
        return 1
    print(f"ingested {body['n']} nodes, {body['m']} edges "
          f"(max degree {body['max_degree']}) -> {body['graph_path']}")
    return 0


def cmd_kcore(args) -> int:
    body = _post(args, "/kcore", {
        "input": args.input, "out": args.out, "seed": args.seed})
    if body is None:
        return 1
    print(f"coreness for {body['n']} nodes, k_max={body['k_max']} "
          f"-> {body['coreness_path']}")
    return 0


def cmd_resilience(args) -> int:
    body = _post(args, "/resilience", {
        "inputs": args.input, "survival": args.survival, "out": args.out,
        "seed": args.seed})
    if body is None:
        return 1
    for name, d in sorted(body["datasets"].items()):
        cat = ", ".join(f"K({s})={k}" for s, k in sorted(d["catastrophic"].items()))
        print(f"{name}: k_max={d['k_max']} {cat}")
    print(f"wrote {body['ccdf_path']} and {body['catastrophic_path']}")
    return 0


def cmd_equilibrium(args) -> int:
    body = _post(args, "/equilibrium", {
        "input": args.input, "c": args.c, "b": args.b, "out": args.out,
        "seed": args.seed})
    if body is None:
        return 1
    status = "stable" if body["stable"] else "UNSTABLE"
    print(f"K={body['K']} members={body['size']} ({status}) "
          f"-> {body['members_path']}")
    return 0


def cmd_unravel(args) -> int:
    body = _post(args, "/unravel", {
        "input": args.input, "k0": args.k0, "rate": args.rate, "t0": args.t0,
        "horizon": args.horizon, "step": args.step, "out": args.out,
        "seed": args.seed})
    if body is None:
        return 1
    print(f"{body['n_points']} steps, {body['final_remaining']} nodes left "
          f"at the horizon -> {body['csv_path']}")
    return 0


def cmd_fit(args) -> int:
    body = _post(args, "/fit", {
        "input": args.input, "observed": args.observed, "k0": args.k0,
        "rate": args.rate, "out": args.out, "seed": args.seed})
    if body is None:
        return 1
    print(f"R^2={body['r_squared']:.4f} over {body['n_points']} points "
          f"-> {body['json_path']}")
    return 0


def cmd_plfit(args) -> int:
    body = _post(args, "/plfit", {
        "input": args.input, "kind": args.kind, "dataset": args.dataset,
        "trials": args.trials, "emit_trials": args.emit_trials,
        "out": args.out, "seed": args.seed})
    if body is None:
        return 1
    flag = " [insufficient tail coverage]" if body["flagged"] else ""
    print(f"{body['dataset']}: deg_min={body['deg_min']} "
          f"alpha={body['alpha']:.3f} n_tail={body['n_tail']} "
          f"D={body['D']:.4f} p={body['p']:.3f}{flag} -> {body['csv_path']}")
    return 0


def cmd_timeslice(args) -> int:
    body = _post(args, "/timeslice", {
        "input": args.input, "width": args.width, "origin": args.origin,
        "out": args.out, "seed": args.seed})
    if body is None:
        return 1
    print(f"{body['n_slices']} slices -> {body['csv_path']}")
    return 0


def cmd_atrisk(args) -> int:
    body = _post(args, "/atrisk", {
        "input": args.input, "width": args.width,
        "threshold": args.threshold, "out": args.out, "seed": args.seed})
    if body is None:
        return 1
    print(f"{body['n_slices']} slices at threshold {body['threshold']:g} "
          f"-> {body['csv_path']}")
    return 0


def cmd_report(args) -> int:
    body = _post(args, "/report", {"out": args.out, "seed": args.seed})
    if body is None:
        return 1
    print(f"report (schema v{body['schema_version']}) "
          f"-> {body['report_path']}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="corescope",
        description="Graph resilience and departure-cascade analysis.")
    parser.add_argument("--server", default=None,
                        help="base URL of a running service; default runs in-process")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help):
        p = sub.add_parser(name, help=help)
        p.set_defaults(func=func)
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--seed", type=int, default=0)
        return p

    p = add("ingest", cmd_ingest, "parse an edge list into a graph cache")
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=["pair", "adj"], default="pair")

    p = add("kcore", cmd_kcore, "coreness of every node")
    p.add_argument("--input", required=True, help="graph cache from ingest")

    p = add("resilience", cmd_resilience,
            "coreness CCDF and catastrophic thresholds for one or more graphs")
    p.add_argument("--input", required=True, action="append",
                   help="graph cache; repeat for multiple datasets")
    p.add_argument("--survival", type=float, action="append", default=None,
                   help="surviving fraction defining catastrophe (default 0.2)")

    p = add("equilibrium", cmd_equilibrium,
            "stable membership under participation cost and benefit")
    p.add_argument("--input", required=True)
    p.add_argument("--c", type=int, required=True, help="participation cost")
    p.add_argument("--b", type=int, required=True, help="per-friend benefit")

    p = add("unravel", cmd_unravel, "simulate a rising-threshold cascade")
    p.add_argument("--input", required=True)
    p.add_argument("--k0", type=int, default=3, help="threshold at t0")
    p.add_argument("--rate", type=float, required=True,
                   help="threshold increase per time unit")
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--horizon", type=float, required=True)
    p.add_argument("--step", type=float, default=1.0)

    p = add("fit", cmd_fit, "compare a cascade prediction to an observed series")
    p.add_argument("--input", required=True)
    p.add_argument("--observed", required=True,
                   help="CSV of date,value with values in percent")
    p.add_argument("--k0", type=int, default=3)
    p.add_argument("--rate", type=float, required=True,
                   help="threshold increase per day")

    p = add("plfit", cmd_plfit, "power-law hypothesis test on the degrees")
    p.add_argument("--input", required=True,
                   help="graph cache or degree,count histogram CSV")
    p.add_argument("--kind", choices=["auto", "graph", "histogram"],
                   default="auto")
    p.add_argument("--dataset", default=None, help="label for the output row")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--emit-trials", action="store_true",
                   help="also write the bootstrap KS distances")

    p = add("timeslice", cmd_timeslice, "edge flow between id slices")
    p.add_argument("--input", required=True)
    p.add_argument("--width", type=int, required=True, help="ids per slice")
    p.add_argument("--origin", type=int, default=None)

    p = add("atrisk", cmd_atrisk,
            "per-slice fraction of nodes below a coreness threshold")
    p.add_argument("--input", required=True)
    p.add_argument("--width", type=int, required=True)
    p.add_argument("--threshold", type=float, default=None,
                   help="coreness cutoff (default: median)")

    add("report", cmd_report,
        "bundle previous results in --out into a validated report")

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "resilience" and args.survival is None:
        args.survival = [0.2]
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
