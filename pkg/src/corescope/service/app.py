"""FastAPI service exposing the analysis pipeline.

Endpoints operate on files reachable from the service process: they read
edge lists / graph caches, write result files under the requested output
directory, and return a machine-readable summary.  The CLI is a thin
client of these endpoints.
"""

from __future__ import annotations

import importlib.resources
import math
from pathlib import Path

import jsonschema
import numpy as np
from fastapi import FastAPI, HTTPException

from .. import equilibrium as eq
from .. import graph as gs
from .. import kcore, powerlaw, temporal
from ..errors import CorescopeError
from ..reporting import (
    read_csv,
    read_json,
    read_observed_series,
    write_csv,
    write_json,
)
from . import models as m

app = FastAPI(title="corescope", version="0.1.0")


def _fail(status: int, message: str):
    raise HTTPException(status_code=status, detail=message)


def _outdir(path: str) -> Path:
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _load_graph(path: str) -> gs.Graph:
    try:
        return gs.load_binary(path)
    except FileNotFoundError:
        _fail(400, f"graph cache not found: {path}")
    except CorescopeError as exc:
        _fail(400, f"{path}: {exc}")


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/ingest", response_model=m.IngestResponse)
def ingest(req: m.IngestRequest):
    try:
        graph = gs.ingest_edge_list(req.input, format=req.format)
    except FileNotFoundError:
        _fail(400, f"input not found: {req.input}")
    except CorescopeError as exc:
        _fail(400, str(exc))
    out = _outdir(req.out)
    graph_path = out / "graph.bin"
    summary_path = out / "ingest_summary.json"
    gs.save_binary(graph, graph_path)
    max_degree = int(graph.degrees().max()) if graph.n else 0
    write_json(summary_path, {"seed": req.seed, "n": graph.n, "m": graph.m,
                              "max_degree": max_degree})
    return m.IngestResponse(seed=req.seed, n=graph.n, m=graph.m,
                            max_degree=max_degree, graph_path=str(graph_path),
                            summary_path=str(summary_path))


def _coreness_rows(graph: gs.Graph, cv: kcore.CorenessVector):
    degs = graph.degrees()
    for i in range(graph.n):
        yield int(graph.id_map[i]), int(degs[i]), int(cv.k_s[i])


@app.post("/kcore", response_model=m.KcoreResponse)
def kcore_endpoint(req: m.KcoreRequest):
    graph = _load_graph(req.input)
    cv = kcore.decompose(graph)
    out = _outdir(req.out)
    coreness_path = out / "coreness.csv"
    write_csv(coreness_path, ["external_id", "degree", "coreness"],
              _coreness_rows(graph, cv), seed=req.seed)
    return m.KcoreResponse(seed=req.seed, n=graph.n, k_max=cv.k_max,
                           coreness_path=str(coreness_path))


@app.post("/resilience", response_model=m.ResilienceResponse)
def resilience(req: m.ResilienceRequest):
    for level in req.survival:
        if not 0.0 < level < 1.0:
            _fail(400, f"survival level must be in (0, 1), got {level}")
    out = _outdir(req.out)
    ccdf_rows, cat_rows = [], []
    datasets: dict[str, m.DatasetResilience] = {}
    for path in req.inputs:
        name = Path(path).stem
        graph = _load_graph(path)
        cv = kcore.decompose(graph)
        dist = kcore.ccdf(cv)
        write_csv(out / f"coreness_{name}.csv",
                  ["external_id", "degree", "coreness"],
                  _coreness_rows(graph, cv), seed=req.seed)
        for k in range(dist.k_max + 1):
            ccdf_rows.append((name, k, int(dist.counts[k]),
                              float(dist.fractions[k])))
        catastrophic = {}
        for level in req.survival:
            big_k = kcore.catastrophic_K(dist, level)
            cat_rows.append((name, level, big_k))
            catastrophic[format(level, ".12g")] = big_k
        datasets[name] = m.DatasetResilience(k_max=cv.k_max,
                                             catastrophic=catastrophic)
    ccdf_path = out / "ccdf.csv"
    cat_path = out / "catastrophic.csv"
    write_csv(ccdf_path, ["dataset", "K", "count", "fraction"], ccdf_rows,
              seed=req.seed)
    write_csv(cat_path, ["dataset", "survival", "K"], cat_rows, seed=req.seed)
    write_json(out / "resilience.json", {
        "seed": req.seed,
        "datasets": {name: {"k_max": d.k_max, "catastrophic": d.catastrophic}
                     for name, d in datasets.items()},
    })
    return m.ResilienceResponse(seed=req.seed, datasets=datasets,
                                ccdf_path=str(ccdf_path),
                                catastrophic_path=str(cat_path))


@app.post("/equilibrium", response_model=m.EquilibriumResponse)
def equilibrium(req: m.EquilibriumRequest):
    graph = _load_graph(req.input)
    try:
        env = eq.Environment(c=req.c, b=req.b)
    except ValueError as exc:
        _fail(400, str(exc))
    cv = kcore.decompose(graph)
    result = eq.equilibrium_network(graph, cv, env)
    report = eq.verify_equilibrium(graph, result, env)
    out = _outdir(req.out)
    members_path = out / "members.csv"
    write_csv(members_path, ["external_id", "utility"],
              ((int(graph.id_map[i]), int(u))
               for i, u in zip(result.member_set, result.utilities)),
              seed=req.seed)
    summary_path = out / "equilibrium.json"
    write_json(summary_path, {
        "seed": req.seed, "c": req.c, "b": req.b, "K": result.K,
        "size": result.size, "stable": report.passed,
        "member_violations": report.member_violations,
        "outsider_violations": report.outsider_violations,
    })
    return m.EquilibriumResponse(
        seed=req.seed, K=result.K, size=result.size, stable=report.passed,
        member_violations=report.member_violations,
        outsider_violations=report.outsider_violations,
        members_path=str(members_path), summary_path=str(summary_path))


@app.post("/unravel", response_model=m.UnravelResponse)
def unravel(req: m.UnravelRequest):
    graph = _load_graph(req.input)
    dist = kcore.ccdf(kcore.decompose(graph))
    try:
        sched = eq.UnravelSchedule(k0=req.k0, rate=req.rate, t0=req.t0)
        points = eq.unravel(dist, sched, horizon=req.horizon, step=req.step)
    except ValueError as exc:
        _fail(400, str(exc))
    out = _outdir(req.out)
    csv_path = out / "unravel.csv"
    write_csv(csv_path, ["t", "K", "remaining", "fraction"],
              ((p.t, p.K, p.remaining, p.fraction) for p in points),
              seed=req.seed)
    return m.UnravelResponse(seed=req.seed, n_points=len(points),
                             final_remaining=points[-1].remaining,
                             csv_path=str(csv_path))


@app.post("/fit", response_model=m.FitResponse)
def fit(req: m.FitRequest):
    graph = _load_graph(req.input)
    dist = kcore.ccdf(kcore.decompose(graph))
    try:
        observed = read_observed_series(req.observed)
    except FileNotFoundError:
        _fail(400, f"observed series not found: {req.observed}")
    except (CorescopeError, ValueError) as exc:
        _fail(400, str(exc))
    if req.rate <= 0:
        _fail(400, f"rate must be positive, got {req.rate}")
    # replication convention: active users have coreness strictly above
    # K(t), and 100% is everyone with coreness above 0
    total = dist.count_at(1)
    if total == 0:
        _fail(400, "graph has no nodes with coreness above 0")
    predicted = []
    for t, _ in observed:
        K = req.k0 + int(math.floor(req.rate * t))
        predicted.append((t, 100.0 * dist.count_at(K + 1) / total))
    try:
        r2 = eq.fit_quality(predicted, observed, align_tol=0.0)
    except ValueError as exc:
        _fail(400, str(exc))
    out = _outdir(req.out)
    residuals_path = out / "fit_residuals.csv"
    write_csv(residuals_path, ["t", "K", "observed", "predicted", "residual"],
              ((t, req.k0 + int(math.floor(req.rate * t)), obs, pred,
                obs - pred)
               for (t, obs), (_, pred) in zip(observed, predicted)),
              seed=req.seed)
    json_path = out / "fit.json"
    write_json(json_path, {"seed": req.seed, "r_squared": r2, "k0": req.k0,
                           "rate": req.rate, "n_points": len(observed)})
    return m.FitResponse(seed=req.seed, r_squared=r2, n_points=len(observed),
                         json_path=str(json_path),
                         residuals_path=str(residuals_path))


def _load_degree_sample(req: m.PlfitRequest) -> powerlaw.DegreeSample:
    kind = req.kind
    if kind == "auto":
        try:
            with open(req.input, "rb") as fh:
                kind = "graph" if fh.read(3) == b"CLG" else "histogram"
        except FileNotFoundError:
            _fail(400, f"input not found: {req.input}")
    if kind == "graph":
        graph = _load_graph(req.input)
        return powerlaw.DegreeSample.from_degrees(graph.degrees())
    header, rows = read_csv(req.input)
    if len(header) < 2:
        _fail(400, f"{req.input}: expected columns degree,count")
    return powerlaw.DegreeSample.from_histogram(
        {int(r[0]): int(r[1]) for r in rows})


@app.post("/plfit", response_model=m.PlfitResponse)
def plfit(req: m.PlfitRequest):
    if req.trials < 1:
        _fail(400, f"trials must be >= 1, got {req.trials}")
    try:
        sample = _load_degree_sample(req)
        fit_row, boot, coverage = powerlaw.fit_power_law(
            sample, trials=req.trials, seed=req.seed)
    except (CorescopeError, ValueError) as exc:
        _fail(400, str(exc))
    dataset = req.dataset or Path(req.input).stem
    out = _outdir(req.out)
    csv_path = out / "plfit.csv"
    write_csv(csv_path,
              ["dataset", "deg_min", "alpha", "n_tail", "D", "p",
               "range_decades", "tail_pct"],
              [(dataset, fit_row.deg_min_hat, fit_row.alpha_hat,
                fit_row.n_tail, fit_row.D, fit_row.p_value,
                fit_row.range_decades, coverage.tail_percent)],
              seed=req.seed)
    trials_path = None
    if req.emit_trials:
        trials_path = out / "plfit_trials.csv"
        write_csv(trials_path, ["trial", "D"],
                  enumerate(float(d) for d in boot.synthetic_d),
                  seed=req.seed)
    return m.PlfitResponse(
        seed=req.seed, dataset=dataset, deg_min=fit_row.deg_min_hat,
        alpha=fit_row.alpha_hat, n_tail=fit_row.n_tail, D=fit_row.D,
        p=fit_row.p_value, range_decades=fit_row.range_decades,
        tail_pct=coverage.tail_percent, flagged=coverage.flagged,
        csv_path=str(csv_path),
        trials_path=str(trials_path) if trials_path else None)


@app.post("/timeslice", response_model=m.TimesliceResponse)
def timeslice(req: m.TimesliceRequest):
    graph = _load_graph(req.input)
    try:
        spec = temporal.SliceSpec(
            width=req.width,
            origin=int(graph.id_map[0]) if req.origin is None else req.origin)
        stats = temporal.slice_stats(graph, spec)
    except ValueError as exc:
        _fail(400, str(exc))
    out = _outdir(req.out)
    csv_path = out / "timeslice.csv"
    write_csv(csv_path,
              ["t", "slice_start", "slice_end", "n", "e_in", "e_p", "e_f",
               "avg_deg_in", "P", "F", "baseline_P", "baseline_F"],
              ((s.index, s.start, s.end, s.node_count, s.internal_edges,
                s.past_edges, s.future_edges, s.internal_avg_degree,
                s.mean_past_distance, s.mean_future_distance,
                s.baseline_past, s.baseline_future) for s in stats),
              seed=req.seed)
    return m.TimesliceResponse(seed=req.seed, n_slices=len(stats),
                               csv_path=str(csv_path))


@app.post("/atrisk", response_model=m.AtRiskResponse)
def atrisk(req: m.AtRiskRequest):
    graph = _load_graph(req.input)
    cv = kcore.decompose(graph)
    try:
        series = temporal.at_risk_series(graph, cv, slice_width=req.width,
                                         threshold=req.threshold)
    except ValueError as exc:
        _fail(400, str(exc))
    out = _outdir(req.out)
    csv_path = out / "atrisk.csv"
    write_csv(csv_path, ["t", "fraction", "ci_low", "ci_high"],
              ((p.index,
                None if p.fraction is None else float(p.fraction),
                p.ci_low, p.ci_high) for p in series.points),
              seed=req.seed)
    return m.AtRiskResponse(seed=req.seed, threshold=series.threshold,
                            n_slices=len(series.points),
                            csv_path=str(csv_path))


REPORT_ARTIFACTS = {
    "summary": "ingest_summary.json",
    "power_law": "plfit.csv",
    "resilience": "resilience.json",
    "ccdf": "ccdf.csv",
    "catastrophic": "catastrophic.csv",
    "at_risk": "atrisk.csv",
    "unravel_fit": "fit.json",
}


def load_report_schema() -> dict:
    ref = importlib.resources.files("corescope") / "report_schema.json"
    import json
    return json.loads(ref.read_text(encoding="utf-8"))


def _opt_float(token: str):
    return float(token) if token else None


@app.post("/report", response_model=m.ReportResponse)
def report(req: m.ReportRequest):
    out = Path(req.out)
    missing = [name for name in REPORT_ARTIFACTS.values()
               if not (out / name).exists()]
    if missing:
        _fail(400, "missing artifacts: " + ", ".join(sorted(missing)))
    summary = read_json(out / "ingest_summary.json")
    _, plfit_rows = read_csv(out / "plfit.csv")
    resilience_summary = read_json(out / "resilience.json")
    _, ccdf_rows = read_csv(out / "ccdf.csv")
    _, cat_rows = read_csv(out / "catastrophic.csv")
    _, atrisk_rows = read_csv(out / "atrisk.csv")
    fit_summary = read_json(out / "fit.json")
    payload = {
        "schema_version": 1,
        "seed": req.seed,
        "summary": {"n": summary["n"], "m": summary["m"],
                    "max_degree": summary["max_degree"]},
        "power_law": [
            {"dataset": r[0], "deg_min": int(r[1]), "alpha": float(r[2]),
             "n_tail": int(r[3]), "D": float(r[4]), "p": float(r[5]),
             "range_decades": float(r[6]), "tail_pct": float(r[7])}
            for r in plfit_rows],
        "resilience": {
            "k_max": {name: d["k_max"]
                      for name, d in resilience_summary["datasets"].items()},
            "ccdf": [{"dataset": r[0], "K": int(r[1]), "count": int(r[2]),
                      "fraction": float(r[3])} for r in ccdf_rows],
            "catastrophic": [{"dataset": r[0], "survival": float(r[1]),
                              "K": int(r[2])} for r in cat_rows],
        },
        "at_risk": [{"t": int(r[0]), "fraction": _opt_float(r[1]),
                     "ci_low": _opt_float(r[2]), "ci_high": _opt_float(r[3])}
                    for r in atrisk_rows],
        "unravel_fit": {"r_squared": fit_summary["r_squared"],
                        "k0": fit_summary["k0"], "rate": fit_summary["rate"],
                        "n_points": fit_summary["n_points"]},
    }
    schema = load_report_schema()
    try:
        jsonschema.validate(payload, schema)
    except jsonschema.ValidationError as exc:
        _fail(500, f"report failed schema validation: {exc.message}")
    report_path = out / "report.json"
    write_json(report_path, payload)
    return m.ReportResponse(seed=req.seed, report_path=str(report_path),
                            schema_version=1)
