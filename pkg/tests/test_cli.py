import json

import numpy as np
import pytest

from corescope.cli import build_parser, main


@pytest.fixture()
def edge_file(tmp_path):
    rng = np.random.default_rng(11)
    edges = set()
    while len(edges) < 1500:
        a, b = (int(x) for x in rng.integers(0, 400, 2))
        if a != b:
            edges.add((min(a, b), max(a, b)))
    path = tmp_path / "edges.txt"
    path.write_text("".join(f"{a} {b}\n" for a, b in sorted(edges)))
    return path


@pytest.fixture()
def graph_dir(edge_file, tmp_path):
    out = tmp_path / "out"
    assert main(["ingest", "--input", str(edge_file),
                 "--out", str(out)]) == 0
    return out


def test_parser_rejects_unknown_command():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["frobnicate"])


def test_ingest_writes_cache_and_summary(edge_file, tmp_path, capsys):
    out_dir = tmp_path / "fresh"
    assert main(["ingest", "--input", str(edge_file),
                 "--out", str(out_dir)]) == 0
    assert (out_dir / "graph.bin").exists()
    summary = json.loads((out_dir / "ingest_summary.json").read_text())
    assert summary["n"] == 400
    assert "400 nodes" in capsys.readouterr().out


def test_ingest_malformed_line_fails_nonzero(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("1 2\nnot numbers\n")
    assert main(["ingest", "--input", str(bad),
                 "--out", str(tmp_path / "o")]) == 1
    assert "error:" in capsys.readouterr().err


def test_kcore_and_resilience(graph_dir, capsys):
    g = str(graph_dir / "graph.bin")
    assert main(["kcore", "--input", g, "--out", str(graph_dir)]) == 0
    assert main(["resilience", "--input", g, "--survival", "0.2",
                 "--survival", "0.5", "--out", str(graph_dir)]) == 0
    out = capsys.readouterr().out
    assert "k_max=" in out
    assert (graph_dir / "ccdf.csv").exists()
    assert (graph_dir / "catastrophic.csv").exists()


def test_equilibrium_unravel_fit(graph_dir, tmp_path, capsys):
    g = str(graph_dir / "graph.bin")
    assert main(["equilibrium", "--input", g, "--c", "3", "--b", "2",
                 "--out", str(graph_dir)]) == 0
    assert main(["unravel", "--input", g, "--k0", "1", "--rate", "1",
                 "--horizon", "20", "--out", str(graph_dir)]) == 0
    obs = tmp_path / "obs.csv"
    obs.write_text("date,value\n0,90\n2,50\n4,10\n")
    assert main(["fit", "--input", g, "--observed", str(obs),
                 "--k0", "1", "--rate", "0.5",
                 "--out", str(graph_dir)]) == 0
    out = capsys.readouterr().out
    assert "stable" in out
    assert "R^2=" in out
    assert (graph_dir / "fit_residuals.csv").exists()


def test_plfit_histogram_input(tmp_path, capsys):
    from corescope.powerlaw import sample_tail

    rng = np.random.default_rng(2)
    degs = sample_tail(rng, 3000, 2, 2.4)
    values, counts = np.unique(degs, return_counts=True)
    hist = tmp_path / "hist.csv"
    hist.write_text("degree,count\n" + "".join(
        f"{v},{c}\n" for v, c in zip(values, counts)))
    assert main(["plfit", "--input", str(hist), "--trials", "10",
                 "--dataset", "demo", "--out", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert out.startswith("demo:")
    first = (tmp_path / "plfit.csv").read_bytes()
    assert main(["plfit", "--input", str(hist), "--trials", "10",
                 "--dataset", "demo", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "plfit.csv").read_bytes() == first


def test_timeslice_atrisk_report(graph_dir, edge_file, tmp_path, capsys):
    g = str(graph_dir / "graph.bin")
    assert main(["timeslice", "--input", g, "--width", "100",
                 "--out", str(graph_dir)]) == 0
    assert main(["atrisk", "--input", g, "--width", "100",
                 "--out", str(graph_dir)]) == 0
    # report needs the full artifact set; build the rest then bundle
    assert main(["resilience", "--input", g, "--out", str(graph_dir)]) == 0
    assert main(["plfit", "--input", g, "--trials", "5",
                 "--out", str(graph_dir)]) == 0
    obs = tmp_path / "obs.csv"
    obs.write_text("date,value\n0,80\n1,30\n")
    assert main(["fit", "--input", g, "--observed", str(obs),
                 "--k0", "1", "--rate", "1", "--out", str(graph_dir)]) == 0
    assert main(["report", "--out", str(graph_dir)]) == 0
    assert (graph_dir / "report.json").exists()
    assert "schema v1" in capsys.readouterr().out


def test_report_missing_artifacts_exit_code(tmp_path, capsys):
    assert main(["report", "--out", str(tmp_path)]) == 1
    assert "missing artifacts" in capsys.readouterr().err


def test_seed_flag_lands_in_output(graph_dir):
    g = str(graph_dir / "graph.bin")
    assert main(["kcore", "--input", g, "--seed", "42",
                 "--out", str(graph_dir)]) == 0
    first_line = (graph_dir / "coreness.csv").read_text().splitlines()[0]
    assert first_line == "# seed=42"
