"""
Tests for the command-line surface and its exit codes
"""
import json

import numpy as np
import pytest

from src.cli import main
from src.cli.commands import CliConfig, _cli_config, build_parser
from src.core.design import DesignTarget, design_classical_ls, nse
from src.core.experiments.targets import target_exponential_kernel
from src.core.export import DataExporter
from src.core.generators import ring_graph
from src.core.parsers import SignalParser
from src.core.shift import build_shift, eigendecompose, normalize_spectral

RING = ["--generator", "ring", "--n", "12"]


def _printed_nse(out: str) -> float:
    token = [t for t in out.split() if t.startswith("NSE=")][-1]
    return float(token.split("=", 1)[1])


def _write_signal(tmp_path, n=12, seed=0, name="x.csv"):
    path = tmp_path / name
    DataExporter.export_signal_csv(np.random.default_rng(seed).standard_normal(n), str(path))
    return str(path)


# ─────────────────────────────────────────────────────────────────
# graph
# ─────────────────────────────────────────────────────────────────


def test_graph_command(tmp_path, capsys):
    out = tmp_path / "ring.tsv"
    assert main(["graph", "ring", "--n", "8", "--out", str(out)]) == 0
    assert "N=8 M=8 connected=True" in capsys.readouterr().out
    assert out.read_text().startswith("# n=8 directed=0")


def test_graph_command_is_deterministic(tmp_path):
    first, second = tmp_path / "a.tsv", tmp_path / "b.tsv"
    for out in (first, second):
        assert main(["graph", "community", "--n", "64", "--seed", "7", "--out", str(out)]) == 0
    assert first.read_bytes() == second.read_bytes()


def test_graph_grid_size(tmp_path, capsys):
    out = str(tmp_path / "grid.tsv")
    assert main(["graph", "grid", "--rows", "3", "--cols", "4", "--out", out]) == 0
    assert "N=12 M=17" in capsys.readouterr().out
    assert main(["graph", "grid", "--n", "10", "--out", out]) == 0
    assert "N=10 M=13" in capsys.readouterr().out
    assert main(["graph", "grid", "--n", "12", "--rows", "5", "--out", out]) == 2


def test_cli_config_collects_paths(tmp_path):
    assert CliConfig(command="graph").scalar_field == "real"
    assert CliConfig(command="graph").outputs == {}
    out = str(tmp_path / "g.tsv")
    args = build_parser().parse_args(["graph", "ring", "--n", "6", "--seed", "3", "--out", out])
    cfg = _cli_config(args)
    assert cfg.command == "graph" and cfg.seed == 3
    assert cfg.outputs == {"out": out}
    assert cfg.inputs == {}


@pytest.mark.parametrize("argv", [
    ["graph", "ring", "--n", "0", "--out", "OUT"],
    ["graph", "knn", "--n", "5", "--k", "5", "--out", "OUT"],
    ["graph", "ring", "--n", "8"],
])
def test_graph_usage_errors(tmp_path, argv):
    argv = [str(tmp_path / "g.tsv") if a == "OUT" else a for a in argv]
    assert main(argv) == 2


# ─────────────────────────────────────────────────────────────────
# design
# ─────────────────────────────────────────────────────────────────


def test_design_identity(tmp_path, capsys):
    out = tmp_path / "f.json"
    report = tmp_path / "report.json"
    code = main(["design", *RING, "--family", "cev", "--order", "2", "--target", "identity",
                 "--out", str(out), "--report", str(report)])
    assert code == 0
    assert _printed_nse(capsys.readouterr().out) <= 1e-12
    document = json.loads(out.read_text())
    assert document["format"] == "edgefilterlab-filter"
    assert document["filter"]["family"] == "cev"
    assert json.loads(report.read_text())["order"] == 2


def test_design_matches_library_call(tmp_path, capsys):
    code = main(["design", *RING, "--normalize", "--family", "classical", "--order", "6",
                 "--target", "exponential", "--out", str(tmp_path / "f.json")])
    assert code == 0
    printed = [t for t in capsys.readouterr().out.split() if t.startswith("NSE=")][-1]

    S = normalize_spectral(build_shift(ring_graph(12), "laplacian"))
    dec = eigendecompose(S)
    h = target_exponential_kernel(dec.eigvals, 3.0, 0.75)
    target = DesignTarget.from_modal(dec, h).as_matrix()
    f = design_classical_ls(dec.eigvals, h, 6)
    assert printed == f"NSE={nse(target, f.dense(S)):.17g}"


def test_design_rejects_infeasible_delta(tmp_path):
    code = main(["design", *RING, "--normalize", "--family", "evarma1", "--delta", "1.5",
                 "--out", str(tmp_path / "f.json")])
    assert code == 3


# ─────────────────────────────────────────────────────────────────
# apply / simulate
# ─────────────────────────────────────────────────────────────────


@pytest.mark.parametrize("family", ["cev", "siev", "evarma1"])
def test_apply_and_simulate_agree(tmp_path, capsys, family):
    filt = str(tmp_path / "f.json")
    assert main(["design", *RING, "--normalize", "--family", family, "--order", "3", "--out", filt]) == 0
    signal = _write_signal(tmp_path)

    applied = tmp_path / "applied.csv"
    simulated = tmp_path / "simulated.csv"
    trace = tmp_path / "trace.jsonl"
    assert main(["apply", *RING, "--filter", filt, "--signal", signal, "--out", str(applied)]) == 0
    assert main(["simulate", *RING, "--filter", filt, "--signal", signal, "--out", str(simulated),
                 "--trace", str(trace)]) == 0
    assert "violations=0" in capsys.readouterr().out

    y_apply = SignalParser(str(applied)).parse()
    y_sim = SignalParser(str(simulated)).parse()
    assert np.linalg.norm(y_apply - y_sim) <= 1e-9 * max(np.linalg.norm(y_apply), 1.0)
    assert trace.read_text().count('"summary": true') == 1


def test_zero_signal_gives_zero_output(tmp_path):
    filt = str(tmp_path / "f.json")
    assert main(["design", *RING, "--normalize", "--family", "cev", "--order", "3", "--out", filt]) == 0
    signal = tmp_path / "zero.csv"
    DataExporter.export_signal_csv(np.zeros(12), str(signal))
    out = tmp_path / "y.csv"
    assert main(["apply", *RING, "--filter", filt, "--signal", str(signal), "--out", str(out)]) == 0
    assert np.all(SignalParser(str(out)).parse() == 0.0)


def test_wrong_signal_length(tmp_path):
    filt = str(tmp_path / "f.json")
    assert main(["design", *RING, "--family", "cev", "--order", "2", "--target", "identity", "--out", filt]) == 0
    signal = _write_signal(tmp_path, n=7)
    code = main(["apply", *RING, "--filter", filt, "--signal", signal, "--out", str(tmp_path / "y.csv")])
    assert code == 4


def test_missing_filter_file(tmp_path):
    signal = _write_signal(tmp_path)
    code = main(["simulate", *RING, "--filter", str(tmp_path / "absent.json"), "--signal", signal,
                 "--out", str(tmp_path / "y.csv")])
    assert code == 2


# ─────────────────────────────────────────────────────────────────
# experiment
# ─────────────────────────────────────────────────────────────────


def test_experiment_command(tmp_path, capsys):
    out = tmp_path / "res.csv"
    code = main(["experiment", "consensus", "--generator", "complete", "--n", "8", "--orders", "1..2",
                 "--families", "classical,cev", "--out", str(out)])
    assert code == 0
    assert out.read_text().splitlines()[0] == "family,K_or_iter,metric,value"
    doc = json.loads((tmp_path / "res.json").read_text())
    assert doc["name"] == "consensus"
    assert "experiment=consensus" in capsys.readouterr().out


def test_experiment_usage_errors(tmp_path):
    out = str(tmp_path / "res.csv")
    assert main(["experiment", "nonexistent", "--out", out]) == 2
    assert main(["experiment", "tikhonov", "--generator", "ring", "--n", "8", "--delta", "1.5", "--out", out]) == 2
    assert main(["experiment", "response", "--orders", "0..2", "--out", out]) == 2


def test_experiment_rerun_is_byte_identical(tmp_path):
    outputs = []
    for name in ("a.csv", "b.csv"):
        out = tmp_path / name
        assert main(["experiment", "consensus", "--generator", "ring", "--n", "10", "--orders", "1..3",
                     "--families", "classical,nv,cev", "--out", str(out)]) == 0
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1]
    assert len(outputs[0].decode().splitlines()) == 1 + 3 * 3


def test_experiment_json_is_identical_across_runs(tmp_path):
    out = tmp_path / "res.csv"
    argv = ["experiment", "consensus", "--generator", "ring", "--n", "8", "--orders", "1..2",
            "--families", "classical,cev", "--out", str(out)]
    payloads = []
    for _ in range(2):
        assert main(argv) == 0
        payloads.append(out.with_suffix(".json").read_bytes())
    assert payloads[0] == payloads[1]
    assert "created" not in json.loads(payloads[0])
