"""
Tests for file export, input parsers and configuration loading
"""
import json

import numpy as np
import openpyxl
import pandas as pd
import pytest

from src.core.distsim import simulate_fir
from src.core.exceptions import ConfigError
from src.core.experiments import ResultTable
from src.core.export import DataExporter
from src.core.filters import ClassicalFIR
from src.core.models import Graph
from src.core.parsers import EdgeListParser, JsonParser, MatrixMarketParser, SignalParser
from src.utils.config import load_experiment_config, parse_orders
from src.utils.security import sanitize_filename, validate_export_path, validate_input_path


def _make_table():
    table = ResultTable(name="demo", metadata={"seed": 7})
    table.add("classical", 1, "nse", 0.125)
    table.add("cev", 1, "nse", 1.0 / 3.0)
    return table


# ─────────────────────────────────────────────────────────────────
# Graph and matrix files
# ─────────────────────────────────────────────────────────────────


def test_edge_list_keeps_isolated_vertices(tmp_path):
    graph = Graph(n=5, edges=[(0, 1, 1.0), (1, 2, 0.5), (2, 3, 2.0)], name="demo")
    path = tmp_path / "demo.tsv"
    DataExporter.export_edge_list(graph, str(path))
    assert path.read_text().splitlines()[0] == "# n=5 directed=0"

    parsed = EdgeListParser(str(path)).parse()
    assert parsed.n == 5
    assert parsed.edges == graph.edges
    assert parsed.name == "demo"


def test_edge_list_without_header(tmp_path):
    path = tmp_path / "plain.txt"
    path.write_text("# a comment\n0 1\n1 2 3.5\n")
    graph = EdgeListParser(str(path)).parse()
    assert graph.n == 3
    assert graph.edges == [(0, 1, 1.0), (1, 2, 3.5)]


@pytest.mark.parametrize("content", ["0 1 2 3\n", "0 x\n", "0 0\n", "# nothing here\n"])
def test_malformed_edge_lists(tmp_path, content):
    path = tmp_path / "bad.tsv"
    path.write_text(content)
    with pytest.raises(ConfigError):
        EdgeListParser(str(path)).parse()


def test_missing_or_mistyped_inputs(tmp_path):
    with pytest.raises(ConfigError):
        EdgeListParser(str(tmp_path / "absent.tsv"))
    wrong = tmp_path / "graph.mtx"
    wrong.write_text("0 1\n")
    with pytest.raises(ConfigError):
        EdgeListParser(str(wrong))


def test_matrix_market_round_trip(tmp_path, rng):
    M = rng.standard_normal((4, 4))
    M[0, 3] = 0.0
    path = tmp_path / "target.mtx"
    DataExporter.export_matrix_market(M, str(path))
    assert np.allclose(MatrixMarketParser(str(path)).parse(), M, rtol=1e-15, atol=0.0)


# ─────────────────────────────────────────────────────────────────
# Signals
# ─────────────────────────────────────────────────────────────────


@pytest.mark.parametrize("complex_signal", [False, True])
def test_signal_csv_round_trip(tmp_path, rng, complex_signal):
    x = rng.standard_normal(6)
    if complex_signal:
        x = x + 1j * rng.standard_normal(6)
    path = tmp_path / "signal.csv"
    DataExporter.export_signal_csv(x, str(path))
    parsed = SignalParser(str(path)).parse()
    assert np.allclose(parsed, x, rtol=1e-15, atol=0.0)
    assert np.iscomplexobj(parsed) == complex_signal


def test_signal_parser_validates_nodes(tmp_path):
    path = tmp_path / "gaps.csv"
    pd.DataFrame({"node": [0, 2], "value": [1.0, 2.0]}).to_csv(path, index=False)
    with pytest.raises(ConfigError):
        SignalParser(str(path)).parse()

    unsorted = tmp_path / "unsorted.csv"
    pd.DataFrame({"node": [1, 0], "value": [5.0, 4.0]}).to_csv(unsorted, index=False)
    assert np.array_equal(SignalParser(str(unsorted)).parse(), [4.0, 5.0])


def test_observation_table_drops_labels(tmp_path):
    path = tmp_path / "obs.csv"
    pd.DataFrame({"time": ["t0", "t1", "t2"], "a": [1.0, 2.0, 3.0], "b": [0.0, 1.0, 0.5]}).to_csv(path, index=False)
    obs = SignalParser(str(path)).parse_observations()
    assert obs.shape == (3, 2)


# ─────────────────────────────────────────────────────────────────
# Result tables and traces
# ─────────────────────────────────────────────────────────────────


def test_results_csv_and_json(tmp_path):
    table = _make_table()
    csv_path = tmp_path / "res.csv"
    DataExporter.export_results_csv(table, str(csv_path))
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "family,K_or_iter,metric,value"
    frame = pd.read_csv(csv_path)
    assert frame["value"].iloc[1] == pytest.approx(1.0 / 3.0, rel=1e-15)

    json_path = tmp_path / "res.json"
    DataExporter.export_results_json(table, str(json_path))
    doc = JsonParser(str(json_path)).parse()
    assert doc["name"] == "demo"
    assert doc["metadata"]["seed"] == 7
    assert len(doc["rows"]) == 2


def test_results_excel(tmp_path):
    path = tmp_path / "res.xlsx"
    DataExporter.export_results_excel(_make_table(), str(path))
    wb = openpyxl.load_workbook(path)
    assert wb.sheetnames == ["Results", "Metadata"]
    ws = wb["Results"]
    assert [c.value for c in ws[1]] == ["family", "K_or_iter", "metric", "value"]
    assert ws.cell(row=1, column=1).font.bold
    assert ws.cell(row=2, column=1).value == "classical"


def test_trace_jsonl(tmp_path, ring12, rng):
    graph, S = ring12
    _, trace = simulate_fir(graph, S, ClassicalFIR(taps=[1.0, 0.5]), rng.standard_normal(graph.n),
                            record_messages=True)
    path = tmp_path / "trace.jsonl"
    DataExporter.export_trace_jsonl(trace, str(path))
    lines = path.read_text().splitlines()
    assert len(lines) == trace.rounds + 1 + len(trace.messages)
    summary = json.loads(lines[trace.rounds])
    assert summary["summary"] is True
    assert summary["total_scalars_sent"] == 2 * graph.num_edges


def test_unsafe_output_paths(tmp_path):
    with pytest.raises(ConfigError):
        DataExporter.export_json({}, "../x.json")
    with pytest.raises(ConfigError):
        DataExporter.export_json({}, str(tmp_path / "x.txt"))
    with pytest.raises(ConfigError):
        DataExporter.export_json({}, str(tmp_path / "missing" / "x.json"))


# ─────────────────────────────────────────────────────────────────
# Configuration and path helpers
# ─────────────────────────────────────────────────────────────────


def test_parse_orders():
    assert parse_orders("1..3,6") == [1, 2, 3, 6]
    assert parse_orders("4, 2,2") == [2, 4]
    for bad in ("0..2", "a", ""):
        with pytest.raises(ConfigError):
            parse_orders(bad)


def test_load_experiment_config(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"name": "wiener", "n": 24, "orders": "1..3"}))
    cfg = load_experiment_config(str(path), {"seed": 5, "n": None})
    assert (cfg.name, cfg.n, cfg.seed, cfg.orders) == ("wiener", 24, 5, [1, 2, 3])

    path.write_text(json.dumps({"name": "wiener", "colour": "red"}))
    with pytest.raises(ConfigError):
        load_experiment_config(str(path))
    path.write_text("{not json")
    with pytest.raises(ConfigError):
        load_experiment_config(str(path))


def test_path_helpers(tmp_path):
    assert sanitize_filename("a/b c.csv") == "a_b_c.csv"
    assert sanitize_filename("res_beam_-90.csv") == "res_beam_-90.csv"
    long_name = sanitize_filename("x" * 300 + ".csv")
    assert len(long_name) == 255 and long_name.endswith(".csv")
    assert validate_export_path(str(tmp_path / "out.csv"))
    assert not validate_export_path("/etc/out.csv")
    assert not validate_input_path(str(tmp_path / "absent.csv"))
