"""
Export functionality for graphs, signals, filters and result tables
"""
import json
import logging
from typing import Any, Dict

import numpy as np
import pandas as pd
import scipy.io
import scipy.sparse

from .distsim import SimulationTrace
from .exceptions import ConfigError
from .experiments import ResultTable
from .models import Graph
from ..utils.security import validate_export_path

logger = logging.getLogger(__name__)

# 17 significant digits round-trip every double exactly
FLOAT_FORMAT = "%.17g"


def _check_path(output_path: str, extensions: tuple):
    if not validate_export_path(output_path, allowed_extensions=extensions):
        logger.error(f"Invalid or unsafe output path: {output_path}")
        raise ConfigError(f"Invalid or unsafe output path: {output_path}")


def _json_default(value):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, complex):
        return [value.real, value.imag]
    return str(value)


class DataExporter:
    """Export experiment data to various formats"""

    @staticmethod
    def export_results_csv(table: ResultTable, output_path: str):
        """
        Export a result table to CSV (family, K_or_iter, metric, value)

        Args:
            table: Result table
            output_path: Output file path
        """
        _check_path(output_path, ('.csv',))
        table.to_frame().to_csv(output_path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        logger.info(f"Wrote {len(table.rows)} result rows to {output_path}")

    @staticmethod
    def export_results_json(table: ResultTable, output_path: str):
        """Export a result table with its metadata to JSON"""
        DataExporter.export_json(table.to_dict(), output_path)

    @staticmethod
    def export_results_excel(table: ResultTable, output_path: str):
        """
        Export a result table to Excel, one sheet for rows and one for metadata

        Args:
            table: Result table
            output_path: Output file path
        """
        import openpyxl
        from openpyxl.styles import Font, PatternFill

        _check_path(output_path, ('.xlsx',))

        wb = openpyxl.Workbook()
        ws = wb.active
        ws.title = "Results"
        frame = table.to_frame()

        for col_idx, header in enumerate(frame.columns, start=1):
            cell = ws.cell(row=1, column=col_idx, value=header)
            cell.font = Font(bold=True)
            cell.fill = PatternFill(start_color="CCCCCC", end_color="CCCCCC", fill_type="solid")

        for row_idx, row in enumerate(frame.itertuples(index=False), start=2):
            for col_idx, value in enumerate(row, start=1):
                ws.cell(row=row_idx, column=col_idx, value=value.item() if isinstance(value, np.generic) else value)

        meta = wb.create_sheet("Metadata")
        entries = dict(table.to_dict()["metadata"], created=table.created)
        for row_idx, (key, value) in enumerate(sorted(entries.items()), start=1):
            meta.cell(row=row_idx, column=1, value=key).font = Font(bold=True)
            meta.cell(row=row_idx, column=2, value=json.dumps(value, default=_json_default))

        for column in ws.columns:
            max_length = max(len(str(cell.value)) for cell in column)
            ws.column_dimensions[column[0].column_letter].width = min(max_length + 2, 50)

        wb.save(output_path)
        logger.info(f"Wrote Excel workbook {output_path}")

    @staticmethod
    def export_beampattern_csv(frame: pd.DataFrame, output_path: str):
        """Export one beampattern (angle_deg plus one dB column per pattern)"""
        _check_path(output_path, ('.csv',))
        frame.to_csv(output_path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")

    @staticmethod
    def export_signal_csv(signal: np.ndarray, output_path: str):
        """
        Export a graph signal to CSV

        Real signals get columns (node, value); complex signals (node, re, im).
        """
        _check_path(output_path, ('.csv',))
        signal = np.asarray(signal)
        nodes = np.arange(signal.shape[0])
        if np.iscomplexobj(signal):
            frame = pd.DataFrame({"node": nodes, "re": signal.real, "im": signal.imag})
        else:
            frame = pd.DataFrame({"node": nodes, "value": signal.astype(float)})
        frame.to_csv(output_path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")

    @staticmethod
    def export_json(data: Dict[str, Any], output_path: str):
        """Export a dictionary (filter spec, design report, summary) to JSON"""
        _check_path(output_path, ('.json',))
        with open(output_path, 'w', encoding='utf-8') as f:
            json.dump(data, f, indent=2, default=_json_default)

    @staticmethod
    def export_trace_jsonl(trace: SimulationTrace, output_path: str):
        """
        Export a simulation trace as JSON lines

        One line per round (round, messages, scalars, max_state_delta) followed by
        a summary line; the full message dump follows when it was recorded.
        """
        _check_path(output_path, ('.jsonl',))
        with open(output_path, 'w', encoding='utf-8') as f:
            for record in trace.records():
                f.write(json.dumps(record) + "\n")
            summary = {
                "summary": True,
                "rounds": trace.rounds,
                "total_scalars_sent": trace.total_scalars_sent,
                "violations": [list(v) for v in trace.violations],
            }
            f.write(json.dumps(summary) + "\n")
            for message in trace.messages or []:
                f.write(json.dumps(message) + "\n")
        logger.info(f"Wrote trace of {trace.rounds} rounds to {output_path}")

    @staticmethod
    def export_edge_list(graph: Graph, output_path: str):
        """
        Export a graph as a tab-separated edge list

        The header line "# n=<n> directed=<0|1>" keeps isolated vertices and
        the orientation.
        """
        _check_path(output_path, ('.tsv', '.txt', '.edges'))
        with open(output_path, 'w', encoding='utf-8', newline="\n") as f:
            f.write(f"# n={graph.n} directed={int(graph.directed)}\n")
            for i, j, w in graph.edges:
                f.write(f"{i}\t{j}\t{FLOAT_FORMAT % w}\n")
        logger.info(f"Wrote {graph.num_edges} edges to {output_path}")

    @staticmethod
    def export_matrix_market(matrix: np.ndarray, output_path: str):
        """Export a dense matrix in Matrix Market coordinate format"""
        _check_path(output_path, ('.mtx',))
        scipy.io.mmwrite(output_path, scipy.sparse.coo_matrix(np.asarray(matrix)), precision=17)
