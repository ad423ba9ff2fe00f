"""
Command-line surface: graph, design, apply, simulate and experiment
"""
import argparse
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from ..core.analytics import GraphStatistics
from ..core.design import (
    DesignReport,
    DesignTarget,
    design_cev_ls,
    design_classical_ls,
    design_classical_matrix_ls,
    design_ev_arma1,
    design_ev_bcd,
    design_nv_ls,
    design_sicev_ls,
    design_siev_bcd,
    design_sieva1,
    nse,
)
from ..core.distsim import simulate_filter
from ..core.exceptions import (
    ConfigError,
    DimensionMismatchError,
    DivergentFilterError,
    GraphFilterError,
    InvalidParameterError,
    LocalityViolationError,
    SingularModeError,
)
from ..core.experiments import EXPERIMENTS, run_experiment
from ..core.experiments.targets import consensus_target, target_exponential_kernel, target_ideal_lowpass
from ..core.export import DataExporter
from ..core.filters import apply_recursive, filter_from_dict, filter_to_dict
from ..core.generators import make_graph
from ..core.models import Graph, ShiftKind, ShiftOperator, as_graph_signal
from ..core.nullspace import ShiftInvariantSpace
from ..core.parsers import EdgeListParser, JsonParser, MatrixMarketParser, SignalParser
from ..core.shift import build_shift, eigendecompose, normalize_spectral, support_pattern
from ..utils.config import load_experiment_config, parse_orders
from ..utils.security import sanitize_filename, validate_export_path

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_DESIGN = 3
EXIT_LOCALITY = 4

GENERATORS = ("ring", "path", "grid", "complete", "star", "community", "knn")
DESIGN_FAMILIES = ("classical", "nv", "ev", "cev", "siev", "sicev", "evarma1", "sieva1")
TARGETS = ("identity", "consensus", "exponential", "lowpass", "file")
SHIFT_INVARIANT = ("siev", "sicev", "sieva1")
FILTER_FORMAT = "edgefilterlab-filter"
DEFAULT_VERTICES = 16


@dataclass
class CliConfig:
    """Validated settings of one command invocation"""
    command: str
    seed: int = 0
    scalar_field: str = "real"
    tol: float = 1e-10
    max_iter: int = 10_000
    inputs: Dict[str, str] = field(default_factory=dict)
    outputs: Dict[str, str] = field(default_factory=dict)
    params: Dict[str, Any] = field(default_factory=dict)


def _cli_config(args: argparse.Namespace) -> CliConfig:
    """Collect paths and check every output location before any computation"""
    inputs = {k: getattr(args, k) for k in ("graph", "shift_file", "target_file", "filter", "signal", "config")
              if getattr(args, k, None)}
    outputs = {k: getattr(args, k) for k in ("out", "report", "trace", "json", "excel") if getattr(args, k, None)}
    for name, path in outputs.items():
        if not validate_export_path(path):
            raise ConfigError(f"Invalid output path for --{name}: {path}")
    for name, path in inputs.items():
        if not Path(path).is_file():
            raise ConfigError(f"Input file for --{name.replace('_', '-')} not found: {path}")
    params = {k: v for k, v in vars(args).items()
              if k not in inputs and k not in outputs and k not in ("handler", "command", "verbose")}
    return CliConfig(command=args.command, seed=getattr(args, "seed", 0),
                     scalar_field=getattr(args, "field", None) or "real",
                     tol=getattr(args, "tol", 1e-10), max_iter=getattr(args, "max_iter", 10_000),
                     inputs=inputs, outputs=outputs, params=params)


# ---------------------------------------------------------------------------
# Shared argument groups
# ---------------------------------------------------------------------------

def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _add_generator_args(parser: argparse.ArgumentParser):
    parser.add_argument("--n", type=_positive_int, help="Number of vertices (default 16, or rows x cols)")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--clusters", type=_positive_int, default=4)
    parser.add_argument("--p-in", type=float, default=0.3)
    parser.add_argument("--p-out", type=float, default=0.02)
    parser.add_argument("--k", type=_positive_int, default=8, help="Neighbors of the k-NN generator")
    parser.add_argument("--side", type=float, default=1.0, help="Square side of the k-NN generator")
    parser.add_argument("--rows", type=_positive_int)
    parser.add_argument("--cols", type=_positive_int)


def _add_shift_args(parser: argparse.ArgumentParser):
    parser.add_argument("--graph", help="Edge list file (otherwise --generator builds one)")
    parser.add_argument("--generator", choices=GENERATORS, default="community")
    _add_generator_args(parser)
    parser.add_argument("--shift-kind", choices=[k.value for k in ShiftKind], default="laplacian")
    parser.add_argument("--shift-file", help="Matrix Market shift for --shift-kind custom")
    parser.add_argument("--normalize", action="store_true", help="Scale S to unit spectral norm")
    parser.add_argument("--field", choices=("real", "complex"), default="real")


def _vertex_count(args) -> int:
    if args.n is not None:
        return args.n
    if args.rows and args.cols:
        return args.rows * args.cols
    return DEFAULT_VERTICES


def _graph_from_args(args) -> Graph:
    if args.graph:
        return EdgeListParser(args.graph).parse()
    return make_graph(args.generator, _vertex_count(args), seed=args.seed, clusters=args.clusters, p_in=args.p_in,
                      p_out=args.p_out, k=args.k, side=args.side, rows=args.rows, cols=args.cols)


def _shift_from_args(args, graph: Graph, kind: Optional[str] = None, normalize: Optional[bool] = None,
                     field: Optional[str] = None) -> ShiftOperator:
    kind = kind or args.shift_kind
    matrix = MatrixMarketParser(args.shift_file).parse() if kind == ShiftKind.CUSTOM.value and args.shift_file else None
    S = build_shift(graph, kind, matrix=matrix, field=field or args.field)
    if args.normalize if normalize is None else normalize:
        S = normalize_spectral(S)
    return S


# ---------------------------------------------------------------------------
# graph
# ---------------------------------------------------------------------------

def cmd_graph(args) -> int:
    """Generate a graph and write it as an edge list"""
    cfg = _cli_config(args)
    n = _vertex_count(args)
    if args.generator == "knn" and args.k >= n:
        raise ConfigError(f"--k must be smaller than --n ({args.k} >= {n})")
    graph = make_graph(args.generator, n, seed=cfg.seed, clusters=args.clusters, p_in=args.p_in,
                       p_out=args.p_out, k=args.k, side=args.side, rows=args.rows, cols=args.cols)
    DataExporter.export_edge_list(graph, cfg.outputs["out"])
    stats = GraphStatistics.generate_summary_report(graph)
    print(f"N={stats['nodes']} M={stats['edges']} connected={stats['connected']}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# design
# ---------------------------------------------------------------------------

def _design_target(args, S: ShiftOperator):
    """(matrix target, modal target or None) for the requested target"""
    n = S.n
    if args.target == "identity":
        return np.eye(n), None
    if args.target == "consensus":
        return consensus_target(n), None
    if args.target == "file":
        if not args.target_file:
            raise ConfigError("--target file needs --target-file")
        matrix = MatrixMarketParser(args.target_file).parse()
        if matrix.shape != (n, n):
            raise ConfigError(f"Target has shape {matrix.shape}, shift operator has n={n}")
        return matrix, None
    dec = eigendecompose(S)
    if args.target == "exponential":
        h = target_exponential_kernel(dec.eigvals, args.gamma, args.mu)
    else:
        h = target_ideal_lowpass(dec.eigvals, args.lambda_c)
    return DesignTarget.from_modal(dec, h).as_matrix(), h


def run_design(args, S: ShiftOperator) -> DesignReport:
    """Dispatch one design by family"""
    target, modal = _design_target(args, S)
    family = args.family
    K = args.order

    space = None
    if family in SHIFT_INVARIANT:
        space = ShiftInvariantSpace.from_shift(S)
        if modal is None:
            modal = np.real_if_close(DesignTarget(matrix=target, decomposition=space.decomposition).as_modal(),
                                     tol=1000)

    if family == "classical":
        if modal is not None:
            f = design_classical_ls(eigendecompose(S).eigvals, modal, K, ridge=args.ridge)
        else:
            f = design_classical_matrix_ls(S, target, K, ridge=args.ridge)
        return DesignReport(fitted=f, nse=nse(target, f.dense(S)), iterations=1)
    if family == "nv":
        f = design_nv_ls(S, target, K, ridge=args.ridge)
        return DesignReport(fitted=f, nse=nse(target, f.dense(S)), iterations=1)
    if family == "cev":
        return design_cev_ls(S, target, K, ridge=args.ridge, sparsify=args.sparsify)
    if family == "ev":
        return design_ev_bcd(S, target, K, init=args.init, sweeps=args.sweeps, seed=args.seed)
    if family == "evarma1":
        return design_ev_arma1(S, target, args.delta)
    if family == "siev":
        return design_siev_bcd(space, modal, K, init=args.init, sweeps=args.sweeps, seed=args.seed)
    if family == "sicev":
        f = design_sicev_ls(space, modal, K, ridge=args.ridge)
        return DesignReport(fitted=f, nse=nse(target, f.dense(S)), iterations=1)
    return design_sieva1(space, modal, args.delta)


def cmd_design(args) -> int:
    """Fit a filter family to a target and write the filter and its report"""
    cfg = _cli_config(args)
    graph = _graph_from_args(args)
    S = _shift_from_args(args, graph)
    report = run_design(args, S)

    document = {
        "format": FILTER_FORMAT,
        "shift_kind": S.kind.value,
        "field": S.field,
        "normalize": bool(args.normalize),
        "filter": filter_to_dict(report.fitted),
    }
    DataExporter.export_json(document, cfg.outputs["out"])
    if "report" in cfg.outputs:
        DataExporter.export_json(report.to_dict(), cfg.outputs["report"])
    print(f"family={report.fitted.family} K={report.fitted.order} NSE={report.nse:.17g}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# apply / simulate
# ---------------------------------------------------------------------------

def _load_filter(args):
    document = JsonParser(args.filter).parse()
    if document.get("format") != FILTER_FORMAT or "filter" not in document:
        raise ConfigError(f"{args.filter} is not a filter document")
    graph = _graph_from_args(args)
    S = _shift_from_args(args, graph, kind=document["shift_kind"], normalize=document.get("normalize", False),
                         field=document.get("field", "real"))
    spec = document["filter"]
    space = ShiftInvariantSpace.from_shift(S) if spec.get("family") in SHIFT_INVARIANT else None
    f = filter_from_dict(spec, support=support_pattern(S), space=space)
    return graph, S, f


def cmd_apply(args) -> int:
    """Evaluate a stored filter on a signal through its recursion"""
    cfg = _cli_config(args)
    graph, S, f = _load_filter(args)
    x = as_graph_signal(SignalParser(args.signal).parse(), S.n)
    y = apply_recursive(f, S, x, tol=cfg.tol, max_iter=cfg.max_iter)
    DataExporter.export_signal_csv(y, args.out)
    print(f"Applied {f.family} filter to a signal of length {S.n}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    """Run a stored filter with local message passing and certify locality"""
    cfg = _cli_config(args)
    graph, S, f = _load_filter(args)
    x = as_graph_signal(SignalParser(args.signal).parse(), S.n)
    y, trace = simulate_filter(graph, S, f, x, max_rounds=cfg.max_iter, tol=cfg.tol,
                               record_messages=args.messages)
    DataExporter.export_signal_csv(y, args.out)
    if args.trace:
        DataExporter.export_trace_jsonl(trace, args.trace)
    print(f"rounds={trace.rounds} scalars={trace.total_scalars_sent} violations={len(trace.violations)}")
    if trace.violations:
        raise LocalityViolationError(f"{len(trace.violations)} messages crossed non-edges")
    return EXIT_OK


# ---------------------------------------------------------------------------
# experiment
# ---------------------------------------------------------------------------

def _float_list(text: Optional[str]) -> Optional[List[float]]:
    if text is None:
        return None
    try:
        return [float(v) for v in text.split(',') if v.strip()]
    except ValueError:
        raise ConfigError(f"Invalid number list '{text}'")


def cmd_experiment(args) -> int:
    """Run one experiment and write its result table"""
    cfg = _cli_config(args)
    overrides = {
        "name": args.name,
        "n": args.n,
        "seed": cfg.seed,
        "generator": args.generator,
        "graph_file": args.graph,
        "shift_kind": args.shift_kind,
        "scalar_field": args.field,
        "orders": parse_orders(args.orders) if args.orders else None,
        "families": args.families.split(',') if args.families else None,
        "deltas": _float_list(args.delta),
        "gamma": args.gamma,
        "mu": args.mu,
        "lambda_c": args.lambda_c,
        "mu_tik": args.mu_tik,
        "target": args.target,
        "noise_var": args.noise_var,
        "signal_file": args.signal,
        "tol": args.tol,
        "output": args.out,
        "verify_distributed": True if args.verify_distributed else None,
    }
    experiment = load_experiment_config(cfg.inputs.get("config"), overrides)
    table, patterns = run_experiment(experiment, progress=args.progress)

    out = Path(cfg.outputs["out"])
    DataExporter.export_results_csv(table, str(out))
    DataExporter.export_results_json(table, cfg.outputs.get("json", str(out.with_suffix(".json"))))
    if "excel" in cfg.outputs:
        DataExporter.export_results_excel(table, cfg.outputs["excel"])
    for theta, frame in patterns.items():
        name = sanitize_filename(f"{out.stem}_beam_{theta:g}.csv")
        DataExporter.export_beampattern_csv(frame, str(out.with_name(name)))

    print(f"experiment={experiment.name} rows={len(table.rows)}")
    for family in table.families():
        curve = table.series(family, "nse")
        if curve:
            last = max(curve)
            print(f"  {family}: NSE at {last} = {curve[last]:.6e}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser and entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="edgefilterlab",
                                     description="Edge-variant graph filter design and distributed simulation")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("graph", help="Generate a graph and write an edge list")
    p.add_argument("generator", choices=GENERATORS)
    _add_generator_args(p)
    p.add_argument("--out", required=True, help="Edge list path (.tsv)")
    p.set_defaults(handler=cmd_graph)

    p = sub.add_parser("design", help="Fit a filter to a target operator or response")
    _add_shift_args(p)
    p.add_argument("--family", choices=DESIGN_FAMILIES, required=True)
    p.add_argument("--order", "-K", type=_positive_int, default=3)
    p.add_argument("--target", choices=TARGETS, default="exponential")
    p.add_argument("--target-file", help="Matrix Market target for --target file")
    p.add_argument("--gamma", type=float, default=3.0)
    p.add_argument("--mu", type=float, default=0.75)
    p.add_argument("--lambda-c", type=float, default=0.5)
    p.add_argument("--delta", type=float, default=0.7, help="Feedback bound of the ARMA designs")
    p.add_argument("--ridge", type=float, default=0.0)
    p.add_argument("--sparsify", type=float, help="l1 weight for the CEV design")
    p.add_argument("--init", choices=("classical", "random"), default="classical")
    p.add_argument("--sweeps", type=_positive_int, default=20)
    p.add_argument("--out", required=True, help="Filter JSON path")
    p.add_argument("--report", help="Design report JSON path")
    p.set_defaults(handler=cmd_design)

    for name, handler, helptext in (("apply", cmd_apply, "Apply a filter by its recursion"),
                                    ("simulate", cmd_simulate, "Run a filter by local message passing")):
        p = sub.add_parser(name, help=helptext)
        _add_shift_args(p)
        p.add_argument("--filter", required=True, help="Filter JSON from the design command")
        p.add_argument("--signal", required=True, help="Signal CSV")
        p.add_argument("--tol", type=float, default=1e-10)
        p.add_argument("--max-iter", type=_positive_int, default=10_000)
        p.add_argument("--out", required=True, help="Output signal CSV")
        if name == "simulate":
            p.add_argument("--trace", help="Trace JSON-lines path")
            p.add_argument("--messages", action="store_true", help="Include every message in the trace")
        p.set_defaults(handler=handler)

    p = sub.add_parser("experiment", help="Run an experiment and write its result table")
    p.add_argument("name", choices=EXPERIMENTS)
    p.add_argument("--config", help="Experiment configuration JSON")
    p.add_argument("--n", type=_positive_int)
    p.add_argument("--seed", type=int)
    p.add_argument("--generator", choices=GENERATORS)
    p.add_argument("--graph", help="Edge list file")
    p.add_argument("--shift-kind", choices=[k.value for k in ShiftKind])
    p.add_argument("--field", choices=("real", "complex"))
    p.add_argument("--orders", help="Order list such as 1..6 or 2,4,8")
    p.add_argument("--families", help="Comma-separated families")
    p.add_argument("--delta", help="Comma-separated feedback bounds")
    p.add_argument("--gamma", type=float)
    p.add_argument("--mu", type=float)
    p.add_argument("--lambda-c", type=float)
    p.add_argument("--mu-tik", type=float)
    p.add_argument("--target", choices=("exponential", "lowpass"))
    p.add_argument("--noise-var", type=float)
    p.add_argument("--signal", help="Observation CSV for the Wiener experiment")
    p.add_argument("--tol", type=float)
    p.add_argument("--verify-distributed", action="store_true")
    p.add_argument("--progress", action="store_true")
    p.add_argument("--out", required=True, help="Result CSV path")
    p.add_argument("--json", help="Result JSON path (default: next to --out)")
    p.add_argument("--excel", help="Result workbook path")
    p.set_defaults(handler=cmd_experiment)
    return parser


def _configure_logging(verbosity: int):
    level = logging.WARNING if verbosity == 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s", stream=sys.stderr)


def _exit_code(command: str, error: Exception) -> int:
    if isinstance(error, ConfigError):
        return EXIT_USAGE
    if command == "design" and isinstance(error, (InvalidParameterError, DivergentFilterError, SingularModeError)):
        return EXIT_DESIGN
    if command in ("apply", "simulate") and isinstance(error, (LocalityViolationError, DimensionMismatchError)):
        return EXIT_LOCALITY
    if command in ("graph", "experiment") and isinstance(error, InvalidParameterError):
        return EXIT_USAGE
    return EXIT_FAILURE


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run the command line

    Args:
        argv: Arguments without the program name (defaults to sys.argv[1:])

    Returns:
        Process exit code
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    _configure_logging(args.verbose)
    try:
        return args.handler(args)
    except GraphFilterError as e:
        code = _exit_code(args.command, e)
        logger.error(f"{args.command} failed: {type(e).__name__}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return code
    except OSError as e:
        logger.error(f"{args.command} failed: {type(e).__name__}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILURE
