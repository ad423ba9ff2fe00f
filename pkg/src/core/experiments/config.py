"""
Experiment configuration and result tables
"""
import logging
from dataclasses import asdict, dataclass, field
from datetime import datetime
from typing import Any, Dict, Iterable, List, Optional

import numpy as np
import pandas as pd

from ..exceptions import ConfigError

logger = logging.getLogger(__name__)

EXPERIMENTS = ("response", "consensus", "wiener", "beamforming", "distls", "tikhonov")
RESULT_COLUMNS = ["family", "K_or_iter", "metric", "value"]


@dataclass
class ExperimentConfig:
    """Parameters of one experiment run"""
    name: str = "response"

    # graph
    generator: str = "community"
    n: int = 64
    seed: int = 0
    clusters: int = 4
    p_in: float = 0.3
    p_out: float = 0.02
    k_neighbors: int = 8
    side: float = 4.0
    graph_file: Optional[str] = None
    shift_kind: str = "laplacian"
    scalar_field: str = "real"
    normalize: bool = True

    # sweep
    families: Optional[List[str]] = None
    orders: List[int] = field(default_factory=lambda: list(range(1, 9)))

    # scenario parameters
    target: str = "exponential"
    gamma: float = 3.0
    mu: float = 0.75
    lambda_c: float = 0.5
    deltas: List[float] = field(default_factory=lambda: [0.6, 0.7, 0.8])
    mu_tik: float = 0.8
    cev_order_tik: int = 15
    noise_var: float = 0.1
    signal_rank: int = 3
    signal_file: Optional[str] = None
    steering_angles: List[float] = field(default_factory=lambda: [0.0, 90.0])
    beam_order: int = 5
    wavelength: float = 1.0
    tol: float = 1e-10
    max_iter: int = 10_000
    bcd_sweeps: int = 20
    bcd_starts: int = 3
    verify_distributed: bool = False

    output: Optional[str] = None

    def validate(self):
        """Check documented ranges; raises ConfigError"""
        problems = []
        if self.name not in EXPERIMENTS:
            problems.append(f"unknown experiment '{self.name}'")
        if self.n < 2:
            problems.append("n must be >= 2")
        if not self.orders or any(int(k) < 1 for k in self.orders):
            problems.append("orders must be positive")
        if self.clusters < 1:
            problems.append("clusters must be >= 1")
        for name in ("p_in", "p_out"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                problems.append(f"{name} must lie in [0, 1]")
        uses_knn = self.generator == "knn" or self.name == "beamforming"
        if uses_knn and not 1 <= self.k_neighbors < self.n:
            problems.append("k_neighbors must lie in [1, n)")
        if any(not 0.0 < d < 1.0 for d in self.deltas):
            problems.append("every delta must lie in (0, 1)")
        if self.mu_tik < 0:
            problems.append("mu_tik must be >= 0")
        if self.gamma < 0:
            problems.append("gamma must be >= 0")
        if self.noise_var < 0:
            problems.append("noise_var must be >= 0")
        if self.scalar_field not in ("real", "complex"):
            problems.append("scalar_field must be real or complex")
        if self.cev_order_tik < 1 or self.beam_order < 1:
            problems.append("filter orders must be positive")
        if self.side <= 0 or self.wavelength <= 0:
            problems.append("side and wavelength must be positive")
        if self.tol <= 0 or self.max_iter < 1:
            problems.append("tol must be positive and max_iter >= 1")
        if self.bcd_sweeps < 1 or self.bcd_starts < 1:
            problems.append("bcd_sweeps and bcd_starts must be >= 1")
        if problems:
            logger.error(f"Invalid experiment configuration: {'; '.join(problems)}")
            raise ConfigError("; ".join(problems))
        self.orders = sorted({int(k) for k in self.orders})

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class ResultRow:
    family: str
    index: int
    metric: str
    value: float


@dataclass
class ResultTable:
    """Rows of (family, K or iteration, metric, value) plus run metadata"""
    name: str
    rows: List[ResultRow] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)
    # wall-clock stamp, only serialized on request
    created: str = field(default_factory=lambda: datetime.now().isoformat(timespec="seconds"), compare=False)

    def add(self, family: str, index: int, metric: str, value: float):
        value = float(value)
        if metric.startswith("nse") and not value >= 0.0:
            raise ConfigError(f"{family} K={index}: NSE must be nonnegative, got {value}")
        self.rows.append(ResultRow(family=family, index=int(index), metric=metric, value=value))

    def series(self, family: str, metric: str = "nse") -> Dict[int, float]:
        """Values of one (family, metric) curve keyed by K or iteration"""
        return {r.index: r.value for r in self.rows if r.family == family and r.metric == metric}

    def families(self) -> List[str]:
        seen = []
        for r in self.rows:
            if r.family not in seen:
                seen.append(r.family)
        return seen

    def missing(self, families: Iterable[str], orders: Iterable[int], metric: str = "nse") -> List[tuple]:
        """(family, K) pairs without a row"""
        have = {(r.family, r.index) for r in self.rows if r.metric == metric}
        return [(f, k) for f in families for k in orders if (f, k) not in have]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [(r.family, r.index, r.metric, r.value) for r in self.rows],
            columns=RESULT_COLUMNS,
        )

    def to_dict(self, include_created: bool = False) -> Dict[str, Any]:
        data = {
            "name": self.name,
            "metadata": _plain(self.metadata),
            "rows": [asdict(r) for r in self.rows],
        }
        if include_created:
            data["created"] = self.created
        return data


def _plain(value):
    """Make numpy scalars and arrays JSON friendly"""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, np.generic):
        return value.item()
    return value
