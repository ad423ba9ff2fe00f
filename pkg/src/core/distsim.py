"""
Round-synchronous message-passing simulator for graph filter recursions

Every node only combines its own value with scalars received from its graph
neighbors. Sums run over ascending node ids so traces are bit-reproducible.
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .exceptions import DimensionMismatchError, DivergentFilterError, LocalityViolationError
from .filters import (
    SICEV,
    SIEV,
    BaseFilter,
    ClassicalFIR,
    ConstrainedEV,
    EdgeVariantFIR,
    NodeVariantFIR,
)
from .filters.base_filter import DEFAULT_ARMA_MAX_ITER, DEFAULT_ARMA_TOL
from .models import Graph, ShiftOperator, as_graph_signal

logger = logging.getLogger(__name__)

Weights = List[Tuple[int, Any]]


@dataclass
class NodeState:
    """Local state of one node"""
    id: int
    neighbors: Tuple[int, ...]
    shift_value: Any = 0.0
    accumulator: Any = 0.0
    arma_state: Any = 0.0
    cached_input: Any = 0.0
    outbox: Tuple = ()
    inbox: List[Tuple[int, Tuple]] = field(default_factory=list)


@dataclass
class SimulationTrace:
    """Per-round communication log with the locality certificate"""
    rounds: int = 0
    messages_per_round: List[int] = field(default_factory=list)
    scalars_per_round: List[int] = field(default_factory=list)
    max_state_delta: List[float] = field(default_factory=list)
    total_scalars_sent: int = 0
    violations: List[Tuple[int, int, int]] = field(default_factory=list)
    messages: Optional[List[Dict[str, Any]]] = None

    def records(self) -> List[Dict[str, Any]]:
        """One dictionary per round"""
        return [
            {
                "round": r + 1,
                "messages": self.messages_per_round[r],
                "scalars": self.scalars_per_round[r],
                "max_state_delta": self.max_state_delta[r] if r < len(self.max_state_delta) else 0.0,
            }
            for r in range(self.rounds)
        ]


class MessagePassingNetwork:
    """Synchronous network of NodeState programs over a graph"""

    def __init__(self, graph: Graph, record_messages: bool = False):
        """
        Initialize the network

        Args:
            graph: Communication graph (links are bidirectional)
            record_messages: Keep a full dump of every delivered message
        """
        self.graph = graph
        neighbors = graph.neighbor_lists()
        self._neighbor_sets = [set(nb) for nb in neighbors]
        self.nodes = [NodeState(id=i, neighbors=neighbors[i]) for i in range(graph.n)]
        self.trace = SimulationTrace(messages=[] if record_messages else None)

    def local_weights(self, matrix: np.ndarray, name: str) -> List[Weights]:
        """
        Split a coefficient matrix into per-node weight rows

        Args:
            matrix: n x n coefficients
            name: Label used in error messages

        Returns:
            For each node, the (source id, weight) pairs in ascending id order
        """
        matrix = np.asarray(matrix)
        n = self.graph.n
        if matrix.shape != (n, n):
            raise DimensionMismatchError(f"{name} has shape {matrix.shape}, graph has n={n}")
        rows = []
        for node in self.nodes:
            local = set(node.neighbors) | {node.id}
            nonzero = np.flatnonzero(matrix[node.id])
            foreign = [int(j) for j in nonzero if int(j) not in local]
            if foreign:
                logger.error(f"{name}: node {node.id} holds weights for non-neighbors {foreign}")
                raise LocalityViolationError(f"{name}: node {node.id} holds weights for non-neighbors {foreign}")
            rows.append([(int(j), matrix[node.id, j]) for j in nonzero])
        return rows

    def exchange(self, payloads: Sequence[Tuple]):
        """Every node broadcasts its payload to each neighbor"""
        round_index = self.trace.rounds + 1
        for node, payload in zip(self.nodes, payloads):
            node.inbox = []
            node.outbox = tuple(payload)

        messages = 0
        scalars = 0
        for sender in self.nodes:
            for receiver in sender.neighbors:
                self._deliver(round_index, sender.id, receiver, sender.outbox)
                messages += 1
                scalars += len(sender.outbox)

        self.trace.rounds = round_index
        self.trace.messages_per_round.append(messages)
        self.trace.scalars_per_round.append(scalars)
        self.trace.total_scalars_sent += scalars
        logger.debug(f"Round {round_index}: {messages} messages, {scalars} scalars")

    def _deliver(self, round_index: int, sender: int, receiver: int, payload: Tuple):
        if sender not in self._neighbor_sets[receiver]:
            self.trace.violations.append((round_index, sender, receiver))
        self.nodes[receiver].inbox.append((sender, payload))
        if self.trace.messages is not None:
            self.trace.messages.append({
                "round": round_index, "sender": sender, "receiver": receiver,
                "payload": [[float(np.real(v)), float(np.imag(v))] if np.iscomplexobj(v) else float(v) for v in payload],
            })

    @staticmethod
    def combine(node: NodeState, weights: Weights, slot: int = 0):
        """Weighted sum of own and received values, ascending source id"""
        received = {sender: payload[slot] for sender, payload in node.inbox}
        received[node.id] = node.outbox[slot]
        total = 0.0
        for j, w in weights:
            if j not in received:
                raise LocalityViolationError(f"Node {node.id} has no value from {j}")
            total = total + w * received[j]
        return total

    def record_delta(self, delta: float):
        self.trace.max_state_delta.append(float(delta))


def _check_inputs(graph: Graph, shift: ShiftOperator, x) -> np.ndarray:
    if shift.n != graph.n:
        raise DimensionMismatchError(f"Shift operator n={shift.n} does not match graph n={graph.n}")
    return as_graph_signal(x, graph.n)


def simulate_fir(graph: Graph, shift: ShiftOperator, f: BaseFilter, x,
                 record_messages: bool = False) -> Tuple[np.ndarray, SimulationTrace]:
    """
    Run an FIR filter with one neighbor exchange per recursion step

    Args:
        graph: Communication graph
        shift: Shift operator (must be local to the graph)
        f: Classical, node-variant, EV, CEV, SIEV or SICEV filter
        x: Input signal
        record_messages: Keep a full message dump in the trace

    Returns:
        (output signal, trace)
    """
    x = _check_inputs(graph, shift, x)
    net = MessagePassingNetwork(graph, record_messages)
    for node in net.nodes:
        node.shift_value = x[node.id]

    direct = None
    if isinstance(f, SIEV):
        direct = f.direct_term
        f = f.edge_variant
    elif isinstance(f, SICEV):
        f = f.constrained

    if isinstance(f, (ClassicalFIR, NodeVariantFIR)):
        shift_rows = net.local_weights(shift.matrix, "S")
        taps = f.taps if isinstance(f, NodeVariantFIR) else np.repeat(f.taps[:, None], graph.n, axis=1)
        for node in net.nodes:
            node.accumulator = taps[0][node.id] * node.shift_value
        for k in range(1, f.order + 1):
            net.exchange([(node.shift_value,) for node in net.nodes])
            shifted = [net.combine(node, shift_rows[node.id]) for node in net.nodes]
            delta = 0.0
            for node, value in zip(net.nodes, shifted):
                update = taps[k][node.id] * value
                node.shift_value = value
                node.accumulator = node.accumulator + update
                delta = max(delta, abs(update))
            net.record_delta(delta)

    elif isinstance(f, EdgeVariantFIR):
        rows = [net.local_weights(phi, f"Phi_{k}") for k, phi in enumerate(f.mats, start=1)]
        direct_rows = net.local_weights(direct, "Phi_0") if direct is not None else None
        for node in net.nodes:
            node.accumulator = 0.0
        for k in range(f.order):
            net.exchange([(node.shift_value,) for node in net.nodes])
            if k == 0 and direct_rows is not None:
                for node in net.nodes:
                    node.accumulator = net.combine(node, direct_rows[node.id])
            shifted = [net.combine(node, rows[k][node.id]) for node in net.nodes]
            delta = 0.0
            for node, value in zip(net.nodes, shifted):
                node.shift_value = value
                node.accumulator = node.accumulator + value
                delta = max(delta, abs(value))
            net.record_delta(delta)

    elif isinstance(f, ConstrainedEV):
        rows = [net.local_weights(phi, f"Phi_{k}") for k, phi in enumerate(f.mats, start=1)]
        shift_rows = net.local_weights(shift.matrix, "S")
        for node in net.nodes:
            node.accumulator = 0.0
        for k in range(f.order):
            net.exchange([(node.shift_value,) for node in net.nodes])
            weighted = [net.combine(node, rows[k][node.id]) for node in net.nodes]
            shifted = [net.combine(node, shift_rows[node.id]) for node in net.nodes]
            delta = 0.0
            for node, z, value in zip(net.nodes, weighted, shifted):
                node.accumulator = node.accumulator + z
                node.shift_value = value
                delta = max(delta, abs(z))
            net.record_delta(delta)

    else:
        raise DimensionMismatchError(f"{f.family} is not an FIR family")

    y = np.array([node.accumulator for node in net.nodes])
    if net.trace.violations:
        logger.error(f"Locality violations recorded: {len(net.trace.violations)}")
    logger.info(f"Simulated {f.family} FIR: {net.trace.rounds} rounds, {net.trace.total_scalars_sent} scalars")
    return y, net.trace


def simulate_arma(graph: Graph, phi0: np.ndarray, phi1: np.ndarray, x,
                  max_rounds: int = DEFAULT_ARMA_MAX_ITER, tol: float = DEFAULT_ARMA_TOL,
                  record_messages: bool = False) -> Tuple[List[np.ndarray], SimulationTrace]:
    """
    Run y_t = Phi_1 y_{t-1} + Phi_0 x from y_0 = 0 by local exchanges

    Round 1 exchanges (x_i, y_i) and every node caches its Phi_0 x term;
    later rounds exchange y_i only.

    Args:
        graph: Communication graph
        phi0: Feedforward coefficients
        phi1: Feedback coefficients
        x: Input signal
        max_rounds: Round budget
        tol: Relative change stopping tolerance
        record_messages: Keep a full message dump in the trace

    Returns:
        (trajectory y_0, y_1, ..., trace)
    """
    x = as_graph_signal(x, graph.n)
    net = MessagePassingNetwork(graph, record_messages)
    forward = net.local_weights(phi0, "Phi_0")
    feedback = net.local_weights(phi1, "Phi_1")

    y = np.zeros(graph.n, dtype=np.result_type(phi0, phi1, x))
    trajectory = [y.copy()]
    first_update = None

    for t in range(1, max_rounds + 1):
        if t == 1:
            net.exchange([(x[node.id], node.arma_state) for node in net.nodes])
            for node in net.nodes:
                node.cached_input = net.combine(node, forward[node.id], slot=0)
            slot = 1
        else:
            net.exchange([(node.arma_state,) for node in net.nodes])
            slot = 0

        y_new = np.array([net.combine(node, feedback[node.id], slot=slot) + node.cached_input
                          for node in net.nodes], dtype=y.dtype)
        update = float(np.linalg.norm(y_new - y))
        net.record_delta(float(np.abs(y_new - y).max()))
        if not np.isfinite(update):
            raise DivergentFilterError("ARMA simulation produced non-finite values")
        if first_update is None:
            first_update = update
        elif update > 2.0 * first_update:
            logger.error(f"ARMA update norm {update:.3e} exceeds twice the first update {first_update:.3e}")
            raise DivergentFilterError("ARMA simulation diverges")

        for node, value in zip(net.nodes, y_new):
            node.arma_state = value
        y = y_new
        trajectory.append(y.copy())
        if update <= tol * np.linalg.norm(y):
            break
    else:
        logger.warning(f"ARMA simulation hit the {max_rounds}-round budget")

    logger.info(f"Simulated ARMA(1): {net.trace.rounds} rounds, {net.trace.total_scalars_sent} scalars")
    return trajectory, net.trace


def simulate_filter(graph: Graph, shift: ShiftOperator, f: BaseFilter, x,
                    max_rounds: int = DEFAULT_ARMA_MAX_ITER, tol: float = DEFAULT_ARMA_TOL,
                    record_messages: bool = False) -> Tuple[np.ndarray, SimulationTrace]:
    """
    Simulate any filter family

    Returns:
        (output signal, trace); ARMA families return the last iterate
    """
    if f.is_arma:
        x = _check_inputs(graph, shift, x)
        trajectory, trace = simulate_arma(graph, f.feedforward(shift), f.feedback(shift), x,
                                          max_rounds=max_rounds, tol=tol, record_messages=record_messages)
        return trajectory[-1], trace
    return simulate_fir(graph, shift, f, x, record_messages=record_messages)
