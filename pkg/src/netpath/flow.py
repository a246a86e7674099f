"""Directed evidence-flow network derived from one hat-matrix row."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from .errors import NumericalFailure
from .network import sort_labels
from .nma import HatRow

DEFAULT_FLOW_TOL = 1e-10
CONSERVATION_TOL = 1e-8


@dataclass(frozen=True)
class Arc:
    tail: str
    head: str
    flow: float
    edge_index: int


@dataclass(frozen=True)
class EvidenceFlow:
    source: str
    sink: str
    arcs: tuple[Arc, ...]

    def successors(self) -> dict[str, list[Arc]]:
        out: dict[str, list[Arc]] = defaultdict(list)
        for arc in self.arcs:
            out[arc.tail].append(arc)
        order = {t: k for k, t in enumerate(sort_labels({a.head for a in self.arcs}))}
        for tail in out:
            out[tail].sort(key=lambda a: order[a.head])
        return dict(out)

    def net_outflow(self) -> dict[str, float]:
        net: dict[str, float] = defaultdict(float)
        for arc in self.arcs:
            net[arc.tail] += arc.flow
            net[arc.head] -= arc.flow
        return dict(net)

    def conservation_residual(self) -> float:
        net = self.net_outflow()
        worst = 0.0
        for node, value in net.items():
            target = 1.0 if node == self.source else -1.0 if node == self.sink else 0.0
            worst = max(worst, abs(value - target))
        for node in (self.source, self.sink):
            if node not in net:
                worst = max(worst, 1.0)
        return worst


def _topological_order(flow: EvidenceFlow) -> list[str] | None:
    nodes = {a.tail for a in flow.arcs} | {a.head for a in flow.arcs}
    indeg = {t: 0 for t in nodes}
    for a in flow.arcs:
        indeg[a.head] += 1
    succ = flow.successors()
    ready = sort_labels(t for t, d in indeg.items() if d == 0)
    order = []
    while ready:
        u = ready.pop(0)
        order.append(u)
        for a in succ.get(u, []):
            indeg[a.head] -= 1
            if indeg[a.head] == 0:
                ready.append(a.head)
    return order if len(order) == len(nodes) else None


def evidence_flow(row: HatRow, tol: float = DEFAULT_FLOW_TOL) -> EvidenceFlow:
    """Orient each edge by the sign of its hat-row coefficient.

    Edges with ``|h| <= tol * max|h|`` carry no evidence for this comparison
    and are dropped.
    """
    coef = np.asarray(row.coefficients, dtype=float)
    scale = float(np.max(np.abs(coef))) if coef.size else 0.0
    if scale == 0.0:
        raise NumericalFailure(f"hat row for {row.source}:{row.sink} is identically zero")
    arcs = []
    for k, (h, (t1, t2)) in enumerate(zip(coef, row.edges)):
        if abs(h) <= tol * scale:
            continue
        if h > 0:
            arcs.append(Arc(t1, t2, float(h), k))
        else:
            arcs.append(Arc(t2, t1, float(-h), k))
    flow = EvidenceFlow(row.source, row.sink, tuple(arcs))
    residual = flow.conservation_residual()
    if residual > CONSERVATION_TOL:
        raise NumericalFailure(
            f"flow for {row.source}:{row.sink} violates conservation (residual {residual:.3g})"
        )
    if _topological_order(flow) is None:
        raise NumericalFailure(
            f"flow for {row.source}:{row.sink} contains a directed cycle; "
            "this indicates numerical noise in the hat row, try a larger flow tolerance"
        )
    return flow
