"""Evidence paths between two treatments and the path-level matrices."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import NumericalFailure, PathExplosion
from .flow import EvidenceFlow
from .network import EvidenceNetwork

DEFAULT_PATH_CAP = 10_000


@dataclass(frozen=True)
class EvidencePath:
    nodes: tuple[str, ...]
    edge_indices: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.edge_indices)

    def label(self, sep: str = " -> ") -> str:
        return sep.join(self.nodes)


def enumerate_paths(flow: EvidenceFlow, cap: int = DEFAULT_PATH_CAP) -> list[EvidencePath]:
    """All simple directed paths from source to sink.

    The direct comparison, when present, is listed first; the remaining paths
    follow depth-first order with successors visited in natural label order.
    """
    if cap < 1:
        raise ValueError("path cap must be at least 1")
    succ = flow.successors()
    source, sink = flow.source, flow.sink
    found: list[EvidencePath] = []

    nodes = [source]
    edges: list[int] = []
    on_path = {source}
    # explicit stack of successor iterators keeps deep networks off the recursion limit
    stack = [iter(succ.get(source, []))]
    while stack:
        arc = next(stack[-1], None)
        if arc is None:
            stack.pop()
            if edges:
                on_path.discard(nodes.pop())
                edges.pop()
            continue
        if arc.head in on_path:
            continue
        if arc.head == sink:
            found.append(EvidencePath(tuple(nodes) + (sink,), tuple(edges) + (arc.edge_index,)))
            if len(found) > cap:
                raise PathExplosion(len(found), cap)
            continue
        nodes.append(arc.head)
        edges.append(arc.edge_index)
        on_path.add(arc.head)
        stack.append(iter(succ.get(arc.head, [])))

    direct = [p for p in found if p.length == 1]
    return direct + [p for p in found if p.length > 1]


def edge_signs(path: EvidencePath, network: EvidenceNetwork) -> list[int]:
    """+1 where the path follows an edge's stored orientation, -1 against it."""
    signs = []
    for step, k in enumerate(path.edge_indices):
        e = network.edges[k]
        a, b = path.nodes[step], path.nodes[step + 1]
        if (a, b) == (e.t1, e.t2):
            signs.append(1)
        elif (a, b) == (e.t2, e.t1):
            signs.append(-1)
        else:
            raise ValueError(f"edge {k} does not join {a} and {b}")
    return signs


def path_effect(path: EvidencePath, network: EvidenceNetwork) -> float:
    signs = edge_signs(path, network)
    return float(sum(s * network.edges[k].effect for s, k in zip(signs, path.edge_indices)))


def path_variance(path: EvidencePath, network: EvidenceNetwork) -> float:
    return float(sum(network.edges[k].variance for k in path.edge_indices))


@dataclass(frozen=True)
class PathSystem:
    """Paths plus incidence C (P x E), adjacency A, covariance Sigma and effects.

    ``numbers`` holds each path's 1-based position in the original enumeration,
    which survives reduction to an independent subset.
    """

    paths: tuple[EvidencePath, ...]
    C: np.ndarray
    A: np.ndarray
    Sigma: np.ndarray
    effects: np.ndarray
    numbers: tuple[int, ...]

    @property
    def n_paths(self) -> int:
        return len(self.paths)

    @property
    def variances(self) -> np.ndarray:
        return np.diag(self.Sigma).copy()

    def subset(self, keep: Sequence[int]) -> PathSystem:
        keep = list(keep)
        return PathSystem(
            paths=tuple(self.paths[k] for k in keep),
            C=self.C[keep, :],
            A=self.A[np.ix_(keep, keep)],
            Sigma=self.Sigma[np.ix_(keep, keep)],
            effects=self.effects[keep],
            numbers=tuple(self.numbers[k] for k in keep),
        )


def build_path_system(paths: Sequence[EvidencePath], network: EvidenceNetwork) -> PathSystem:
    if len(paths) == 0:
        raise ValueError("cannot build a path system without paths")
    P, E = len(paths), network.n_edges
    C = np.zeros((P, E))
    direction = np.zeros(E, dtype=int)
    for p, path in enumerate(paths):
        for s, k in zip(edge_signs(path, network), path.edge_indices):
            C[p, k] = 1.0
            if direction[k] == 0:
                direction[k] = s
            elif direction[k] != s:
                # covariances below carry no sign terms; that needs one direction per edge
                raise NumericalFailure(f"paths traverse edge {k} in opposite directions")
    A = C @ C.T
    Sigma = (C * network.variances) @ C.T
    Sigma = 0.5 * (Sigma + Sigma.T)
    effects = np.array([path_effect(p, network) for p in paths])
    return PathSystem(
        paths=tuple(paths),
        C=C,
        A=A,
        Sigma=Sigma,
        effects=effects,
        numbers=tuple(range(1, P + 1)),
    )
