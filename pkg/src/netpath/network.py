"""Aggregate evidence network: treatments, pooled direct comparisons, Θ and V."""

from __future__ import annotations

import math
import re
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DisconnectedNetwork,
    InvalidComparison,
    InvalidVariance,
    MissingData,
    UnknownTreatment,
)

_DIGITS = re.compile(r"(\d+)")


def label_key(label: str):
    """Natural sort key, so that T_2 sorts before T_10."""
    parts = _DIGITS.split(label)
    return tuple(int(p) if i % 2 else p for i, p in enumerate(parts))


def sort_labels(labels: Iterable[str]) -> list[str]:
    return sorted(labels, key=label_key)


@dataclass(frozen=True)
class DirectComparison:
    """One edge: effect of ``t1`` relative to ``t2`` on an additive scale."""

    t1: str
    t2: str
    effect: float
    variance: float
    n_studies: int = 1

    def __post_init__(self):
        if not self.t1 or not self.t2:
            raise InvalidComparison("treatment labels must be non-empty")
        if self.t1 == self.t2:
            raise InvalidComparison(f"self-loop comparison {self.t1}:{self.t2}")
        if not math.isfinite(self.effect):
            raise InvalidComparison(f"non-finite effect for {self.t1}:{self.t2}")
        if not (self.variance > 0) or not math.isfinite(self.variance):
            raise InvalidVariance(
                f"variance for {self.t1}:{self.t2} must be positive, got {self.variance}"
            )

    def reversed(self) -> DirectComparison:
        return DirectComparison(self.t2, self.t1, -self.effect, self.variance, self.n_studies)

    def canonical(self) -> DirectComparison:
        if label_key(self.t1) <= label_key(self.t2):
            return self
        return self.reversed()

    @property
    def pair(self) -> tuple[str, str]:
        return self.t1, self.t2


def pool_pairwise(contrasts: Sequence[tuple[float, float]]) -> tuple[float, float]:
    """Common-effect inverse-variance pooling of ``(effect, variance)`` pairs."""
    if len(contrasts) == 0:
        raise MissingData("cannot pool an empty list of contrasts")
    effects = np.array([c[0] for c in contrasts], dtype=float)
    variances = np.array([c[1] for c in contrasts], dtype=float)
    if np.any(~(variances > 0)):
        raise InvalidVariance("all study variances must be strictly positive")
    if len(contrasts) == 1:
        return float(effects[0]), float(variances[0])
    w = 1.0 / variances
    total = math.fsum(w)
    effect = math.fsum(w * effects) / total
    return effect, 1.0 / total


@dataclass(frozen=True)
class EvidenceNetwork:
    """Connected network with canonically ordered nodes and edges.

    Build instances with :func:`build_network`; the constructor assumes its
    input is already pooled, oriented and sorted.
    """

    nodes: tuple[str, ...]
    edges: tuple[DirectComparison, ...]
    _node_index: dict = field(init=False, repr=False, compare=False)
    _edge_index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_node_index", {t: k for k, t in enumerate(self.nodes)})
        object.__setattr__(
            self, "_edge_index", {frozenset(e.pair): k for k, e in enumerate(self.edges)}
        )

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_comparisons(self) -> int:
        n = self.n_nodes
        return n * (n - 1) // 2

    @property
    def effects(self) -> np.ndarray:
        return np.array([e.effect for e in self.edges], dtype=float)

    @property
    def variances(self) -> np.ndarray:
        return np.array([e.variance for e in self.edges], dtype=float)

    @property
    def weights(self) -> np.ndarray:
        return 1.0 / self.variances

    @property
    def V(self) -> np.ndarray:
        return np.diag(self.variances)

    def node_index(self, label: str) -> int:
        try:
            return self._node_index[label]
        except KeyError:
            raise UnknownTreatment(f"unknown treatment {label!r}") from None

    def edge_index(self, a: str, b: str) -> int | None:
        return self._edge_index.get(frozenset((a, b)))

    def has_edge(self, a: str, b: str) -> bool:
        return frozenset((a, b)) in self._edge_index

    def oriented_effect(self, a: str, b: str) -> float:
        """Effect of ``a`` relative to ``b`` on the direct edge between them."""
        k = self.edge_index(a, b)
        if k is None:
            raise InvalidComparison(f"no direct comparison {a}:{b}")
        e = self.edges[k]
        return e.effect if e.t1 == a else -e.effect

    def neighbours(self) -> dict[str, list[str]]:
        adj: dict[str, list[str]] = {t: [] for t in self.nodes}
        for e in self.edges:
            adj[e.t1].append(e.t2)
            adj[e.t2].append(e.t1)
        for t in adj:
            adj[t] = sort_labels(adj[t])
        return adj

    def incidence(self) -> np.ndarray:
        """N x E signed incidence: +1 at the edge's t1, -1 at its t2."""
        B = np.zeros((self.n_nodes, self.n_edges))
        for k, e in enumerate(self.edges):
            B[self._node_index[e.t1], k] = 1.0
            B[self._node_index[e.t2], k] = -1.0
        return B

    def pairs(self) -> list[tuple[str, str]]:
        """All M treatment pairs in canonical order."""
        return [
            (a, b) for x, a in enumerate(self.nodes) for b in self.nodes[x + 1:]
        ]


def _components(nodes: Sequence[str], edges: Sequence[DirectComparison]) -> list[set[str]]:
    adj: dict[str, set[str]] = {t: set() for t in nodes}
    for e in edges:
        adj[e.t1].add(e.t2)
        adj[e.t2].add(e.t1)
    seen: set[str] = set()
    comps = []
    for start in nodes:
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if v not in comp:
                    comp.add(v)
                    stack.append(v)
        seen |= comp
        comps.append(comp)
    return comps


def merge_comparisons(comparisons: Iterable[DirectComparison]) -> list[DirectComparison]:
    """Orient every comparison canonically and pool duplicates per pair."""
    groups: dict[tuple[str, str], list[DirectComparison]] = defaultdict(list)
    for c in comparisons:
        c = c.canonical()
        groups[c.pair].append(c)
    merged = []
    for pair in sorted(groups, key=lambda p: (label_key(p[0]), label_key(p[1]))):
        group = groups[pair]
        if len(group) == 1:
            merged.append(group[0])
            continue
        effect, variance = pool_pairwise([(c.effect, c.variance) for c in group])
        merged.append(
            DirectComparison(pair[0], pair[1], effect, variance, sum(c.n_studies for c in group))
        )
    return merged


def build_network(comparisons: Iterable[DirectComparison]) -> EvidenceNetwork:
    comparisons = list(comparisons)
    if not comparisons:
        raise MissingData("at least one comparison is required")
    edges = merge_comparisons(comparisons)
    nodes = sort_labels({t for e in edges for t in e.pair})
    comps = _components(nodes, edges)
    if len(comps) > 1:
        raise DisconnectedNetwork(comps)
    return EvidenceNetwork(tuple(nodes), tuple(edges))


def subnetwork(network: EvidenceNetwork, drop: Iterable[int] = (), keep_with: str | None = None):
    """Network without the edges in ``drop``.

    When ``keep_with`` is given, only the component containing that treatment
    is retained; otherwise a disconnected result raises.
    """
    dropped = set(drop)
    edges = [e for k, e in enumerate(network.edges) if k not in dropped]
    if keep_with is not None:
        nodes = sort_labels({t for e in edges for t in e.pair} | {keep_with})
        comp = next(c for c in _components(nodes, edges) if keep_with in c)
        edges = [e for e in edges if e.t1 in comp]
        if not edges:
            return None
    return build_network(edges)
