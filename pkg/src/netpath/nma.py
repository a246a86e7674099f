"""Common-effect network estimates through the weighted graph Laplacian."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import InvalidComparison, NumericalFailure
from .network import EvidenceNetwork

COND_WARN = 1e12


@dataclass(frozen=True)
class LaplacianSystem:
    L: np.ndarray
    Lplus: np.ndarray


@dataclass(frozen=True)
class HatRow:
    source: str
    sink: str
    coefficients: np.ndarray  # one entry per network edge, stored orientation
    edges: tuple[tuple[str, str], ...]


def weighted_laplacian(network: EvidenceNetwork) -> np.ndarray:
    B = network.incidence()
    return (B * network.weights) @ B.T


def laplacian_pinv(network: EvidenceNetwork) -> LaplacianSystem:
    """Moore-Penrose pseudo-inverse of L as ``(L + J/N)^-1 - J/N``.

    Valid because the null space of a connected Laplacian is spanned by the
    all-ones vector; adding J/N lifts its zero eigenvalue to 1.
    """
    L = weighted_laplacian(network)
    n = L.shape[0]
    J = np.full((n, n), 1.0 / n)
    M = L + J
    cond = np.linalg.cond(M)
    if not np.isfinite(cond):
        raise NumericalFailure("L + J/N is singular; is the network connected?")
    if cond > COND_WARN:
        warnings.warn(f"ill-conditioned Laplacian (cond={cond:.3g})", RuntimeWarning, stacklevel=2)
    try:
        chol = np.linalg.cholesky(M)
        inv_chol = np.linalg.solve(chol, np.eye(n))
        Minv = inv_chol.T @ inv_chol
    except np.linalg.LinAlgError:
        vals, vecs = np.linalg.eigh(M)
        if np.min(vals) <= 0:
            raise NumericalFailure("L + J/N is not positive definite") from None
        Minv = (vecs / vals) @ vecs.T
    Lplus = Minv - J
    Lplus = 0.5 * (Lplus + Lplus.T)
    return LaplacianSystem(L=L, Lplus=Lplus)


def _potential(system: LaplacianSystem, network: EvidenceNetwork, i: str, j: str) -> np.ndarray:
    if i == j:
        raise InvalidComparison(f"comparison requires two distinct treatments, got {i}:{i}")
    a = network.node_index(i)
    b = network.node_index(j)
    return system.Lplus[:, a] - system.Lplus[:, b]


def hat_row(system: LaplacianSystem, network: EvidenceNetwork, i: str, j: str) -> HatRow:
    """Row of the hat matrix for ``i`` vs ``j`` over the observed edges.

    Coefficient on edge (k, l) is the unit electrical flow from k to l when
    current enters at ``i`` and leaves at ``j``.
    """
    phi = _potential(system, network, i, j)
    B = network.incidence()
    coef = network.weights * (B.T @ phi)
    return HatRow(source=i, sink=j, coefficients=coef, edges=tuple(e.pair for e in network.edges))


def nma_estimate(system: LaplacianSystem, network: EvidenceNetwork, i: str, j: str) -> tuple[float, float]:
    row = hat_row(system, network, i, j)
    effect = float(row.coefficients @ network.effects)
    phi = _potential(system, network, i, j)
    a, b = network.node_index(i), network.node_index(j)
    variance = float(phi[a] - phi[b])
    return effect, variance


def resistance(system: LaplacianSystem, network: EvidenceNetwork, i: str, j: str) -> float:
    """Effective resistance between two treatments, equal to the NMA variance."""
    return nma_estimate(system, network, i, j)[1]
