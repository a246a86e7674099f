"""Path-based inconsistency statistic and the classical comparators."""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import linalg

from .distributions import chi2_sf, normal_sf_two_sided
from .errors import (
    InsufficientPaths,
    InvalidLoop,
    NoDirectEvidence,
    NoIndirectEvidence,
    NumericalFailure,
)
from .flow import DEFAULT_FLOW_TOL, EvidenceFlow, evidence_flow
from .independence import DEFAULT_REF_TOL, ReductionResult, independent_subsystem, ref_reduce
from .network import EvidenceNetwork, subnetwork
from .nma import COND_WARN, HatRow, LaplacianSystem, hat_row, laplacian_pinv, nma_estimate
from .paths import DEFAULT_PATH_CAP, EvidencePath, PathSystem, build_path_system, enumerate_paths


class Status(str, enum.Enum):
    OK = "ok"
    SINGLE_PATH = "single_path"
    NO_PATHS = "no_paths"


@dataclass(frozen=True)
class NetpathMatrix:
    m: np.ndarray
    labels: tuple[str, ...]
    degenerate: bool = False


@dataclass(frozen=True)
class InconsistencyReport:
    comparison: tuple[str, str]
    q: float
    dof: int
    p_value: float | None
    n_paths: int
    n_independent: int
    kept_paths: tuple[EvidencePath, ...]
    status: Status
    nma_effect: float = math.nan
    nma_variance: float = math.nan
    # full enumeration and its derived matrices, for verbose output
    system: PathSystem | None = field(default=None, repr=False)
    reduced: PathSystem | None = field(default=None, repr=False)
    reduction: ReductionResult | None = field(default=None, repr=False)
    row: HatRow | None = field(default=None, repr=False)
    flow: EvidenceFlow | None = field(default=None, repr=False)

    @property
    def label(self) -> str:
        return f"{self.comparison[0]}:{self.comparison[1]}"

    @property
    def removed_numbers(self) -> list[int]:
        if self.reduction is None or self.system is None:
            return []
        return [self.system.numbers[k] for k, _ in self.reduction.removed]


@dataclass(frozen=True)
class ZTestResult:
    omega: float
    se: float
    z: float
    p_value: float


def _z_test(diff: float, variance: float) -> ZTestResult:
    se = math.sqrt(variance)
    omega = abs(diff)
    z = omega / se
    return ZTestResult(omega=omega, se=se, z=z, p_value=normal_sf_two_sided(z))


def quadratic_form(deviation: np.ndarray, Sigma: np.ndarray) -> float:
    """d' Sigma^-1 d through a Cholesky solve."""
    if Sigma.shape[0] > 1:
        cond = np.linalg.cond(Sigma)
        if cond > COND_WARN:
            warnings.warn(f"ill-conditioned path covariance (cond={cond:.3g})", RuntimeWarning, stacklevel=3)
    try:
        factor = linalg.cho_factor(Sigma, lower=True, check_finite=True)
    except linalg.LinAlgError as exc:
        raise NumericalFailure(f"path covariance is not positive definite: {exc}") from None
    solved = linalg.cho_solve(factor, deviation)
    return max(0.0, float(deviation @ solved))


def netpath_matrix(effects: Sequence[float], labels: Sequence[str] | None = None) -> NetpathMatrix:
    """Pairwise absolute differences scaled by the largest one."""
    effects = np.asarray(effects, dtype=float)
    P = effects.size
    if P < 2:
        raise InsufficientPaths(f"a Netpath matrix needs at least 2 paths, got {P}")
    if labels is None:
        labels = [f"π{k}" for k in range(1, P + 1)]
    diff = np.abs(effects[:, None] - effects[None, :])
    top = float(diff.max())
    if top == 0.0:
        return NetpathMatrix(np.zeros((P, P)), tuple(labels), degenerate=True)
    return NetpathMatrix(diff / top, tuple(labels))


def q_path(
    network: EvidenceNetwork,
    i: str,
    j: str,
    cap: int = DEFAULT_PATH_CAP,
    tol: float = DEFAULT_REF_TOL,
    flow_tol: float = DEFAULT_FLOW_TOL,
    system: LaplacianSystem | None = None,
) -> tuple[InconsistencyReport, NetpathMatrix | None]:
    if system is None:
        system = laplacian_pinv(network)
    row = hat_row(system, network, i, j)
    effect, variance = nma_estimate(system, network, i, j)
    flow = evidence_flow(row, flow_tol)
    paths = enumerate_paths(flow, cap)
    common = dict(comparison=(i, j), nma_effect=effect, nma_variance=variance, row=row, flow=flow)
    if not paths:
        return InconsistencyReport(
            q=0.0, dof=0, p_value=None, n_paths=0, n_independent=0,
            kept_paths=(), status=Status.NO_PATHS, **common,
        ), None
    full = build_path_system(paths, network)
    reduction = ref_reduce(full.A, tol)
    reduced = independent_subsystem(full, reduction)
    extra = dict(system=full, reduced=reduced, reduction=reduction)
    if reduced.n_paths == 1:
        return InconsistencyReport(
            q=0.0, dof=0, p_value=None, n_paths=full.n_paths, n_independent=1,
            kept_paths=reduced.paths, status=Status.SINGLE_PATH, **common, **extra,
        ), None
    q = quadratic_form(reduced.effects - effect, reduced.Sigma)
    dof = reduced.n_paths - 1
    report = InconsistencyReport(
        q=q, dof=dof, p_value=chi2_sf(q, dof), n_paths=full.n_paths,
        n_independent=reduced.n_paths, kept_paths=reduced.paths, status=Status.OK,
        **common, **extra,
    )
    labels = [f"π{k}" for k in range(1, reduced.n_paths + 1)]
    return report, netpath_matrix(reduced.effects, labels)


def q_path_pinv(system: PathSystem, nma_effect: float) -> float:
    """Q over all paths using the Moore-Penrose pseudo-inverse of the full Sigma."""
    d = system.effects - nma_effect
    return float(d @ np.linalg.pinv(system.Sigma, rcond=1e-10, hermitian=True) @ d)


def side_split(network: EvidenceNetwork, i: str, j: str) -> ZTestResult:
    """Direct evidence against the pooled indirect estimate from the rest of the network."""
    network.node_index(i)
    network.node_index(j)
    k = network.edge_index(i, j)
    if k is None:
        raise NoDirectEvidence(f"no direct comparison {i}:{j}")
    e = network.edges[k]
    direct = e.effect if e.t1 == i else -e.effect
    rest = subnetwork(network, drop=[k], keep_with=i)
    if rest is None or j not in rest.nodes:
        raise NoIndirectEvidence(f"removing {i}:{j} disconnects {i} from {j}")
    indirect, indirect_var = nma_estimate(laplacian_pinv(rest), rest, i, j)
    return _z_test(direct - indirect, e.variance + indirect_var)


def loop_test(network: EvidenceNetwork, loop: Sequence[str]) -> ZTestResult:
    """Z-test on the signed sum of effects around a closed loop."""
    loop = list(loop)
    if len(loop) < 3 or len(set(loop)) != len(loop):
        raise InvalidLoop(f"a loop needs at least 3 distinct treatments, got {loop}")
    total, variance = 0.0, 0.0
    for a, b in zip(loop, loop[1:] + loop[:1]):
        k = network.edge_index(a, b)
        if k is None:
            raise InvalidLoop(f"loop uses {a}:{b}, which is not directly compared")
        total += network.oriented_effect(a, b)
        variance += network.edges[k].variance
    return _z_test(total, variance)


def enumerate_loops(network: EvidenceNetwork, i: str, j: str, max_len: int | None = None) -> list[tuple[str, ...]]:
    """Simple cycles through edge (i, j), listed as i, ..., j with the closing edge implied."""
    if not network.has_edge(i, j):
        raise NoDirectEvidence(f"no direct comparison {i}:{j}")
    if max_len is None:
        max_len = network.n_nodes
    if max_len < 3:
        raise ValueError("loops have at least 3 treatments")
    adj = network.neighbours()
    loops: list[tuple[str, ...]] = []

    def extend(path: list[str]):
        for v in adj[path[-1]]:
            if v == j:
                if len(path) >= 2:
                    loops.append(tuple(path) + (j,))
                continue
            if v in path or len(path) + 1 >= max_len:
                continue
            path.append(v)
            extend(path)
            path.pop()

    extend([i])
    return loops


def all_comparisons(network: EvidenceNetwork, **kwargs) -> list[tuple[InconsistencyReport, NetpathMatrix | None]]:
    system = laplacian_pinv(network)
    return [q_path(network, a, b, system=system, **kwargs) for a, b in network.pairs()]

