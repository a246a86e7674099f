"""Selection of a maximal linearly independent set of paths."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidTolerance
from .paths import PathSystem

DEFAULT_REF_TOL = 1e-9


@dataclass(frozen=True)
class ReductionResult:
    kept: tuple[int, ...]
    removed: tuple[tuple[int, int], ...]  # (path index, elimination step)
    rank: int
    echelon: np.ndarray  # rows reduced in order; dependent rows are zero


def ref_reduce(A: np.ndarray, tol: float = DEFAULT_REF_TOL) -> ReductionResult:
    """Row echelon reduction of a path-adjacency matrix.

    Rows are processed in enumeration order. Each incoming row is eliminated
    against the pivot rows accepted so far; if what remains is below
    ``tol * max|A|`` the row is a combination of earlier paths and is removed.
    Otherwise its largest remaining entry becomes the next pivot. Taking the
    largest entry rather than the first non-zero one is the pivoting that
    keeps the elimination stable; it does not change which rows vanish.

    Indices are 0-based; the elimination step is the 1-based row number at
    which the row was found to vanish.
    """
    if not tol > 0:
        raise InvalidTolerance(f"tolerance must be positive, got {tol}")
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("expected a square matrix")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix entries must be finite")
    n = A.shape[0]
    scale = float(np.max(np.abs(A))) if A.size else 0.0
    threshold = tol * scale

    echelon = A.copy()
    pivots: list[tuple[int, int]] = []  # (row, column)
    kept, removed = [], []
    for r in range(n):
        row = echelon[r]
        for pr, pc in pivots:
            factor = row[pc] / echelon[pr, pc]
            if factor != 0.0:
                row -= factor * echelon[pr]
                row[pc] = 0.0
        col = int(np.argmax(np.abs(row)))
        if scale == 0.0 or abs(row[col]) <= threshold:
            row[:] = 0.0
            removed.append((r, r + 1))
        else:
            pivots.append((r, col))
            kept.append(r)
    return ReductionResult(tuple(kept), tuple(removed), len(kept), echelon)


def independent_subsystem(system: PathSystem, reduction: ReductionResult) -> PathSystem:
    if len(reduction.kept) == system.n_paths:
        return system
    return system.subset(reduction.kept)
