"""Sparse linear constraint systems, null spaces, and metric solves.

Null spaces are computed by singular value decomposition with a cutoff
relative to the largest singular value, and cross-checked elsewhere by exact
rational Gaussian elimination (``exact_nullity``), which never rounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from .errors import DegenerateSystem, NearSingularMetric, SlotMismatch
from .tensors import LOWER, TensorValue

DET_FLOOR = 1e-10
NULL_SPACE_TOL = 1e-9
SOLVE_RESIDUAL_TOL = 1e-10

Row = Tuple[Tuple[int, float], ...]


@dataclass(frozen=True)
class LinearConstraintSystem:
    """Homogeneous system A x = 0 stored as sparse rows of (index, coeff)."""

    n_unknowns: int
    rows: Tuple[Row, ...]

    @staticmethod
    def from_rows(
        n_unknowns: int, rows: Iterable[Sequence[Tuple[int, float]]]
    ) -> "LinearConstraintSystem":
        packed = []
        for row in rows:
            for idx, _ in row:
                if not 0 <= idx < n_unknowns:
                    raise SlotMismatch(
                        f"column {idx} out of range for {n_unknowns} unknowns"
                    )
            packed.append(tuple((int(i), float(c)) for i, c in row))
        return LinearConstraintSystem(n_unknowns, tuple(packed))

    def to_dense(self) -> np.ndarray:
        dense = np.zeros((len(self.rows), self.n_unknowns))
        for r, row in enumerate(self.rows):
            for idx, coeff in row:
                dense[r, idx] += coeff
        return dense


def null_space(
    system: LinearConstraintSystem, tol: float = NULL_SPACE_TOL
) -> Tuple[int, List[np.ndarray]]:
    """Dimension and orthonormal basis of the null space of the system.

    ``tol`` is relative to the largest singular value; singular values at or
    below the cutoff count as zero.
    """
    if system.n_unknowns == 0:
        raise DegenerateSystem("system has no unknowns")
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    n = system.n_unknowns
    if not system.rows:
        return n, [np.eye(n)[i] for i in range(n)]
    dense = system.to_dense()
    _, sigma, vt = np.linalg.svd(dense, full_matrices=True)
    largest = sigma[0] if sigma.size else 0.0
    if largest == 0.0:
        rank = 0
    else:
        rank = int(np.sum(sigma > tol * largest))
    basis = [vt[i] for i in range(rank, n)]
    return n - rank, basis


def exact_nullity(system: LinearConstraintSystem) -> int:
    """Null space dimension by exact Gaussian elimination over the rationals.

    Coefficients are converted to exact fractions (floats convert exactly),
    so the returned rank involves no rounding at all.  Pivot rows are kept in
    reduced form to bound fill-in; all catalog constraint rows are short.
    """
    if system.n_unknowns == 0:
        raise DegenerateSystem("system has no unknowns")
    zero = Fraction(0)
    pivots: dict[int, dict[int, Fraction]] = {}
    for raw in system.rows:
        row: dict[int, Fraction] = {}
        for idx, coeff in raw:
            acc = row.get(idx, zero) + Fraction(coeff)
            if acc:
                row[idx] = acc
            else:
                row.pop(idx, None)
        while row:
            hit = next((c for c in row if c in pivots), None)
            if hit is None:
                break
            factor = row.pop(hit)
            for c, v in pivots[hit].items():
                if c == hit:
                    continue
                acc = row.get(c, zero) - factor * v
                if acc:
                    row[c] = acc
                else:
                    row.pop(c, None)
        if not row:
            continue
        pcol = min(row)
        pval = row[pcol]
        prow = {c: v / pval for c, v in row.items()}
        for qrow in pivots.values():
            if pcol in qrow:
                f = qrow.pop(pcol)
                for c, v in prow.items():
                    if c == pcol:
                        continue
                    acc = qrow.get(c, zero) - f * v
                    if acc:
                        qrow[c] = acc
                    else:
                        qrow.pop(c, None)
        pivots[pcol] = prow
    return system.n_unknowns - len(pivots)


def _metric_matrix(g) -> np.ndarray:
    if isinstance(g, TensorValue):
        if g.variance != (LOWER, LOWER):
            raise SlotMismatch("metric must have two lower slots")
        return np.asarray(g.data, dtype=float)
    return np.asarray(g, dtype=float)


def solve_metric(g, rhs: np.ndarray) -> np.ndarray:
    """Solve g x = rhs for a symmetric, possibly indefinite, metric g.

    Uses a pivoted dense factorization; raises ``NearSingularMetric`` when
    the determinant is at or below the floor or the residual check fails.
    """
    mat = _metric_matrix(g)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise SlotMismatch(f"metric matrix must be square, got {mat.shape}")
    if not np.allclose(mat, mat.T, rtol=0.0, atol=1e-12):
        raise SlotMismatch("metric matrix must be symmetric")
    det = float(np.linalg.det(mat))
    if abs(det) <= DET_FLOOR:
        raise NearSingularMetric(f"|det g| = {abs(det):.3e} at or below floor")
    b = np.asarray(rhs, dtype=float)
    x = np.linalg.solve(mat, b)
    scale = float(np.max(np.abs(b))) if b.size else 0.0
    if scale > 0.0:
        residual = float(np.max(np.abs(mat @ x - b)))
        if residual >= SOLVE_RESIDUAL_TOL * scale:
            raise NearSingularMetric(
                f"solve residual {residual:.3e} exceeds {SOLVE_RESIDUAL_TOL:.0e} x rhs"
            )
    return x
