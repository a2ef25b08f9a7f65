"""Connections and derived tensors at a point.

Index conventions, with d the manifold dimension and all arrays d x d x d:

* ``gamma[k, i, j]``   coefficient of the covariant derivative in direction
  i of the j-th coordinate field, output slot k (symmetric in i, j for the
  metric connection);
* ``nabla_j[k, i, j]`` derivative direction k first, then output i and
  argument j of the differentiated structure tensor;
* ``torsion[i, j, k]`` and ``nijenhuis[i, j, k]`` output slot i first, then
  the two (antisymmetric) argument slots.

The canonical connection adds the correction ((-alpha)/2) (nabla_i J) J to
the metric connection; it makes both the metric and the structure parallel,
which is verified at runtime together with the equality of the alternative
torsion and Nijenhuis formulas.  Any disagreement raises, since it can only
come from an implementation bug.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from .errors import (
    FormulaMismatch,
    NearSingularMetric,
    NijenhuisFormulaMismatch,
    TorsionFormulaMismatch,
)
from .linalg import DET_FLOOR
from .manifold import ChartedManifold, eval_with_derivatives
from .tensors import LOWER, UPPER, TensorValue

PARALLEL_TOL = 1e-8
TORSION_AGREEMENT_TOL = 1e-9
NIJENHUIS_AGREEMENT_TOL = 1e-8


@dataclass(frozen=True)
class ConnectionCoefficients:
    """Coefficients gamma[k, i, j] of an affine connection at a point."""

    point: Tuple[float, ...]
    gamma: TensorValue


@dataclass(frozen=True)
class DerivedTensors:
    """Structure derivative, canonical torsion, and Nijenhuis at a point."""

    point: Tuple[float, ...]
    nabla_j: TensorValue
    torsion: TensorValue
    nijenhuis: TensorValue


class _Frame:
    """All pointwise raw arrays needed downstream, computed in one pass."""

    __slots__ = (
        "point",
        "alpha",
        "epsilon",
        "g",
        "dg",
        "j",
        "dj",
        "gamma",
        "nabla_j",
    )

    def __init__(self, m: ChartedManifold, point: Sequence[float]) -> None:
        g_t, dg_t, j_t, dj_t = eval_with_derivatives(m, point)
        self.point = tuple(float(x) for x in point)
        self.alpha = m.kind.alpha
        self.epsilon = m.kind.epsilon
        g = np.asarray(g_t.data)
        dg = np.asarray(dg_t.data)
        self.g = g
        self.dg = dg
        self.j = np.asarray(j_t.data)
        self.dj = np.asarray(dj_t.data)
        det = float(np.linalg.det(g))
        if abs(det) <= DET_FLOOR:
            raise NearSingularMetric(
                f"|det g| = {abs(det):.3e} at {self.point}", point=point
            )
        d = g.shape[0]
        rhs = (
            np.einsum("ilj->lij", dg)
            + np.einsum("jil->lij", dg)
            - dg
        )
        self.gamma = 0.5 * np.linalg.solve(g, rhs.reshape(d, d * d)).reshape(
            d, d, d
        )
        self.nabla_j = _covariant_structure(self.dj, self.gamma, self.j)


def _covariant_structure(dj, gamma, j):
    """nabla[k, i, j] for any connection coefficients gamma."""
    return (
        dj
        + np.einsum("ika,aj->kij", gamma, j)
        - np.einsum("akj,ia->kij", gamma, j)
    )


def _covariant_metric(dg, gamma, g):
    """(nabla_k g)_ij for any connection coefficients gamma."""
    return (
        dg
        - np.einsum("aki,aj->kij", gamma, g)
        - np.einsum("akj,ia->kij", gamma, g)
    )


def _inf(arr) -> float:
    return float(np.max(np.abs(arr)))


def _anticommutation_residual(nj, j) -> float:
    return _inf(
        np.einsum("kia,aj->kij", nj, j) + np.einsum("ia,kaj->kij", j, nj)
    )


def _canonical_gamma(frame: _Frame):
    correction = (-frame.alpha / 2.0) * np.einsum(
        "ika,aj->kij", frame.nabla_j, frame.j
    )
    return frame.gamma + correction


def _torsion_three_ways(frame: _Frame):
    nj, j, alpha = frame.nabla_j, frame.j, frame.alpha
    gamma0 = _canonical_gamma(frame)
    t_conn = gamma0 - np.einsum("ikj->ijk", gamma0)
    t_shifted = (-alpha / 2.0) * (
        np.einsum("jia,ak->ijk", nj, j) - np.einsum("kia,aj->ijk", nj, j)
    )
    t_rotated = (alpha / 2.0) * (
        np.einsum("ia,jak->ijk", j, nj) - np.einsum("ia,kaj->ijk", j, nj)
    )
    return gamma0, t_conn, t_shifted, t_rotated


def _nijenhuis_two_ways(frame: _Frame):
    nj, j, dj = frame.nabla_j, frame.j, frame.dj
    n_deriv = (
        np.einsum("jia,ak->ijk", nj, j)
        + np.einsum("aj,aik->ijk", j, nj)
        - np.einsum("kia,aj->ijk", nj, j)
        - np.einsum("ak,aij->ijk", j, nj)
    )
    n_bracket = (
        np.einsum("aj,aik->ijk", j, dj)
        - np.einsum("ak,aij->ijk", j, dj)
        + np.einsum("ib,kbj->ijk", j, dj)
        - np.einsum("ib,jbk->ijk", j, dj)
    )
    return n_deriv, n_bracket


def christoffel(m: ChartedManifold, point: Sequence[float]) -> ConnectionCoefficients:
    """Coefficients of the metric (torsion-free) connection at a point."""
    frame = _Frame(m, point)
    return ConnectionCoefficients(
        point=frame.point,
        gamma=TensorValue(frame.gamma, (UPPER, LOWER, LOWER)),
    )


def nabla_j(m: ChartedManifold, point: Sequence[float]) -> TensorValue:
    """Covariant derivative of the structure tensor, metric connection.

    Checks the anticommutation of the result with J before returning;
    failure indicates inconsistent inputs or a bug and raises.
    """
    frame = _Frame(m, point)
    residual = _anticommutation_residual(frame.nabla_j, frame.j)
    if residual >= PARALLEL_TOL:
        raise FormulaMismatch(
            f"(nabla J) J + J (nabla J) residual {residual:.3e} at {frame.point}"
        )
    return TensorValue(frame.nabla_j, (LOWER, UPPER, LOWER))


def canonical_connection(
    m: ChartedManifold, point: Sequence[float]
) -> ConnectionCoefficients:
    """Canonical structure-preserving connection at a point.

    Verifies that both the structure tensor and the metric are parallel for
    the returned coefficients.
    """
    frame = _Frame(m, point)
    gamma0 = _canonical_gamma(frame)
    res_j = _inf(_covariant_structure(frame.dj, gamma0, frame.j))
    res_g = _inf(_covariant_metric(frame.dg, gamma0, frame.g))
    if res_j >= PARALLEL_TOL or res_g >= PARALLEL_TOL:
        raise FormulaMismatch(
            f"canonical connection not parallel at {frame.point}: "
            f"structure {res_j:.3e}, metric {res_g:.3e}"
        )
    return ConnectionCoefficients(
        point=frame.point, gamma=TensorValue(gamma0, (UPPER, LOWER, LOWER))
    )


def canonical_torsion(m: ChartedManifold, point: Sequence[float]) -> TensorValue:
    """Torsion of the canonical connection, computed three ways.

    The antisymmetrized coefficients must agree with both closed forms in
    terms of (nabla J) J and J (nabla J); disagreement raises
    ``TorsionFormulaMismatch``.
    """
    frame = _Frame(m, point)
    _, t_conn, t_shifted, t_rotated = _torsion_three_ways(frame)
    spread = max(_inf(t_conn - t_shifted), _inf(t_conn - t_rotated))
    if spread >= TORSION_AGREEMENT_TOL:
        raise TorsionFormulaMismatch(
            f"torsion formulas disagree by {spread:.3e} at {frame.point}"
        )
    return TensorValue(t_conn, (UPPER, LOWER, LOWER))


def nijenhuis(m: ChartedManifold, point: Sequence[float]) -> TensorValue:
    """Nijenhuis tensor, via covariant derivatives and via brackets.

    Also checks that minus half of it equals the canonical torsion with
    structure-rotated arguments plus alpha times the plain torsion; any
    disagreement raises ``NijenhuisFormulaMismatch``.
    """
    frame = _Frame(m, point)
    n_deriv, n_bracket = _nijenhuis_two_ways(frame)
    if _inf(n_deriv - n_bracket) >= NIJENHUIS_AGREEMENT_TOL:
        raise NijenhuisFormulaMismatch(
            f"Nijenhuis routes disagree by {_inf(n_deriv - n_bracket):.3e} "
            f"at {frame.point}"
        )
    _, t_conn, _, _ = _torsion_three_ways(frame)
    relation = (
        np.einsum("aj,bk,iab->ijk", frame.j, frame.j, t_conn)
        + frame.alpha * t_conn
        + 0.5 * n_deriv
    )
    if _inf(relation) >= NIJENHUIS_AGREEMENT_TOL:
        raise NijenhuisFormulaMismatch(
            f"torsion relation residual {_inf(relation):.3e} at {frame.point}"
        )
    return TensorValue(n_deriv, (UPPER, LOWER, LOWER))


def derived_tensors(m: ChartedManifold, point: Sequence[float]) -> DerivedTensors:
    """Structure derivative, torsion, and Nijenhuis in one checked pass."""
    frame = _Frame(m, point)
    arrays = _derived_arrays(frame)
    return DerivedTensors(
        point=frame.point,
        nabla_j=TensorValue(arrays["nabla_j"], (LOWER, UPPER, LOWER)),
        torsion=TensorValue(arrays["torsion"], (UPPER, LOWER, LOWER)),
        nijenhuis=TensorValue(arrays["nijenhuis"], (UPPER, LOWER, LOWER)),
    )


def _derived_arrays(frame: _Frame) -> Dict[str, np.ndarray]:
    residual = _anticommutation_residual(frame.nabla_j, frame.j)
    if residual >= PARALLEL_TOL:
        raise FormulaMismatch(
            f"(nabla J) J + J (nabla J) residual {residual:.3e} at {frame.point}"
        )
    gamma0, t_conn, t_shifted, t_rotated = _torsion_three_ways(frame)
    spread = max(_inf(t_conn - t_shifted), _inf(t_conn - t_rotated))
    if spread >= TORSION_AGREEMENT_TOL:
        raise TorsionFormulaMismatch(
            f"torsion formulas disagree by {spread:.3e} at {frame.point}"
        )
    res_j = _inf(_covariant_structure(frame.dj, gamma0, frame.j))
    res_g = _inf(_covariant_metric(frame.dg, gamma0, frame.g))
    if res_j >= PARALLEL_TOL or res_g >= PARALLEL_TOL:
        raise FormulaMismatch(
            f"canonical connection not parallel at {frame.point}: "
            f"structure {res_j:.3e}, metric {res_g:.3e}"
        )
    n_deriv, n_bracket = _nijenhuis_two_ways(frame)
    if _inf(n_deriv - n_bracket) >= NIJENHUIS_AGREEMENT_TOL:
        raise NijenhuisFormulaMismatch(
            f"Nijenhuis routes disagree by {_inf(n_deriv - n_bracket):.3e} "
            f"at {frame.point}"
        )
    relation = (
        np.einsum("aj,bk,iab->ijk", frame.j, frame.j, t_conn)
        + frame.alpha * t_conn
        + 0.5 * n_deriv
    )
    if _inf(relation) >= NIJENHUIS_AGREEMENT_TOL:
        raise NijenhuisFormulaMismatch(
            f"torsion relation residual {_inf(relation):.3e} at {frame.point}"
        )
    return {
        "g": frame.g,
        "j": frame.j,
        "nabla_j": frame.nabla_j,
        "torsion": t_conn,
        "nijenhuis": n_deriv,
    }


def codazzi_coupled_residuals(
    m: ChartedManifold, point: Sequence[float]
) -> Tuple[float, float]:
    """Residuals of the two coupling equations for the metric connection.

    Returns (structure part, metric part): the antisymmetrized covariant
    derivative of J, and the antisymmetrized covariant derivative of g.  The
    metric part vanishes identically for the metric connection and serves as
    a sharp internal check.
    """
    frame = _Frame(m, point)
    r_j = _inf(frame.nabla_j - np.einsum("jik->kij", frame.nabla_j))
    nabla_g = _covariant_metric(frame.dg, frame.gamma, frame.g)
    r_g = _inf(nabla_g - np.einsum("ikj->kij", nabla_g))
    return r_j, r_g


def identity_residuals(
    m: ChartedManifold,
    point: Sequence[float],
    triples: Optional[np.ndarray] = None,
) -> Dict[str, float]:
    """Pointwise residuals of the built-in identity suite.

    Component-norm keys:

    * ``pairing_swap``: moving J across the metric pairing costs the factor
      alpha*epsilon;
    * ``anticommute``: (nabla J) J = -J (nabla J);
    * ``pairing_symmetry``: swapping the two non-derivative arguments of
      g((nabla J) ., .) costs alpha*epsilon;
    * ``pairing_j_shift``: moving J from argument to pairing slot costs
      -alpha*epsilon;
    * ``twin_codazzi_match``: the twin form g(J., .) has Codazzi defect
      equal to the paired Codazzi defect of J;
    * ``nabla_g`` and ``codazzi_nabla_g``: the metric connection leaves g
      parallel;
    * for split-sign kinds also ``fundamental_form_antisymmetry`` and
      ``fundamental_form_nearly_match`` for the form g(J., .).

    When ``triples`` is given, each residual tensor is additionally
    contracted with every sampled (X, Y, Z) and the maxima are reported
    under the same keys with suffix ``_on_vectors``.
    """
    frame = _Frame(m, point)
    g, dg, j, dj = frame.g, frame.dg, frame.j, frame.dj
    nj, gamma = frame.nabla_j, frame.gamma
    ae = frame.alpha * frame.epsilon

    out: Dict[str, float] = {}
    tensors: Dict[str, np.ndarray] = {}

    pairing_swap = np.einsum("ai,aj->ij", j, g) - ae * np.einsum(
        "ib,bj->ij", g, j
    )
    tensors["pairing_swap"] = pairing_swap

    tensors["anticommute"] = np.einsum("kia,aj->kij", nj, j) + np.einsum(
        "ia,kaj->kij", j, nj
    )

    paired = np.einsum("aj,kai->kij", g, nj)
    tensors["pairing_symmetry"] = paired - ae * np.einsum("kij->kji", paired)

    shift = np.einsum("aj,kab,bi->kij", g, nj, j) + ae * np.einsum(
        "ab,bj,kai->kij", g, j, nj
    )
    tensors["pairing_j_shift"] = shift

    twin = np.einsum("ai,aj->ij", j, g)
    dtwin = np.einsum("kai,aj->kij", dj, g) + np.einsum("ai,kaj->kij", j, dg)
    cov_twin = (
        dtwin
        - np.einsum("aki,aj->kij", gamma, twin)
        - np.einsum("akj,ia->kij", gamma, twin)
    )
    twin_defect = cov_twin - np.einsum("ikj->kij", cov_twin)
    codazzi_j = nj - np.einsum("jik->kij", nj)
    paired_defect = np.einsum("aj,kai->kij", g, codazzi_j)
    tensors["twin_codazzi_match"] = twin_defect - paired_defect

    nabla_g = _covariant_metric(dg, gamma, g)
    tensors["nabla_g"] = nabla_g
    tensors["codazzi_nabla_g"] = nabla_g - np.einsum("ikj->kij", nabla_g)

    if ae == -1:
        tensors["fundamental_form_antisymmetry"] = twin + twin.T
        nearly_form = cov_twin + np.einsum("ikj->kij", cov_twin)
        nearly_j = nj + np.einsum("jik->kij", nj)
        tensors["fundamental_form_nearly_match"] = nearly_form - np.einsum(
            "aj,kai->kij", g, nearly_j
        )

    for key, arr in tensors.items():
        out[key] = _inf(arr)

    if triples is not None:
        for key, arr in tensors.items():
            worst = 0.0
            for triple in triples:
                x, y, z = triple[0], triple[1], triple[2]
                if arr.ndim == 2:
                    val = abs(float(np.einsum("ij,i,j->", arr, x, y)))
                else:
                    val = abs(float(np.einsum("kij,k,i,j->", arr, x, y, z)))
                worst = max(worst, val)
            out[key + "_on_vectors"] = worst
    return out
