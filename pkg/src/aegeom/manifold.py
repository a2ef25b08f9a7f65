"""Charted manifolds carrying a metric and a squared-identity structure.

A structure kind is a pair of signs (alpha, epsilon): the structure tensor J
satisfies J^2 = alpha * Id and the metric satisfies g(JX, JY) = epsilon *
g(X, Y).  The four kinds are almost Hermitian (-1, +1), almost product
Riemannian (+1, +1, with trace J = 0 required), almost Norden (-1, -1), and
almost para-Hermitian (+1, -1).  The last two force a split-signature
metric.

Metric and structure components are arbitrary callables of the chart
coordinates; they must accept ``Dual`` scalars so that first derivatives
come out of forward-mode evaluation, exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .dual import Dual, grad_of, value_of
from .errors import (
    ConfigError,
    DomainEmpty,
    ExpressionError,
    NearSingularMetric,
    PointOutsideDomain,
    SlotMismatch,
)
from .expressions import parse_expression
from .linalg import DET_FLOOR
from .tensors import LOWER, UPPER, TensorValue

VALIDATION_TOL = 1e-8

FieldFn = Callable[[Sequence], Sequence[Sequence]]


@dataclass(frozen=True)
class StructureKind:
    """Sign pair selecting one of the four compatible geometries."""

    alpha: int
    epsilon: int

    def __post_init__(self) -> None:
        if self.alpha not in (-1, 1) or self.epsilon not in (-1, 1):
            raise ValueError("alpha and epsilon must each be -1 or +1")

    @property
    def product(self) -> int:
        return self.alpha * self.epsilon

    @property
    def label(self) -> str:
        return _KIND_LABELS[(self.alpha, self.epsilon)]

    @staticmethod
    def from_name(name: str) -> "StructureKind":
        for (alpha, epsilon), label in _KIND_LABELS.items():
            if label == name:
                return StructureKind(alpha, epsilon)
        known = ", ".join(sorted(_KIND_LABELS.values()))
        raise ValueError(f"unknown structure kind {name!r} (known: {known})")


_KIND_LABELS = {
    (-1, 1): "hermitian",
    (1, 1): "product-riemannian",
    (-1, -1): "norden",
    (1, -1): "para-hermitian",
}

HERMITIAN = StructureKind(-1, 1)
PRODUCT_RIEMANNIAN = StructureKind(1, 1)
NORDEN = StructureKind(-1, -1)
PARA_HERMITIAN = StructureKind(1, -1)
KINDS = (HERMITIAN, PRODUCT_RIEMANNIAN, NORDEN, PARA_HERMITIAN)


@dataclass(frozen=True)
class Box:
    """Axis-aligned open box used as a chart domain."""

    lo: Tuple[float, ...]
    hi: Tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "lo", tuple(float(x) for x in self.lo))
        object.__setattr__(self, "hi", tuple(float(x) for x in self.hi))
        if len(self.lo) != len(self.hi):
            raise ValueError("lo and hi must have equal length")

    @property
    def dim(self) -> int:
        return len(self.lo)

    def is_empty(self) -> bool:
        return any(h <= l for l, h in zip(self.lo, self.hi))

    def contains(self, point: Sequence[float]) -> bool:
        if len(point) != self.dim:
            return False
        return all(
            l < float(x) < h for l, x, h in zip(self.lo, point, self.hi)
        )


@dataclass(frozen=True)
class ChartedManifold:
    """Single-chart manifold with metric and structure component functions."""

    name: str
    kind: StructureKind
    dim: int
    domain: Box
    metric: FieldFn
    structure: FieldFn

    def __post_init__(self) -> None:
        if self.dim < 2 or self.dim % 2 != 0:
            raise ValueError(f"dimension must be even and >= 2, got {self.dim}")
        if self.domain.dim != self.dim:
            raise ValueError("domain dimension does not match manifold dimension")


@dataclass(frozen=True)
class SamplePlan:
    """Deterministic sample of interior points and probe vectors."""

    seed: int = 0
    n_points: int = 50
    n_vector_triples: int = 20

    def __post_init__(self) -> None:
        if self.n_points < 1 or self.n_vector_triples < 1:
            raise ValueError("sample counts must be positive")

    def points(self, domain: Box) -> np.ndarray:
        """Points strictly inside the box, stable under shrinking n_points."""
        if domain.is_empty():
            raise DomainEmpty(f"domain {domain.lo} .. {domain.hi} has no interior")
        rng = np.random.default_rng([self.seed, 11])
        u = rng.random((self.n_points, domain.dim))
        lo = np.asarray(domain.lo)
        hi = np.asarray(domain.hi)
        return lo + (0.05 + 0.9 * u) * (hi - lo)

    def vector_triples(self, dim: int) -> np.ndarray:
        """Triples of probe vectors with infinity norm in [0.1, 1]."""
        rng = np.random.default_rng([self.seed, 13])
        raw = rng.uniform(-1.0, 1.0, (self.n_vector_triples, 3, dim))
        scale_rng = np.random.default_rng([self.seed, 17])
        targets = 0.1 + 0.9 * scale_rng.random((self.n_vector_triples, 3))
        norms = np.max(np.abs(raw), axis=2)
        norms[norms == 0.0] = 1.0
        return raw * (targets / norms)[:, :, None]


def evaluate_fields(m: ChartedManifold, point: Sequence[float]):
    """Metric and structure matrices at a point, as float arrays."""
    if not m.domain.contains(point):
        raise PointOutsideDomain(f"point {tuple(point)} not inside {m.name} domain")
    coords = [float(x) for x in point]
    g = _as_matrix(m.metric(coords), m.dim, "metric")
    j = _as_matrix(m.structure(coords), m.dim, "structure")
    return g, j


def eval_with_derivatives(m: ChartedManifold, point: Sequence[float]):
    """Values and first derivatives of the metric and structure at a point.

    Returns TensorValues (g, dg, J, dJ) where dg[k, i, j] = d_k g_ij and
    dJ[k, i, j] = d_k J^i_j; the derivative index always comes first.
    """
    if not m.domain.contains(point):
        raise PointOutsideDomain(f"point {tuple(point)} not inside {m.name} domain")
    d = m.dim
    coords = Dual.seed([float(x) for x in point])
    g_entries = m.metric(coords)
    j_entries = m.structure(coords)
    g = np.empty((d, d))
    dg = np.empty((d, d, d))
    jj = np.empty((d, d))
    dj = np.empty((d, d, d))
    for i in range(d):
        for j in range(d):
            ge = g_entries[i][j]
            je = j_entries[i][j]
            g[i, j] = value_of(ge)
            dg[:, i, j] = grad_of(ge, d)
            jj[i, j] = value_of(je)
            dj[:, i, j] = grad_of(je, d)
    return (
        TensorValue(g, (LOWER, LOWER)),
        TensorValue(dg, (LOWER, LOWER, LOWER)),
        TensorValue(jj, (UPPER, LOWER)),
        TensorValue(dj, (LOWER, UPPER, LOWER)),
    )


@dataclass
class ValidationReport:
    """Pointwise structure-axiom residuals over a deterministic sample."""

    manifold: str
    alpha: int
    epsilon: int
    seed: int
    n_points: int
    residuals: Dict[str, float]
    min_abs_det: float
    failures: List[str]
    valid: bool

    def to_dict(self) -> dict:
        return {
            "manifold": self.manifold,
            "alpha": self.alpha,
            "epsilon": self.epsilon,
            "seed": self.seed,
            "n_points": self.n_points,
            "residuals": dict(self.residuals),
            "min_abs_det": self.min_abs_det,
            "failures": list(self.failures),
            "valid": self.valid,
        }

    @staticmethod
    def from_dict(data: dict) -> "ValidationReport":
        return ValidationReport(
            manifold=data["manifold"],
            alpha=data["alpha"],
            epsilon=data["epsilon"],
            seed=data["seed"],
            n_points=data["n_points"],
            residuals=dict(data["residuals"]),
            min_abs_det=data["min_abs_det"],
            failures=list(data["failures"]),
            valid=data["valid"],
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    @staticmethod
    def from_json(text: str) -> "ValidationReport":
        return ValidationReport.from_dict(json.loads(text))

    def render_text(self) -> str:
        lines = [
            f"manifold: {self.manifold}",
            f"kind: alpha={self.alpha:+d} epsilon={self.epsilon:+d}",
            f"sample: seed={self.seed} points={self.n_points}",
            f"min |det g|: {self.min_abs_det:.6e}",
            "residuals:",
        ]
        for key in sorted(self.residuals):
            lines.append(f"  {key:24s} {self.residuals[key]:.6e}")
        if self.failures:
            lines.append("failed checks: " + ", ".join(self.failures))
        lines.append("verdict: " + ("valid" if self.valid else "invalid"))
        return "\n".join(lines) + "\n"


def validate_structure(
    m: ChartedManifold, plan: SamplePlan, tol: float = VALIDATION_TOL
) -> ValidationReport:
    """Check the structure axioms pointwise over the plan's sample.

    Residual keys: ``structure_squared`` for J^2 - alpha*Id,
    ``metric_symmetry`` for g - g^T, ``metric_isometry`` for
    g(J., J.) - epsilon*g, ``pairing_swap`` for g(J., .) - alpha*epsilon*
    g(., J.), and for the product-Riemannian kind ``structure_trace``.
    Raises ``NearSingularMetric`` at the first sampled point where
    |det g| falls to the floor.
    """
    alpha, epsilon = m.kind.alpha, m.kind.epsilon
    keys = ["structure_squared", "metric_symmetry", "metric_isometry", "pairing_swap"]
    if m.kind == PRODUCT_RIEMANNIAN:
        keys.append("structure_trace")
    residuals = {key: 0.0 for key in keys}
    min_abs_det = np.inf
    eye = np.eye(m.dim)
    for point in plan.points(m.domain):
        g, j = evaluate_fields(m, point)
        det = abs(float(np.linalg.det(g)))
        if det <= DET_FLOOR:
            raise NearSingularMetric(
                f"|det g| = {det:.3e} at sampled point of {m.name}", point=point
            )
        min_abs_det = min(min_abs_det, det)
        residuals["structure_squared"] = max(
            residuals["structure_squared"], _inf(j @ j - alpha * eye)
        )
        residuals["metric_symmetry"] = max(
            residuals["metric_symmetry"], _inf(g - g.T)
        )
        residuals["metric_isometry"] = max(
            residuals["metric_isometry"], _inf(j.T @ g @ j - epsilon * g)
        )
        residuals["pairing_swap"] = max(
            residuals["pairing_swap"],
            _inf(g @ j - alpha * epsilon * (g @ j).T),
        )
        if "structure_trace" in residuals:
            residuals["structure_trace"] = max(
                residuals["structure_trace"], abs(float(np.trace(j)))
            )
    failures = [key for key in keys if residuals[key] >= tol]
    return ValidationReport(
        manifold=m.name,
        alpha=alpha,
        epsilon=epsilon,
        seed=plan.seed,
        n_points=plan.n_points,
        residuals=residuals,
        min_abs_det=float(min_abs_det),
        failures=failures,
        valid=not failures,
    )


def _inf(arr: np.ndarray) -> float:
    return float(np.max(np.abs(arr)))


def _as_matrix(entries, dim: int, what: str) -> np.ndarray:
    out = np.empty((dim, dim))
    try:
        for i in range(dim):
            for j in range(dim):
                out[i, j] = value_of(entries[i][j])
    except (IndexError, TypeError) as exc:
        raise SlotMismatch(f"{what} must produce a {dim}x{dim} matrix") from exc
    return out


def load_manifold_config(path) -> ChartedManifold:
    """Build a manifold from a JSON description of its components.

    The file must provide ``kind`` ({"alpha": +-1, "epsilon": +-1}),
    ``dim``, ``domain`` ({"lo": [...], "hi": [...]}), and ``metric`` and
    ``structure`` as dim x dim arrays of expression strings in x1 .. x<dim>.
    An optional ``name`` overrides the file stem.
    """
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be an object")

    kind_raw = _require(raw, "kind", dict, path)
    for key in ("alpha", "epsilon"):
        if key not in kind_raw:
            raise ConfigError(f"{path}: kind.{key} is missing")
    try:
        kind = StructureKind(int(kind_raw["alpha"]), int(kind_raw["epsilon"]))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc

    dim = _require(raw, "dim", int, path)
    domain_raw = _require(raw, "domain", dict, path)
    for key in ("lo", "hi"):
        if key not in domain_raw or not isinstance(domain_raw[key], list):
            raise ConfigError(f"{path}: domain.{key} must be a list")
    try:
        domain = Box(tuple(domain_raw["lo"]), tuple(domain_raw["hi"]))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    if domain.dim != dim:
        raise ConfigError(f"{path}: domain length {domain.dim} but dim {dim}")
    if domain.is_empty():
        raise DomainEmpty(f"{path}: domain has no interior")

    metric_exprs = _compile_matrix(raw, "metric", dim, path)
    structure_exprs = _compile_matrix(raw, "structure", dim, path)
    name = raw.get("name", path.stem)
    if not isinstance(name, str) or not name:
        raise ConfigError(f"{path}: name must be a non-empty string")

    def metric_fn(coords, _exprs=metric_exprs):
        return [[e.evaluate(coords) for e in row] for row in _exprs]

    def structure_fn(coords, _exprs=structure_exprs):
        return [[e.evaluate(coords) for e in row] for row in _exprs]

    return ChartedManifold(
        name=name,
        kind=kind,
        dim=dim,
        domain=domain,
        metric=metric_fn,
        structure=structure_fn,
    )


def _require(raw: dict, key: str, expected_type, path):
    if key not in raw:
        raise ConfigError(f"{path}: {key!r} is missing")
    value = raw[key]
    if expected_type is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{path}: {key!r} must be an integer")
    elif not isinstance(value, expected_type):
        raise ConfigError(f"{path}: {key!r} must be a {expected_type.__name__}")
    return value


def _compile_matrix(raw: dict, key: str, dim: int, path):
    rows = raw.get(key)
    if (
        not isinstance(rows, list)
        or len(rows) != dim
        or any(not isinstance(r, list) or len(r) != dim for r in rows)
    ):
        raise ConfigError(f"{path}: {key!r} must be a {dim}x{dim} array of strings")
    compiled = []
    for i, row in enumerate(rows):
        out_row = []
        for j, cell in enumerate(row):
            if not isinstance(cell, str):
                raise ConfigError(f"{path}: {key}[{i}][{j}] must be a string")
            try:
                out_row.append(parse_expression(cell, dim))
            except ExpressionError as exc:
                raise ExpressionError(
                    f"{key}[{i}][{j}] of {path.name}: {exc.message}",
                    exc.line,
                    exc.column,
                ) from exc
        compiled.append(out_row)
    return compiled
