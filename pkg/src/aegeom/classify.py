"""Classification of charted structures and checks of the main implications.

A structure is sorted by the pointwise residuals of four conditions: the
structure tensor is parallel (Kahler type), the Nijenhuis tensor vanishes
(integrable), the covariant derivative of the structure alternates in its
direction and argument (nearly), or is symmetric in them (Codazzi).  The
canonical-connection torsion and two derived quantities round out the
picture because the main results tie them to those conditions:

* Kahler type is equivalent to vanishing canonical torsion.
* Integrability is equivalent to vanishing of the torsion shift
  T(J., J.) + alpha T.
* When alpha and epsilon agree, nearly forces Kahler type outright.
* When they disagree, nearly is equivalent to skewness of the pairing
  g(T(x, y), x).
* The Codazzi condition forces Kahler type for every kind.

Each verifier either passes, reports that its hypothesis was not exercised
by the sample, or raises ``TheoremViolation``.  Implications are tested
with a slack factor so that a genuinely tiny hypothesis residual is never
declared a counterexample because of roundoff in the conclusion.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np

from .algebra import MAX_HALF_DIM, ModelFiber, SubspaceQuery, subspace_dimension
from .catalog import catalog, standard_names
from .connection import _Frame, _derived_arrays
from .errors import KindMismatch, TheoremViolation
from .manifold import KINDS, ChartedManifold, SamplePlan, StructureKind

VERDICT_TOL = 1e-8
IMPLICATION_SLACK = 10.0

CONDITIONS = (
    "kahler_type",
    "integrable",
    "nearly",
    "codazzi",
    "canonical_torsion",
    "torsion_shift",
    "torsion_pairing_skew",
)

PLUS_SIGN_CONDITION = "(nabla_x J) y + (nabla_y J) x = 0"
MINUS_SIGN_CONDITION = "(nabla_x J) y - (nabla_y J) x = 0"


def _inf(arr) -> float:
    return float(np.max(np.abs(arr)))


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one theorem check."""

    name: str
    status: str
    details: str

    def to_dict(self) -> Dict[str, str]:
        return {"name": self.name, "status": self.status, "details": self.details}


@dataclass
class ClassificationReport:
    manifold: str
    kind: StructureKind
    seed: int
    n_points: int
    tol: float
    residuals: Dict[str, float]
    verdicts: Dict[str, bool]
    theorem_checks: List[CheckResult]

    def to_dict(self) -> Dict[str, object]:
        return {
            "manifold": self.manifold,
            "kind": {
                "alpha": self.kind.alpha,
                "epsilon": self.kind.epsilon,
                "label": self.kind.label,
            },
            "sample": {"seed": self.seed, "n_points": self.n_points},
            "tol": self.tol,
            "residuals": dict(self.residuals),
            "verdicts": dict(self.verdicts),
            "theorem_checks": [c.to_dict() for c in self.theorem_checks],
        }

    @staticmethod
    def from_dict(data: Dict[str, object]) -> "ClassificationReport":
        kind = StructureKind(
            alpha=int(data["kind"]["alpha"]), epsilon=int(data["kind"]["epsilon"])
        )
        return ClassificationReport(
            manifold=str(data["manifold"]),
            kind=kind,
            seed=int(data["sample"]["seed"]),
            n_points=int(data["sample"]["n_points"]),
            tol=float(data["tol"]),
            residuals={k: float(v) for k, v in data["residuals"].items()},
            verdicts={k: bool(v) for k, v in data["verdicts"].items()},
            theorem_checks=[
                CheckResult(name=c["name"], status=c["status"], details=c["details"])
                for c in data["theorem_checks"]
            ],
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    @staticmethod
    def from_json(text: str) -> "ClassificationReport":
        return ClassificationReport.from_dict(json.loads(text))

    def render_text(self) -> str:
        lines = [
            f"manifold: {self.manifold}",
            f"kind: {self.kind.label} (alpha={self.kind.alpha:+d}, "
            f"epsilon={self.kind.epsilon:+d})",
            f"sample: seed={self.seed}, points={self.n_points}",
            f"tolerance: {self.tol:.1e}",
            "residuals:",
        ]
        for key in CONDITIONS:
            lines.append(f"  {key:22s}{self.residuals[key]:.3e}")
        lines.append("verdicts:")
        for key in CONDITIONS:
            word = "holds" if self.verdicts[key] else "fails"
            lines.append(f"  {key}: {word}")
        lines.append("theorem checks:")
        for check in self.theorem_checks:
            lines.append(f"  {check.name}: {check.status} ({check.details})")
        return "\n".join(lines) + "\n"


def sample_residuals(
    m: ChartedManifold, plan: Optional[SamplePlan] = None
) -> Dict[str, float]:
    """Worst pointwise residual of each condition over the plan's sample."""
    if plan is None:
        plan = SamplePlan()
    alpha = m.kind.alpha
    worst = {key: 0.0 for key in CONDITIONS}
    for point in plan.points(m.domain):
        arrs = _derived_arrays(_Frame(m, point))
        nj = arrs["nabla_j"]
        t = arrs["torsion"]
        g = arrs["g"]
        jm = arrs["j"]
        lowered = np.einsum("ai,ijk->ajk", g, t)
        shift = np.einsum("aj,bk,iab->ijk", jm, jm, t) + alpha * t
        here = {
            "kahler_type": _inf(nj),
            "integrable": _inf(arrs["nijenhuis"]),
            "nearly": _inf(nj + np.einsum("jik->kij", nj)),
            "codazzi": _inf(nj - np.einsum("jik->kij", nj)),
            "canonical_torsion": _inf(t),
            "torsion_shift": _inf(shift),
            "torsion_pairing_skew": _inf(lowered + lowered.transpose(2, 1, 0)),
        }
        for key in CONDITIONS:
            worst[key] = max(worst[key], here[key])
    return worst


def _implication(
    name: str,
    hyp_label: str,
    hyp: float,
    con_label: str,
    con: float,
    tol: float,
) -> CheckResult:
    details = f"{hyp_label} {hyp:.3e}, {con_label} {con:.3e}, tol {tol:.1e}"
    if hyp < tol:
        if con >= IMPLICATION_SLACK * tol:
            raise TheoremViolation(f"{name}: {details}")
        return CheckResult(name=name, status="passed", details=details)
    return CheckResult(name=name, status="hypothesis not met", details=details)


def _biconditional(
    name: str,
    left_label: str,
    left: float,
    right_label: str,
    right: float,
    tol: float,
) -> CheckResult:
    details = f"{left_label} {left:.3e}, {right_label} {right:.3e}, tol {tol:.1e}"
    slack = IMPLICATION_SLACK * tol
    if left < tol and right >= slack:
        raise TheoremViolation(f"{name}: {details}")
    if right < tol and left >= slack:
        raise TheoremViolation(f"{name}: {details}")
    if left < tol or right < tol:
        return CheckResult(name=name, status="passed", details=details)
    return CheckResult(name=name, status="hypothesis not met", details=details)


def _torsion_checks_from(
    residuals: Dict[str, float], tol: float
) -> List[CheckResult]:
    return [
        _biconditional(
            "kahler_type_iff_torsion_free",
            "structure derivative residual",
            residuals["kahler_type"],
            "canonical torsion residual",
            residuals["canonical_torsion"],
            tol,
        ),
        _biconditional(
            "integrable_iff_torsion_shift_vanishes",
            "Nijenhuis residual",
            residuals["integrable"],
            "torsion shift residual",
            residuals["torsion_shift"],
            tol,
        ),
    ]


def _with_subspace_note(
    check: CheckResult, kind: StructureKind, dim: int, query: SubspaceQuery
) -> CheckResult:
    n = dim // 2
    if n > MAX_HALF_DIM:
        return check
    value = subspace_dimension(ModelFiber.standard(kind, n), query)
    if value != 0:
        raise TheoremViolation(
            f"{check.name}: {query.value} subspace has dimension {value} "
            f"for {kind.label}, n={n}"
        )
    note = f", {query.value} subspace dimension {value} (n={n})"
    return CheckResult(
        name=check.name, status=check.status, details=check.details + note
    )


def _nearly_plus_from(
    residuals: Dict[str, float], kind: StructureKind, dim: int, tol: float
) -> CheckResult:
    if kind.product != 1:
        raise KindMismatch(
            "the nearly condition forces a parallel structure only when the "
            f"structure and metric signs agree; kind {kind.label} has "
            f"product {kind.product:+d}"
        )
    check = _implication(
        "nearly_forces_kahler_type",
        "nearly residual",
        residuals["nearly"],
        "structure derivative residual",
        residuals["kahler_type"],
        tol,
    )
    return _with_subspace_note(check, kind, dim, SubspaceQuery.ALTERNATING)


def _nearly_minus_from(
    residuals: Dict[str, float], kind: StructureKind, tol: float
) -> CheckResult:
    if kind.product != -1:
        raise KindMismatch(
            "the nearly condition matches the torsion pairing skewness only "
            f"when the structure and metric signs differ; kind {kind.label} "
            f"has product {kind.product:+d}"
        )
    return _biconditional(
        "nearly_iff_torsion_pairing_skew",
        "nearly residual",
        residuals["nearly"],
        "torsion pairing symmetric part",
        residuals["torsion_pairing_skew"],
        tol,
    )


def _codazzi_from(
    residuals: Dict[str, float], kind: StructureKind, dim: int, tol: float
) -> CheckResult:
    check = _implication(
        "codazzi_forces_kahler_type",
        "codazzi residual",
        residuals["codazzi"],
        "structure derivative residual",
        residuals["kahler_type"],
        tol,
    )
    return _with_subspace_note(check, kind, dim, SubspaceQuery.SYMMETRIC)


def _suite_from_residuals(
    residuals: Dict[str, float], kind: StructureKind, dim: int, tol: float
) -> List[CheckResult]:
    checks = _torsion_checks_from(residuals, tol)
    if kind.product == 1:
        checks.append(_nearly_plus_from(residuals, kind, dim, tol))
    else:
        checks.append(_nearly_minus_from(residuals, kind, tol))
    checks.append(_codazzi_from(residuals, kind, dim, tol))
    return checks


def classify(
    m: ChartedManifold,
    plan: Optional[SamplePlan] = None,
    tol: float = VERDICT_TOL,
) -> ClassificationReport:
    """Residuals, verdicts, and theorem checks for one charted structure."""
    if plan is None:
        plan = SamplePlan()
    residuals = sample_residuals(m, plan)
    verdicts = {key: bool(residuals[key] < tol) for key in CONDITIONS}
    checks = _suite_from_residuals(residuals, m.kind, m.dim, tol)
    return ClassificationReport(
        manifold=m.name,
        kind=m.kind,
        seed=plan.seed,
        n_points=plan.n_points,
        tol=tol,
        residuals=residuals,
        verdicts=verdicts,
        theorem_checks=checks,
    )


def verify_torsion_characterizations(
    m: ChartedManifold,
    plan: Optional[SamplePlan] = None,
    tol: float = VERDICT_TOL,
) -> List[CheckResult]:
    """Both torsion equivalences: Kahler type and integrability."""
    return _torsion_checks_from(sample_residuals(m, plan), tol)


def verify_nearly_implies_kahler(
    m: ChartedManifold,
    plan: Optional[SamplePlan] = None,
    tol: float = VERDICT_TOL,
) -> CheckResult:
    """For matching signs: the nearly condition collapses to Kahler type."""
    return _nearly_plus_from(sample_residuals(m, plan), m.kind, m.dim, tol)


def verify_nearly_torsion_characterization(
    m: ChartedManifold,
    plan: Optional[SamplePlan] = None,
    tol: float = VERDICT_TOL,
) -> CheckResult:
    """For opposite signs: nearly is equivalent to a skew torsion pairing."""
    return _nearly_minus_from(sample_residuals(m, plan), m.kind, tol)


def verify_codazzi_implies_kahler(
    m: ChartedManifold,
    plan: Optional[SamplePlan] = None,
    tol: float = VERDICT_TOL,
) -> CheckResult:
    """For every kind: the Codazzi condition forces a parallel structure."""
    return _codazzi_from(sample_residuals(m, plan), m.kind, m.dim, tol)


def theorem_suite(
    m: ChartedManifold,
    plan: Optional[SamplePlan] = None,
    tol: float = VERDICT_TOL,
) -> List[CheckResult]:
    """All applicable theorem checks for the manifold's kind."""
    return _suite_from_residuals(sample_residuals(m, plan), m.kind, m.dim, tol)


def condition_table(
    plan: Optional[SamplePlan] = None, tol: float = VERDICT_TOL
) -> Dict[str, object]:
    """Classes cut out by the two sign conditions, for each kind.

    The cells are decided by exact subspace dimensions in the largest
    supported model fiber: a zero-dimensional subspace means the condition
    forces the structure derivative itself to vanish.  The computed
    dimensions must match the expected pattern or ``TheoremViolation`` is
    raised.  Each cell also records the outcome of the matching theorem
    check on every catalog entry of that kind, as sampled evidence beside
    the algebraic proof.
    """
    if plan is None:
        plan = SamplePlan()
    n = MAX_HALF_DIM
    by_kind: Dict[str, List[ChartedManifold]] = {}
    for name in standard_names():
        m = catalog(name)
        by_kind.setdefault(m.kind.label, []).append(m)
    cells: Dict[str, object] = {}
    for kind in KINDS:
        fiber = ModelFiber.standard(kind, n)
        alt = subspace_dimension(fiber, SubspaceQuery.ALTERNATING)
        sym = subspace_dimension(fiber, SubspaceQuery.SYMMETRIC)
        if kind.product == 1:
            if alt != 0:
                raise TheoremViolation(
                    f"alternating subspace dimension {alt} != 0 for "
                    f"{kind.label}, n={n}"
                )
            plus_class = "Kahler type"
        else:
            if alt == 0:
                raise TheoremViolation(
                    f"alternating subspace collapsed for {kind.label}, n={n}; "
                    "expected a class strictly larger than Kahler type"
                )
            plus_class = "nearly Kahler type"
        if sym != 0:
            raise TheoremViolation(
                f"symmetric subspace dimension {sym} != 0 for {kind.label}, n={n}"
            )
        plus_entries: Dict[str, str] = {}
        minus_entries: Dict[str, str] = {}
        for m in by_kind.get(kind.label, []):
            residuals = sample_residuals(m, plan)
            if kind.product == 1:
                plus_check = _nearly_plus_from(residuals, kind, m.dim, tol)
            else:
                plus_check = _nearly_minus_from(residuals, kind, tol)
            plus_entries[m.name] = plus_check.status
            minus_entries[m.name] = _codazzi_from(
                residuals, kind, m.dim, tol
            ).status
        cells[kind.label] = {
            "plus_sign": {
                "subspace_dimension": alt,
                "class": plus_class,
                "entry_checks": plus_entries,
            },
            "minus_sign": {
                "subspace_dimension": sym,
                "class": "Kahler type",
                "entry_checks": minus_entries,
            },
        }
    return {
        "half_dimension": n,
        "plus_sign_condition": PLUS_SIGN_CONDITION,
        "minus_sign_condition": MINUS_SIGN_CONDITION,
        "cells": cells,
    }


def render_condition_table(table: Dict[str, object]) -> str:
    lines = [
        f"sign conditions in the model fiber with half-dimension "
        f"{table['half_dimension']}",
        f"  plus sign:  {table['plus_sign_condition']}",
        f"  minus sign: {table['minus_sign_condition']}",
    ]
    for label, cell in table["cells"].items():
        plus = cell["plus_sign"]
        minus = cell["minus_sign"]
        lines.append(
            f"  {label:20s} plus -> {plus['class']} "
            f"(dim {plus['subspace_dimension']}), "
            f"minus -> {minus['class']} (dim {minus['subspace_dimension']})"
        )
        for name in sorted(plus["entry_checks"]):
            lines.append(
                f"    {name}: plus {plus['entry_checks'][name]}, "
                f"minus {minus['entry_checks'][name]}"
            )
    return "\n".join(lines) + "\n"
