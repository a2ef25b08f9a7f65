"""Null spaces and metric solves against hand-rolled elimination oracles."""

import numpy as np
import pytest

from aegeom.errors import DegenerateSystem, NearSingularMetric, SlotMismatch
from aegeom.linalg import (
    LinearConstraintSystem,
    exact_nullity,
    null_space,
    solve_metric,
)
from aegeom.tensors import LOWER, UPPER, TensorValue


def elimination_rank(a, tol=1e-9):
    """Row-echelon rank with partial pivoting, independent of numpy.linalg."""
    m = [list(map(float, row)) for row in np.atleast_2d(a)]
    rows, cols = len(m), len(m[0])
    rank = 0
    for col in range(cols):
        pivot = max(range(rank, rows), key=lambda r: abs(m[r][col]), default=None)
        if pivot is None or abs(m[pivot][col]) <= tol:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        pv = m[rank][col]
        for r in range(rows):
            if r == rank or m[r][col] == 0.0:
                continue
            f = m[r][col] / pv
            for c in range(col, cols):
                m[r][c] -= f * m[rank][c]
        rank += 1
        if rank == rows:
            break
    return rank


def elimination_solve(a, b):
    """Gaussian elimination with partial pivoting on an augmented matrix."""
    n = len(b)
    m = [list(map(float, row)) + [float(b[i])] for i, row in enumerate(a)]
    for col in range(n):
        pivot = max(range(col, n), key=lambda r: abs(m[r][col]))
        m[col], m[pivot] = m[pivot], m[col]
        pv = m[col][col]
        for r in range(col + 1, n):
            f = m[r][col] / pv
            for c in range(col, n + 1):
                m[r][c] -= f * m[col][c]
    x = [0.0] * n
    for i in range(n - 1, -1, -1):
        s = m[i][n] - sum(m[i][j] * x[j] for j in range(i + 1, n))
        x[i] = s / m[i][i]
    return np.array(x)


def system_from_dense(a):
    rows = []
    for row in np.atleast_2d(a):
        rows.append([(j, v) for j, v in enumerate(row) if v != 0.0])
    return LinearConstraintSystem.from_rows(np.atleast_2d(a).shape[1], rows)


def test_identity_system_has_trivial_null_space():
    sys3 = system_from_dense(np.eye(3))
    dim, basis = null_space(sys3)
    assert dim == 0 and basis == []
    assert exact_nullity(sys3) == 0


def test_zero_rows_leave_everything_free():
    sys0 = system_from_dense(np.zeros((2, 4)))
    dim, basis = null_space(sys0)
    assert dim == 4
    b = np.stack(basis)
    assert np.allclose(b @ b.T, np.eye(4), atol=1e-12)
    assert exact_nullity(sys0) == 4


def test_empty_row_list_means_full_null_space():
    sysn = LinearConstraintSystem.from_rows(3, [])
    dim, basis = null_space(sysn)
    assert dim == 3 and len(basis) == 3


def test_random_rank_three_system():
    rng = np.random.default_rng(11)
    core = rng.integers(-4, 5, size=(3, 7)).astype(float)
    mix = rng.integers(-2, 3, size=(2, 3)).astype(float)
    dense = np.vstack([core, mix @ core])
    assert elimination_rank(dense) == 3
    sys = system_from_dense(dense)
    dim, basis = null_space(sys)
    assert dim == 7 - elimination_rank(dense) == 4
    assert exact_nullity(sys) == 4
    for v in basis:
        assert np.max(np.abs(dense @ v)) < 1e-9
    b = np.stack(basis)
    assert np.allclose(b @ b.T, np.eye(4), atol=1e-12)


def test_exact_route_sees_through_rounded_dependence():
    # float combinations of float rows are only approximately dependent;
    # the rational route counts true rank while the svd route uses the
    # tolerance.  They are only meant to agree on exact coefficient rows.
    rng = np.random.default_rng(11)
    core = rng.standard_normal((3, 7))
    mix = rng.standard_normal((2, 3))
    dense = np.vstack([core, mix @ core])
    sys = system_from_dense(dense)
    dim, _ = null_space(sys)
    assert dim == 4
    assert exact_nullity(sys) == 2


def test_dimension_survives_row_permutation_and_scaling():
    rng = np.random.default_rng(5)
    dense = np.vstack([rng.standard_normal((4, 6)), rng.standard_normal((3, 4)) @ rng.standard_normal((4, 6))])
    base_dim, _ = null_space(system_from_dense(dense))
    for trial in range(5):
        perm = rng.permutation(dense.shape[0])
        scales = rng.uniform(0.5, 3.0, dense.shape[0]) * rng.choice([-1.0, 1.0], dense.shape[0])
        shuffled = dense[perm] * scales[:, None]
        dim, _ = null_space(system_from_dense(shuffled))
        assert dim == base_dim


def test_repeated_index_entries_accumulate():
    # same column twice in one row: coefficients add up
    sys = LinearConstraintSystem.from_rows(2, [[(0, 1.0), (0, 1.0), (1, -2.0)]])
    assert np.allclose(sys.to_dense(), [[2.0, -2.0]])
    dim, basis = null_space(sys)
    assert dim == 1
    v = basis[0]
    assert abs(v[0] - v[1]) < 1e-12


def test_exact_nullity_matches_svd_on_random_integer_systems():
    rng = np.random.default_rng(23)
    for trial in range(20):
        dense = rng.integers(-3, 4, size=(rng.integers(1, 9), rng.integers(1, 7)))
        sys = system_from_dense(dense.astype(float))
        dim, _ = null_space(sys)
        assert exact_nullity(sys) == dim == dense.shape[1] - elimination_rank(dense)


def test_system_rejects_out_of_range_columns():
    with pytest.raises(SlotMismatch):
        LinearConstraintSystem.from_rows(2, [[(2, 1.0)]])
    with pytest.raises(SlotMismatch):
        LinearConstraintSystem.from_rows(2, [[(-1, 1.0)]])


def test_zero_unknowns_is_degenerate():
    sys = LinearConstraintSystem(0, ())
    with pytest.raises(DegenerateSystem):
        null_space(sys)
    with pytest.raises(DegenerateSystem):
        exact_nullity(sys)


def test_null_space_rejects_bad_tolerance():
    with pytest.raises(ValueError):
        null_space(system_from_dense(np.eye(2)), tol=0.0)


def test_solve_metric_identity_returns_rhs():
    assert np.allclose(solve_metric(np.eye(3), np.array([1.0, -2.0, 0.5])), [1.0, -2.0, 0.5])


def test_solve_metric_indefinite_diagonal():
    g = np.diag([1.0, -1.0])
    x = solve_metric(g, np.array([3.0, 4.0]))
    assert np.allclose(x, [3.0, -4.0])


def test_solve_metric_matches_elimination_oracle():
    rng = np.random.default_rng(7)
    for trial in range(10):
        a = rng.standard_normal((6, 6))
        g = a + a.T + 8.0 * np.diag(rng.choice([-1.0, 1.0], 6))
        rhs = rng.standard_normal(6)
        x = solve_metric(g, rhs)
        oracle = elimination_solve(g, rhs)
        assert np.max(np.abs(x - oracle)) < 1e-10 * max(1.0, np.max(np.abs(oracle)))
        assert np.max(np.abs(g @ x - rhs)) < 1e-10


def test_solve_metric_accepts_tensor_values_and_checks_variance():
    g = TensorValue(np.diag([2.0, 5.0]), (LOWER, LOWER))
    x = solve_metric(g, np.array([4.0, 10.0]))
    assert np.allclose(x, [2.0, 2.0])
    up = TensorValue(np.eye(2), (UPPER, LOWER))
    with pytest.raises(SlotMismatch):
        solve_metric(up, np.array([1.0, 1.0]))


def test_solve_metric_rejects_asymmetric_and_singular():
    with pytest.raises(SlotMismatch):
        solve_metric(np.array([[1.0, 2.0], [0.0, 1.0]]), np.array([1.0, 1.0]))
    with pytest.raises(NearSingularMetric):
        solve_metric(np.diag([1e-6, 1e-6]), np.array([1.0, 1.0]))
    with pytest.raises(SlotMismatch):
        solve_metric(np.ones((2, 3)), np.array([1.0, 1.0]))


def test_solve_metric_matrix_can_be_rectangular_rhs():
    g = np.diag([1.0, 2.0])
    rhs = np.array([[1.0, 0.0], [0.0, 4.0]])
    x = solve_metric(g, rhs)
    assert np.allclose(x, [[1.0, 0.0], [0.0, 2.0]])
