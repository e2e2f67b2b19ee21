"""Tests for the phase-1 simplex feasibility solver."""

import numpy as np
import pytest
from scipy.optimize import linprog

from gptobs.lp import solve_feasibility, verify_farkas


def scipy_feasible(a_ineq, b_ineq, a_eq, b_eq):
    """Reference feasibility decision from scipy (free variables)."""
    a_ineq = np.atleast_2d(np.asarray(a_ineq, float))
    a_eq = np.atleast_2d(np.asarray(a_eq, float))
    n = max(a_ineq.shape[1], a_eq.shape[1])
    kwargs = {}
    if len(np.atleast_1d(b_ineq)):
        kwargs["A_ub"] = -a_ineq
        kwargs["b_ub"] = -np.asarray(b_ineq, float)
    if len(np.atleast_1d(b_eq)):
        kwargs["A_eq"] = a_eq
        kwargs["b_eq"] = np.asarray(b_eq, float)
    result = linprog(
        c=np.zeros(n), bounds=[(None, None)] * n, method="highs", **kwargs
    )
    if result.status == 0:
        return True
    if result.status == 2:
        return False
    raise RuntimeError(f"linprog status {result.status}")


def check(a_ineq, b_ineq, a_eq, b_eq, expect_feasible):
    result = solve_feasibility(a_ineq, b_ineq, a_eq, b_eq)
    assert result.feasible == expect_feasible
    if result.feasible:
        z = result.solution
        if len(np.atleast_1d(b_ineq)):
            assert (np.atleast_2d(a_ineq) @ z - b_ineq).min() >= -1e-7
        if len(np.atleast_1d(b_eq)):
            assert np.abs(np.atleast_2d(a_eq) @ z - b_eq).max() <= 1e-7
    else:
        assert verify_farkas(
            a_ineq, b_ineq, a_eq, b_eq, result.dual_ineq, result.dual_eq
        )
    return result


class TestSimpleSystems:
    def test_feasible_box(self):
        # z1 >= 0, z2 >= 0, z1 + z2 == 1
        check(np.eye(2), np.zeros(2), np.ones((1, 2)), np.ones(1), True)

    def test_infeasible_sign_clash(self):
        # z >= 1 and z == 0
        check(np.array([[1.0]]), np.array([1.0]), np.array([[1.0]]),
              np.array([0.0]), False)

    def test_infeasible_inequalities_only(self):
        # z >= 1 and -z >= 0
        check(np.array([[1.0], [-1.0]]), np.array([1.0, 0.0]),
              np.zeros((0, 1)), np.zeros(0), False)

    def test_equation_only_system(self):
        check(np.zeros((0, 2)), np.zeros(0),
              np.array([[1.0, 1.0], [1.0, -1.0]]), np.array([2.0, 0.0]), True)

    def test_redundant_equalities(self):
        # duplicated consistent rows must not confuse the solver
        a_eq = np.array([[1.0, 1.0], [1.0, 1.0], [2.0, 2.0]])
        b_eq = np.array([1.0, 1.0, 2.0])
        check(np.eye(2), np.zeros(2), a_eq, b_eq, True)

    def test_inconsistent_redundancy(self):
        a_eq = np.array([[1.0, 1.0], [2.0, 2.0]])
        b_eq = np.array([1.0, 3.0])
        check(np.eye(2), np.zeros(2), a_eq, b_eq, False)

    def test_free_variable_uses_negative_part(self):
        # z == -5 is feasible for a free variable
        result = check(np.zeros((0, 1)), np.zeros(0),
                       np.array([[1.0]]), np.array([-5.0]), True)
        assert result.solution[0] == pytest.approx(-5.0, abs=1e-9)

    def test_empty_system(self):
        result = solve_feasibility(np.zeros((0, 3)), np.zeros(0),
                                   np.zeros((0, 3)), np.zeros(0))
        assert result.feasible


class TestAgainstScipy:
    def test_random_systems(self):
        rng = np.random.default_rng(31)
        for trial in range(60):
            n = int(rng.integers(1, 6))
            n_ineq = int(rng.integers(0, 7))
            n_eq = int(rng.integers(0, 4))
            a_ineq = rng.normal(size=(n_ineq, n))
            b_ineq = rng.normal(size=n_ineq)
            a_eq = rng.normal(size=(n_eq, n))
            b_eq = rng.normal(size=n_eq)
            expected = scipy_feasible(a_ineq, b_ineq, a_eq, b_eq)
            check(a_ineq, b_ineq, a_eq, b_eq, expected)

    def test_random_degenerate_systems(self):
        # low-rank rows and repeated constraints exercise degenerate pivots
        rng = np.random.default_rng(32)
        for trial in range(40):
            n = int(rng.integers(2, 5))
            base = rng.normal(size=(2, n))
            rows = base[rng.integers(0, 2, size=6)] * rng.choice(
                [-1.0, 1.0], size=(6, 1)
            )
            b_ineq = np.round(rng.normal(size=6), 1)
            a_eq = base[rng.integers(0, 2, size=2)]
            b_eq = np.round(rng.normal(size=2), 1)
            expected = scipy_feasible(rows, b_ineq, a_eq, b_eq)
            check(rows, b_ineq, a_eq, b_eq, expected)
