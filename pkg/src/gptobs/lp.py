"""Phase-1 simplex feasibility solver with Bland pivoting.

Decides feasibility of systems with free variables,

    a_ineq @ z >= b_ineq
    a_eq   @ z == b_eq,

returning either a feasible point or a Farkas certificate (a dual ray
proving that no solution exists). The solver is a dense tableau simplex:
free variables are split into positive and negative parts, inequality rows
get surplus variables, equality rows get artificial variables, and the sum
of artificials is minimized. Bland's smallest-index rule makes the pivot
order deterministic and cycle-free.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

FEASIBILITY_TOL = 1e-9
PIVOT_TOL = 1e-11
MAX_ITERATIONS = 100_000


@dataclass(frozen=True)
class FeasibilityResult:
    """Outcome of a feasibility solve.

    Exactly one of ``solution`` (feasible) or the dual pair
    ``dual_ineq``/``dual_eq`` (infeasible) is populated. The duals satisfy
    ``dual_ineq >= 0``, ``dual_ineq @ a_ineq + dual_eq @ a_eq == 0`` and
    ``dual_ineq @ b_ineq + dual_eq @ b_eq > 0``, which is impossible for a
    feasible system.
    """

    feasible: bool
    solution: np.ndarray | None
    dual_ineq: np.ndarray | None
    dual_eq: np.ndarray | None
    objective: float
    iterations: int


def solve_feasibility(
    a_ineq: np.ndarray,
    b_ineq: np.ndarray,
    a_eq: np.ndarray,
    b_eq: np.ndarray,
    tol: float = FEASIBILITY_TOL,
) -> FeasibilityResult:
    """Decide ``a_ineq z >= b_ineq`` and ``a_eq z == b_eq`` over free ``z``."""
    a_ineq = np.atleast_2d(np.asarray(a_ineq, dtype=float))
    a_eq = np.atleast_2d(np.asarray(a_eq, dtype=float))
    b_ineq = np.asarray(b_ineq, dtype=float).reshape(-1)
    b_eq = np.asarray(b_eq, dtype=float).reshape(-1)

    n_ineq = b_ineq.size
    n_eq = b_eq.size
    if n_ineq == 0:
        a_ineq = a_ineq.reshape(0, a_eq.shape[1])
    if n_eq == 0:
        a_eq = a_eq.reshape(0, a_ineq.shape[1])
    if a_ineq.shape[0] != n_ineq or a_eq.shape[0] != n_eq:
        raise ValueError("row counts do not match right-hand sides")
    if a_ineq.shape[1] != a_eq.shape[1]:
        raise ValueError("inequality and equality systems differ in variables")

    n = a_ineq.shape[1]
    m = n_ineq + n_eq

    # Rows are oriented so every right-hand side is non-negative.
    # Inequality rows are flipped to "-a z + s = -b" where possible so the
    # surplus column enters the starting basis; rows that cannot (b > 0)
    # receive an artificial like the equality rows.
    rows = np.vstack([a_ineq, a_eq]) if m else np.zeros((0, n))
    rhs = np.concatenate([b_ineq, b_eq])
    is_ineq = np.zeros(m, dtype=bool)
    is_ineq[:n_ineq] = True

    flip = np.ones(m)
    flip[:n_ineq][b_ineq <= 0.0] = -1.0
    flip[n_ineq:][b_eq < 0.0] = -1.0
    rows = rows * flip[:, None]
    rhs = rhs * flip

    surplus_sign = np.where(flip[:n_ineq] < 0.0, 1.0, -1.0)
    needs_artificial = np.ones(m, dtype=bool)
    needs_artificial[:n_ineq] = surplus_sign < 0.0
    art_rows = np.flatnonzero(needs_artificial)
    n_art = art_rows.size

    # Column layout: z+ (n) | z- (n) | s (n_ineq) | artificials (n_art) | rhs
    n_cols = 2 * n + n_ineq + n_art
    tableau = np.zeros((m, n_cols + 1))
    tableau[:, :n] = rows
    tableau[:, n:2 * n] = -rows
    for i in range(n_ineq):
        tableau[i, 2 * n + i] = surplus_sign[i]
    for k, r in enumerate(art_rows):
        tableau[r, 2 * n + n_ineq + k] = 1.0
    tableau[:, -1] = rhs

    basis = np.empty(m, dtype=int)
    art_of_row = {int(r): 2 * n + n_ineq + k for k, r in enumerate(art_rows)}
    for i in range(m):
        if i in art_of_row:
            basis[i] = art_of_row[i]
        else:
            basis[i] = 2 * n + i

    # Phase-1 reduced costs: cost 1 on artificials, 0 elsewhere.
    cost = np.zeros(n_cols + 1)
    if n_art:
        cost -= tableau[art_rows].sum(axis=0)
        for k in art_of_row.values():
            cost[k] = 0.0

    iterations = 0
    while True:
        entering = -1
        for j in range(n_cols):
            if cost[j] < -PIVOT_TOL:
                entering = j
                break
        if entering < 0:
            break
        if iterations >= MAX_ITERATIONS:
            raise RuntimeError("simplex iteration cap exceeded")

        # Bland ratio test: smallest ratio, ties by smallest basis index.
        leaving = -1
        best_ratio = np.inf
        for i in range(m):
            coef = tableau[i, entering]
            if coef > PIVOT_TOL:
                ratio = tableau[i, -1] / coef
                if ratio < best_ratio - PIVOT_TOL or (
                    abs(ratio - best_ratio) <= PIVOT_TOL
                    and (leaving < 0 or basis[i] < basis[leaving])
                ):
                    best_ratio = ratio
                    leaving = i
        if leaving < 0:
            # Unbounded descent cannot happen for a phase-1 objective that
            # is bounded below by zero; treat as numerical breakdown.
            raise RuntimeError("phase-1 simplex lost boundedness")

        pivot = tableau[leaving, entering]
        tableau[leaving] /= pivot
        col = tableau[:, entering].copy()
        col[leaving] = 0.0
        tableau -= np.outer(col, tableau[leaving])
        cost = cost - cost[entering] * tableau[leaving]
        basis[leaving] = entering
        iterations += 1

    objective = float(-cost[-1])

    if objective <= tol:
        z = np.zeros(n)
        for i, var in enumerate(basis):
            value = tableau[i, -1]
            if var < n:
                z[var] += value
            elif var < 2 * n:
                z[var - n] -= value
        return FeasibilityResult(True, z, None, None, objective, iterations)

    # Dual ray from the reduced costs of the columns that formed the
    # starting basis, mapped back through the row flips.
    y = np.empty(m)
    for i in range(n_ineq):
        if needs_artificial[i]:
            y[i] = 1.0 - cost[art_of_row[i]]
        else:
            y[i] = -cost[2 * n + i]
    for r in art_rows:
        if r >= n_ineq:
            y[r] = 1.0 - cost[art_of_row[int(r)]]
    y = y * flip

    dual_ineq = y[:n_ineq]
    dual_eq = y[n_ineq:]
    # Clip rounding dust; the sign condition is exact at a simplex optimum.
    dual_ineq = np.where(dual_ineq > 0.0, dual_ineq, 0.0)
    return FeasibilityResult(False, None, dual_ineq, dual_eq, objective, iterations)


def verify_farkas(
    a_ineq: np.ndarray,
    b_ineq: np.ndarray,
    a_eq: np.ndarray,
    b_eq: np.ndarray,
    dual_ineq: np.ndarray,
    dual_eq: np.ndarray,
    tol: float = 1e-7,
) -> bool:
    """Check a dual ray against the system it claims to refute."""
    a_ineq = np.atleast_2d(np.asarray(a_ineq, dtype=float))
    a_eq = np.atleast_2d(np.asarray(a_eq, dtype=float))
    combo = dual_ineq @ a_ineq + dual_eq @ a_eq
    gain = float(dual_ineq @ np.asarray(b_ineq) + dual_eq @ np.asarray(b_eq))
    scale = max(
        1.0,
        float(np.abs(dual_ineq).max(initial=0.0)),
        float(np.abs(dual_eq).max(initial=0.0)),
    )
    if dual_ineq.min(initial=0.0) < -tol * scale:
        return False
    if float(np.abs(combo).max(initial=0.0)) > tol * scale:
        return False
    return gain > tol * scale
