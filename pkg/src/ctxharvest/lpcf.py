"""Contextual fraction by linear programming.

    NCF(v) = max 1.b  subject to  M b <= v,  b >= 0,     CF = 1 - NCF.

Solved with a dense primal simplex tableau and Bland's rule.  Slack variables
make the origin feasible, so no phase one is needed.  The final basis is
re-solved directly to obtain refined primal values and the dual certificate.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import ctxscen as cs
from . import matcore as mc
from ._accel import njit
from .errors import LpError, PreconditionError

PIVOT_TOL = 1e-12
RHS_CLAMP = 1e-12
FEAS_TOL = 1e-9
GAP_TOL = 1e-9
MAX_ITER = 10_000


class Status(str, enum.Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    NUMERICAL_TROUBLE = "NumericalTrouble"


@dataclass
class LpSolution:
    b_star: np.ndarray
    objective_value: float
    status: Status
    dual: np.ndarray
    duality_gap: float
    iterations: int
    basis: np.ndarray


@njit
def _bland_simplex(A, rhs, cost, tol, max_iter):
    m, n = A.shape
    width = n + m + 1
    T = np.zeros((m + 1, width))
    for i in range(m):
        for j in range(n):
            T[i, j] = A[i, j]
        T[i, n + i] = 1.0
        T[i, width - 1] = rhs[i]
    for j in range(n):
        T[m, j] = -cost[j]
    basis = np.empty(m, dtype=np.int64)
    for i in range(m):
        basis[i] = n + i
    it = 0
    while it < max_iter:
        enter = -1
        for j in range(n + m):
            if T[m, j] < -tol:
                enter = j
                break
        if enter < 0:
            return basis, 0, it
        leave = -1
        best = 0.0
        for i in range(m):
            a = T[i, enter]
            if a > tol:
                ratio = T[i, width - 1] / a
                if leave < 0 or ratio < best - 1e-15 or (
                        abs(ratio - best) <= 1e-15 and basis[i] < basis[leave]):
                    leave = i
                    best = ratio
        if leave < 0:
            return basis, 1, it
        piv = T[leave, enter]
        for j in range(width):
            T[leave, j] /= piv
        for i in range(m + 1):
            if i != leave:
                f = T[i, enter]
                if f != 0.0:
                    for j in range(width):
                        T[i, j] -= f * T[leave, j]
        basis[leave] = enter
        it += 1
    return basis, 2, it


def solve_ncf(M, v) -> LpSolution:
    """Maximise the total weight of a global subprobability under ``v``."""
    A = np.ascontiguousarray(np.asarray(M, dtype=np.float64))
    v = np.asarray(v, dtype=np.float64).copy()
    m, n = A.shape
    if v.shape != (m,):
        raise PreconditionError(f"rhs length {v.shape} does not match {m} rows")
    if not np.all(np.isfinite(v)):
        raise PreconditionError("rhs contains non-finite entries")
    if v.min() < -RHS_CLAMP:
        return LpSolution(np.zeros(n), float("nan"), Status.INFEASIBLE, np.zeros(m),
                          float("nan"), 0, np.zeros(0, dtype=np.int64))
    v[(v < 0)] = 0.0
    cost = np.ones(n)
    basis, code, its = _bland_simplex(A, v, cost, PIVOT_TOL, MAX_ITER)
    if code == 1:
        raise LpError("LP reported unbounded; the incidence matrix is malformed")
    if code == 2:
        raise LpError(f"simplex did not terminate in {MAX_ITER} iterations")

    full = np.hstack([A, np.eye(m)])
    B = full[:, basis]
    try:
        xb = np.linalg.solve(B, v)
        c_b = np.where(basis < n, 1.0, 0.0)
        y = np.linalg.solve(B.T, c_b)
    except np.linalg.LinAlgError as exc:
        raise LpError(f"final basis is singular: {exc}") from exc
    x = np.zeros(n + m)
    x[basis] = xb
    b = x[:n]
    primal = float(b.sum())
    dual_obj = float(v @ y)
    gap = abs(primal - dual_obj)
    dual_viol = max(float(np.max(1.0 - A.T @ y)), float(np.max(-y)), 0.0)
    primal_viol = max(float(np.max(A @ b - v)), float(np.max(-b)), 0.0)
    status = Status.OPTIMAL
    if gap > GAP_TOL or dual_viol > FEAS_TOL or primal_viol > FEAS_TOL:
        status = Status.NUMERICAL_TROUBLE
    return LpSolution(b, primal, status, y, gap, int(its), basis)


def _checked_solution(model: cs.EmpiricalModel) -> LpSolution:
    M = cs.incidence(model)
    sol = solve_ncf(M, model.vector())
    if sol.status is not Status.OPTIMAL:
        raise LpError(f"LP finished with status {sol.status.value} (gap {sol.duality_gap:.3e})")
    return sol


def contextual_fraction(model: cs.EmpiricalModel) -> float:
    return 1.0 - _checked_solution(model).objective_value


def delta_cf(rho_t, rho_0, scen: cs.Scenario) -> float:
    """``CF(rho_t) - CF(rho_0)`` evaluated directly on both states."""
    cf_t = contextual_fraction(cs.empirical_model(rho_t, scen))
    cf_0 = contextual_fraction(cs.empirical_model(rho_0, scen))
    return cf_t - cf_0


def delta_cf_perturbative(rho_0, drho, scen: cs.Scenario, step: float = 1e-6,
                          rel_tol: float = 1e-6) -> float:
    """ΔCF for ``rho_0 + drho`` when ``drho`` is a small perturbation.

    The model vector is affine in the perturbation strength and CF is convex
    and piecewise linear along that ray, so below its first breakpoint
    ``CF(rho_0 + s drho) = CF(rho_0) + s * slope``.  Evaluating at a moderate
    strength ``s`` and rescaling keeps the result free of the absolute
    rounding floor of the direct route.  Linearity is checked at ``s`` and
    ``s/8``; the direct route is used when the check fails.
    """
    rho_0 = mc.as_matrix(rho_0)
    drho = mc.as_matrix(drho)
    size = float(np.max(np.abs(drho)))
    if size == 0.0:
        return 0.0
    s = step / size
    if s <= 1.0:
        return delta_cf(rho_0 + drho, rho_0, scen)
    cf0 = contextual_fraction(cs.empirical_model(rho_0, scen))
    d1 = contextual_fraction(cs.empirical_model(rho_0 + s * drho, scen)) - cf0
    d2 = contextual_fraction(cs.empirical_model(rho_0 + (s / 8) * drho, scen)) - cf0
    noise = 1e-13
    if abs(d1 - 8 * d2) <= rel_tol * abs(d1) + 8 * noise:
        return d1 / s
    return delta_cf(rho_0 + drho, rho_0, scen)


S_GAMMA = 2.0
S_MAX = 2.5


def violation_functional(model: cs.EmpiricalModel) -> float:
    """Half the total anti-correlation weight over all contexts.

    For exclusive pentagram projectors this equals ``sum_i Tr(rho P_i)``.
    Its maximum over global assignments is 2 and over all no-signalling
    models is 5/2 (perfect anti-correlation on the odd cycle).
    """
    rows = np.asarray(model.rows, dtype=float)
    return 0.5 * float(np.sum(rows[:, 1] + rows[:, 2]))


def normalized_violation(model: cs.EmpiricalModel, scen: cs.Scenario = None) -> float:
    if len(model.contexts) != 5:
        raise PreconditionError("normalized_violation is defined for five-context cycles")
    return max(0.0, violation_functional(model) - S_GAMMA) / (S_MAX - S_GAMMA)
