"""Dense two-phase tableau simplex for ``min c.x  s.t.  A x = b, x >= 0``.

The solver returns a checkable certificate with every answer:

* Optimal: the primal vertex plus a dual vector ``y`` with ``A^T y <= c`` and
  ``b.y == c.x`` (strong duality, so the vertex is provably optimal).
* Infeasible: a Farkas ray ``y`` with ``y^T A <= 0`` and ``y.b > 0``.

Dantzig's rule is used until the pivot budget ``5 (m + N)`` is spent, then
Bland's rule takes over, which cannot cycle.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import NumericalBreakdown, UnboundedProblem

PIVOT_TOL = 1e-10
OPTIMALITY_TOL = 1e-10
FEASIBILITY_TOL = 1e-8
RAY_TOL = 1e-10
NONNEG_TOL = 1e-10


class Status(str, enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True, eq=False)
class LpProblem:
    A: np.ndarray
    b: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, dtype=float))
        b = np.asarray(self.b, dtype=float).reshape(-1)
        c = np.asarray(self.c, dtype=float).reshape(-1)
        if A.shape != (b.size, c.size):
            raise ValueError(f"shape mismatch: A {A.shape}, b {b.shape}, c {c.shape}")
        if not (np.isfinite(A).all() and np.isfinite(b).all() and np.isfinite(c).all()):
            raise ValueError("LP data must be finite")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)

    @property
    def shape(self) -> tuple[int, int]:
        return self.A.shape


@dataclass(frozen=True, eq=False)
class LpSolution:
    status: Status
    objective: float
    x: np.ndarray | None = None
    dual: np.ndarray | None = None
    ray: np.ndarray | None = None
    pivots: int = 0
    bland: bool = False
    # min total artificial mass in phase I; > 0 exactly when infeasible
    infeasibility: float = 0.0

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL

    def to_dict(self, sparse_atoms: bool = True) -> dict:
        out = {
            "status": self.status.value,
            "objective": self.objective if self.optimal else None,
            "pivots": self.pivots,
            "bland": self.bland,
            "infeasibility": self.infeasibility,
        }
        if self.x is not None:
            if sparse_atoms:
                out["atoms"] = {str(k): float(self.x[k]) for k in np.flatnonzero(self.x)}
                out["atom_count"] = int(self.x.size)
            else:
                out["atoms"] = self.x.tolist()
        if self.dual is not None:
            out["dual"] = self.dual.tolist()
        if self.ray is not None:
            out["ray"] = self.ray.tolist()
        return out


class _Tableau:
    """Rows 0..m-1 are constraints, row m holds reduced costs; last column is the rhs."""

    def __init__(self, A: np.ndarray, b: np.ndarray):
        m, N = A.shape
        self.m, self.N = m, N
        T = np.zeros((m + 1, N + m + 1))
        T[:m, :N] = A
        T[:m, N:N + m] = np.eye(m)
        T[:m, -1] = b
        self.T = T
        self.basis = np.arange(N, N + m)
        self.active = np.ones(m, dtype=bool)
        self.pivots = 0
        self.bland = False

    def pivot(self, r: int, j: int) -> None:
        T = self.T
        T[r] /= T[r, j]
        col = T[:, j].copy()
        col[r] = 0.0
        T -= np.outer(col, T[r])
        T[:, j] = 0.0
        T[r, j] = 1.0
        self.basis[r] = j
        self.pivots += 1

    def run(self, allowed: int, budget: int) -> None:
        """Iterate until no column < ``allowed`` has a negative reduced cost."""
        T, m = self.T, self.m
        rows = np.flatnonzero(self.active)
        while True:
            if not self.bland and self.pivots >= budget:
                self.bland = True
            costs = T[m, :allowed]
            if self.bland:
                candidates = np.flatnonzero(costs < -OPTIMALITY_TOL)
                if candidates.size == 0:
                    return
                j = int(candidates[0])
            else:
                j = int(np.argmin(costs))
                if costs[j] >= -OPTIMALITY_TOL:
                    return
            column = T[rows, j]
            positive = column > PIVOT_TOL
            if not positive.any():
                if (column > 0.0).any():
                    raise NumericalBreakdown(
                        f"column {j} has reduced cost {costs[j]:.3g} but no pivot above {PIVOT_TOL}"
                    )
                raise UnboundedProblem(f"column {j} is an unbounded direction")
            cand = rows[positive]
            ratios = np.maximum(T[cand, -1], 0.0) / T[cand, j]
            best = ratios.min()
            ties = cand[ratios <= best + 1e-12]
            if self.bland:
                r = int(ties[np.argmin(self.basis[ties])])
            else:
                r = int(ties[np.argmax(T[ties, j])])
            self.pivot(r, j)


def solve(problem: LpProblem) -> LpSolution:
    A, b, c = problem.A, problem.b, problem.c
    m, N = A.shape
    signs = np.where(b < 0.0, -1.0, 1.0)
    tab = _Tableau(A * signs[:, None], b * signs)
    T = tab.T
    budget = 5 * (m + N)

    # phase I: minimise the sum of artificials
    T[m, :N] = -T[:m, :N].sum(axis=0)
    T[m, -1] = -T[:m, -1].sum()
    tab.run(N + m, budget)
    infeasibility = max(-T[m, -1], 0.0)
    if infeasibility > FEASIBILITY_TOL:
        # phase-I duals: y' = c_B^T B^{-1}, read off the artificial columns
        c_basis = (tab.basis >= N).astype(float)
        y_flipped = c_basis @ T[:m, N:N + m]
        return LpSolution(
            Status.INFEASIBLE,
            float("nan"),
            ray=y_flipped * signs,
            pivots=tab.pivots,
            bland=tab.bland,
            infeasibility=float(infeasibility),
        )

    # drive remaining artificials out of the basis; rows where that fails are redundant
    for r in range(m):
        if tab.basis[r] < N:
            continue
        row = T[r, :N]
        j = int(np.argmax(np.abs(row)))
        if abs(row[j]) > PIVOT_TOL:
            tab.pivot(r, j)
        else:
            tab.active[r] = False

    # phase II on the original objective; artificials may no longer enter
    T[m, :] = 0.0
    T[m, :N] = c
    for r in np.flatnonzero(tab.active):
        j = tab.basis[r]
        if T[m, j] != 0.0:
            T[m] -= T[m, j] * T[r]
    tab.run(N, budget)

    x = np.zeros(N)
    rows = np.flatnonzero(tab.active)
    x[tab.basis[rows]] = T[rows, -1]
    x[np.abs(x) < 1e-15] = 0.0

    # duals from the final basis: B^T y = c_B on the independent rows
    B = (A * signs[:, None])[np.ix_(rows, tab.basis[rows])]
    y_rows, *_ = np.linalg.lstsq(B.T, c[tab.basis[rows]], rcond=None)
    dual = np.zeros(m)
    dual[rows] = y_rows
    return LpSolution(
        Status.OPTIMAL,
        float(c @ x),
        x=x,
        dual=dual * signs,
        pivots=tab.pivots,
        bland=tab.bland,
    )


def solve_with_retry(problem: LpProblem, perturbation: float = 1e-12) -> tuple[LpSolution, float]:
    """Solve, retrying once with ``b + perturbation`` after a NumericalBreakdown.

    Returns the solution and the perturbation actually applied (0.0 if none).
    """
    try:
        return solve(problem), 0.0
    except NumericalBreakdown:
        nudged = LpProblem(problem.A, problem.b + perturbation, problem.c)
        return solve(nudged), perturbation


def verify_certificate(problem: LpProblem, solution: LpSolution,
                       tol: float = FEASIBILITY_TOL) -> bool:
    """Recheck ``solution`` against the raw problem data."""
    A, b, c = problem.A, problem.b, problem.c
    if solution.status is Status.INFEASIBLE:
        y = solution.ray
        if y is None or y.shape != b.shape or not np.isfinite(y).all():
            return False
        return bool((y @ A).max(initial=-np.inf) <= RAY_TOL and y @ b > tol)

    x = solution.x
    if x is None or x.shape != c.shape or not np.isfinite(x).all():
        return False
    if x.min(initial=0.0) < -NONNEG_TOL:
        return False
    if np.abs(A @ x - b).max(initial=0.0) > tol:
        return False
    if abs(c @ x - solution.objective) > tol:
        return False
    y = solution.dual
    if y is not None:
        if (A.T @ y - c).max(initial=-np.inf) > tol:
            return False
        if abs(b @ y - solution.objective) > tol:
            return False
    return True
