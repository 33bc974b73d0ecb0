"""Exact discrete Wasserstein distance between a pool and a selected subset.

The pool carries uniform mass 1/N per point; a selection of B points carries
1/B per selected point. Both solve paths return the optimal value, a sparse
basic transport plan, and dual potentials normalized to the convention

    maximize (1/N) mu' 1 - (1/B) lam' pi   s.t.   mu_i - lam_j <= D_ij

so that every downstream cut can consume (lam, mu) directly.

Masses are scaled to integers over a common denominator lcm(N, B) before the
solve, which keeps marginals exact and degeneracy tests deterministic.

Backends: the Cython kernel is used when importable, otherwise the pure
numpy one. Both implement identical pivot rules; set CORESEL_BACKEND=py (or
=c) to force a choice, e.g. for the benchmark script.
"""

import math
import os
from dataclasses import dataclass, field

import numpy as np

from . import _netsimplex_py
from .distances import DistanceMatrix
from .errors import DimensionMismatch, SolverFailure

try:
    from . import _netsimplex_cy
except ImportError:  # extension not built; fall back to the numpy kernel
    _netsimplex_cy = None

_FORCED = os.environ.get("CORESEL_BACKEND", "").strip().lower()
if _FORCED == "py":
    _kernel = _netsimplex_py
elif _FORCED == "c":
    if _netsimplex_cy is None:
        raise ImportError("CORESEL_BACKEND=c but the compiled kernel is unavailable")
    _kernel = _netsimplex_cy
else:
    _kernel = _netsimplex_cy if _netsimplex_cy is not None else _netsimplex_py

BACKEND = "c" if _kernel is _netsimplex_cy else "py"

# Pivot budget multiplier: cap = PIVOT_FACTOR * (N + B) per solve.
PIVOT_FACTOR = 50


def get_kernel(backend: str | None = None):
    """Return a kernel module; None means the import-time default."""
    if backend in (None, ""):
        return _kernel
    if backend == "py":
        return _netsimplex_py
    if backend == "c":
        if _netsimplex_cy is None:
            raise SolverFailure("compiled backend requested but not built")
        return _netsimplex_cy
    raise ValueError(f"unknown backend {backend!r}")


@dataclass(frozen=True)
class Selection:
    """A binary indicator over the pool with a fixed cardinality."""

    indicator: np.ndarray

    def __post_init__(self):
        ind = np.ascontiguousarray(np.asarray(self.indicator, dtype=np.int8))
        if ind.ndim != 1:
            raise ValueError("selection indicator must be 1-D")
        if not np.all((ind == 0) | (ind == 1)):
            raise ValueError("selection indicator must be 0/1")
        if int(ind.sum()) < 1:
            raise ValueError("selection must contain at least one point")
        object.__setattr__(self, "indicator", ind)

    @classmethod
    def from_indices(cls, n: int, indices) -> "Selection":
        ind = np.zeros(n, dtype=np.int8)
        idx = np.asarray(list(indices), dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() >= n):
            raise ValueError(f"selection index out of range for pool of {n}")
        ind[idx] = 1
        sel = cls(indicator=ind)
        if sel.budget != idx.size:
            raise ValueError("duplicate indices in selection")
        return sel

    @property
    def n(self) -> int:
        return int(self.indicator.shape[0])

    @property
    def budget(self) -> int:
        return int(self.indicator.sum())

    @property
    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.indicator)

    def key(self) -> bytes:
        return self.indicator.tobytes()


@dataclass(frozen=True)
class TransportSolution:
    """Optimal value, sparse primal plan and dual potentials of one solve."""

    value: float
    plan_row: np.ndarray
    plan_col: np.ndarray
    plan_mass: np.ndarray
    lam: np.ndarray
    mu: np.ndarray
    n_pivots: int = 0

    @property
    def plan(self) -> list[tuple[int, int, float]]:
        return [
            (int(i), int(j), float(m))
            for i, j, m in zip(self.plan_row, self.plan_col, self.plan_mass)
        ]

    def validate(self, dist: DistanceMatrix, sel: Selection,
                 feas_tol: float = 1e-9, gap_tol: float = 1e-7) -> None:
        """Check primal/dual feasibility, the duality gap, complementary
        slackness and the basic-solution support bound; raises on violation.
        """
        n = dist.n
        budget = sel.budget
        row_sum = np.zeros(n)
        col_sum = np.zeros(n)
        np.add.at(row_sum, self.plan_row, self.plan_mass)
        np.add.at(col_sum, self.plan_col, self.plan_mass)
        if np.max(np.abs(row_sum - 1.0 / n)) > feas_tol:
            raise ValueError("plan row sums deviate from 1/N")
        target = sel.indicator.astype(np.float64) / budget
        if np.max(np.abs(col_sum - target)) > feas_tol:
            raise ValueError("plan column sums deviate from pi/B")
        if np.any(self.plan_mass <= 0):
            raise ValueError("plan stores nonpositive masses")
        if self.plan_mass.size > n + budget - 1:
            raise ValueError("plan support exceeds N + B - 1 entries")
        slack = self.mu[:, None] - self.lam[None, :] - dist.entries
        if np.max(slack) > feas_tol:
            raise ValueError("dual potentials are infeasible")
        dual_obj = self.mu.sum() / n - float(self.lam @ target)
        if abs(self.value - dual_obj) > gap_tol:
            raise ValueError(f"duality gap {self.value - dual_obj:.3e} above tolerance")
        cs = self.mu[self.plan_row] - self.lam[self.plan_col] - dist.entries[self.plan_row, self.plan_col]
        if self.plan_mass.size and np.max(np.abs(cs)) > gap_tol:
            raise ValueError("complementary slackness violated on the plan support")


def _masses(n: int, budget: int) -> tuple[int, int, int]:
    scale = math.lcm(n, budget)
    return scale, scale // n, scale // budget


def _run_kernel(cost: np.ndarray, a: np.ndarray, b: np.ndarray,
                max_pivots: int, kernel) -> tuple:
    status, pivots, parent, parent_arc, flow, pi = kernel.solve(cost, a, b, max_pivots)
    if status != _netsimplex_py.OPTIMAL:
        raise SolverFailure(
            f"network simplex hit the pivot cap ({max_pivots}) without proving optimality"
        )
    return pivots, parent, parent_arc, flow, pi


def _extract(cost_cols: int, r_count: int, scale: int, parent_arc, flow, pi):
    """Turn tree arrays into (plan arrays, mu, lam_local)."""
    mask = np.flatnonzero((flow > 0) & (parent_arc >= 0))
    arcs = parent_arc[mask]
    rows = arcs // cost_cols
    cols = arcs - rows * cost_cols
    mass = flow[mask].astype(np.float64) / scale
    order = np.lexsort((cols, rows))
    mu = -pi[:r_count]
    lam_local = -pi[r_count:]
    return rows[order], cols[order], mass[order], mu, lam_local


def _value(cost: np.ndarray, rows, cols, mass) -> float:
    return float(np.dot(cost[rows, cols], mass))


def wasserstein(dist: DistanceMatrix, sel: Selection, *, backend: str | None = None) -> TransportSolution:
    """Solve the full N x N transport problem between pool and selection.

    Columns of unselected points carry zero demand; their dual values come
    out of the same spanning tree, so the returned potentials are feasible
    against every pool point.
    """
    if dist.n != sel.n:
        raise DimensionMismatch(f"distance matrix is {dist.n}x{dist.n}, selection over {sel.n}")
    n, budget = dist.n, sel.budget
    scale, a_unit, b_unit = _masses(n, budget)
    a = np.full(n, a_unit, dtype=np.int64)
    b = sel.indicator.astype(np.int64) * b_unit
    max_pivots = PIVOT_FACTOR * (n + budget)
    kern = get_kernel(backend)
    pivots, parent, parent_arc, flow, pi = _run_kernel(dist.entries, a, b, max_pivots, kern)
    rows, cols, mass, mu, lam = _extract(n, n, scale, parent_arc, flow, pi)
    return TransportSolution(
        value=_value(dist.entries, rows, cols, mass),
        plan_row=rows, plan_col=cols, plan_mass=mass,
        lam=lam, mu=mu, n_pivots=pivots,
    )


def wasserstein_reduced(dist: DistanceMatrix, sel: Selection, *, backend: str | None = None) -> TransportSolution:
    """Solve the N x B problem over selected columns, then complete the dual.

    Potentials for unselected points are filled in by the tightest feasible
    completion lam_j = max_i (mu_i - D_ij), so dual feasibility holds over
    the whole pool and the value matches the full solve.
    """
    if dist.n != sel.n:
        raise DimensionMismatch(f"distance matrix is {dist.n}x{dist.n}, selection over {sel.n}")
    n, budget = dist.n, sel.budget
    sel_idx = sel.indices
    scale, a_unit, b_unit = _masses(n, budget)
    cost = np.ascontiguousarray(dist.entries[:, sel_idx])
    a = np.full(n, a_unit, dtype=np.int64)
    b = np.full(budget, b_unit, dtype=np.int64)
    max_pivots = PIVOT_FACTOR * (n + budget)
    kern = get_kernel(backend)
    pivots, parent, parent_arc, flow, pi = _run_kernel(cost, a, b, max_pivots, kern)
    rows, cols, mass, mu, lam_sel = _extract(budget, n, scale, parent_arc, flow, pi)
    lam = np.empty(n, dtype=np.float64)
    lam[sel_idx] = lam_sel
    unsel = np.flatnonzero(sel.indicator == 0)
    if unsel.size:
        lam[unsel] = np.max(mu[:, None] - dist.entries[:, unsel], axis=0)
    return TransportSolution(
        value=_value(cost, rows, cols, mass),
        plan_row=rows, plan_col=sel_idx[cols], plan_mass=mass,
        lam=lam, mu=mu, n_pivots=pivots,
    )
