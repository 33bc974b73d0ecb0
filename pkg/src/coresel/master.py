"""Relaxed master problem: minimize eta over budgeted binary selections.

solve_master runs a best-first branch-and-bound on the binary indicator,
bounding each node with an LP relaxation solved by the dense bounded
simplex in ``_simplex``. The problem is tiny in rows (one cardinality
constraint plus the accumulated cuts) and wide in columns, which is exactly
the shape that solver handles well. Branching picks the most fractional
coordinate (ties to the lowest index) and explores the one-branch first so
incumbents arrive early; a warm-start selection is installed as the initial
incumbent whenever it is feasible.
"""

import enum
import heapq
import time
from dataclasses import dataclass, field

import numpy as np

from ._simplex import LP_INFEASIBLE, LP_OPTIMAL, solve_lp
from .cuts import Cut, CutKind
from .errors import MasterInfeasible
from .transport import Selection

INT_TOL = 1e-7


class MasterStatus(str, enum.Enum):
    OPTIMAL = "Optimal"
    GAP_LIMIT = "GapLimit"
    TIME_LIMIT = "TimeLimit"
    INFEASIBLE = "Infeasible"


@dataclass(frozen=True)
class MasterProblem:
    n: int
    budget: int
    cuts: tuple
    fixed_one: tuple = ()
    fixed_zero: tuple = ()
    time_limit_s: float = 180.0
    rel_gap_tol: float = 0.10

    def __post_init__(self):
        object.__setattr__(self, "cuts", tuple(self.cuts))
        object.__setattr__(self, "fixed_one", tuple(sorted(set(self.fixed_one))))
        object.__setattr__(self, "fixed_zero", tuple(sorted(set(self.fixed_zero))))
        if not 1 <= self.budget <= self.n:
            raise ValueError(f"budget {self.budget} out of range for n={self.n}")
        if len(self.fixed_one) > self.budget:
            raise ValueError("more fixed-one indices than the budget allows")
        if set(self.fixed_one) & set(self.fixed_zero):
            raise ValueError("an index is fixed to both 0 and 1")
        if not 0.0 <= self.rel_gap_tol < 1.0:
            raise ValueError("rel_gap_tol must lie in [0, 1)")
        if not any(c.involves_eta for c in self.cuts):
            raise ValueError("need at least one eta cut, otherwise eta is unbounded")


@dataclass(frozen=True)
class MasterSolution:
    eta: float
    selection: Selection | None
    lower_bound: float
    status: MasterStatus


def _eta_cuts(cuts) -> list[Cut]:
    return [c for c in cuts if c.involves_eta]


def _prune_cuts(cuts) -> list[Cut]:
    return [c for c in cuts if not c.involves_eta]


def _build_lp(problem: MasterProblem, ones: np.ndarray, zeros: np.ndarray):
    """Assemble the node LP with fixed indices substituted out.

    Columns: free pi's, then eta, then one slack per inequality row.
    Returns (A, b, c, lo, hi, free_idx).
    """
    n = problem.n
    fixed = np.zeros(n, dtype=bool)
    fixed[list(ones)] = True
    fixed[list(zeros)] = True
    free_idx = np.flatnonzero(~fixed)
    n_free = free_idx.size
    ones_arr = np.asarray(sorted(ones), dtype=np.int64)

    etas = _eta_cuts(problem.cuts)
    prunes = _prune_cuts(problem.cuts)
    m = 1 + len(etas) + len(prunes)
    n_slack = len(etas) + len(prunes)
    n_cols = n_free + 1 + n_slack

    A = np.zeros((m, n_cols))
    b = np.zeros(m)
    eta_col = n_free

    A[0, :n_free] = 1.0
    b[0] = problem.budget - len(ones)

    eta_lo = -np.inf
    row = 1
    slack = n_free + 1
    for cut in etas:
        a_fixed = float(cut.coeffs[ones_arr].sum()) if ones_arr.size else 0.0
        A[row, :n_free] = -cut.coeffs[free_idx]
        A[row, eta_col] = 1.0
        A[row, slack] = -1.0
        b[row] = cut.rhs + a_fixed
        floor = cut.rhs + a_fixed + float(np.minimum(cut.coeffs[free_idx], 0.0).sum())
        eta_lo = max(eta_lo, floor)
        row += 1
        slack += 1
    for cut in prunes:
        a_fixed = float(cut.coeffs[ones_arr].sum()) if ones_arr.size else 0.0
        A[row, :n_free] = cut.coeffs[free_idx]
        A[row, slack] = -1.0 if cut.kind is CutKind.PRUNE_NEAR else 1.0
        b[row] = cut.rhs - a_fixed
        row += 1
        slack += 1

    lo = np.zeros(n_cols)
    hi = np.ones(n_cols)
    lo[eta_col] = eta_lo
    hi[eta_col] = np.inf
    hi[n_free + 1:] = np.inf
    c = np.zeros(n_cols)
    c[eta_col] = 1.0
    return A, b, c, lo, hi, free_idx


def _solve_node(problem: MasterProblem, ones, zeros):
    """LP-relax the node; returns (status, eta, frac) with frac over free vars."""
    A, b, c, lo, hi, free_idx = _build_lp(problem, ones, zeros)
    bland_after = 10 * (problem.n + len(problem.cuts))
    max_iters = 20_000 + 40 * (A.shape[0] + A.shape[1])
    status, x, obj = solve_lp(A, b, c, lo, hi, bland_after=bland_after, max_iters=max_iters)
    if status != LP_OPTIMAL:
        return status, np.inf, None, free_idx
    return status, obj, x[: free_idx.size], free_idx


def lp_relaxation(problem: MasterProblem) -> tuple[float, np.ndarray]:
    """Root LP bound and its fractional indicator (fixed values filled in)."""
    status, obj, frac, free_idx = _solve_node(problem, problem.fixed_one, problem.fixed_zero)
    if status == LP_INFEASIBLE:
        raise MasterInfeasible("root relaxation admits no feasible point")
    pi = np.zeros(problem.n)
    pi[list(problem.fixed_one)] = 1.0
    pi[free_idx] = frac
    return obj, pi


def _feasible_eta(problem: MasterProblem, indicator: np.ndarray) -> float | None:
    """Smallest eta that makes (eta, pi) feasible, or None if pi is not."""
    if int(indicator.sum()) != problem.budget:
        return None
    if any(indicator[i] != 1 for i in problem.fixed_one):
        return None
    if any(indicator[i] != 0 for i in problem.fixed_zero):
        return None
    eta = -np.inf
    for cut in problem.cuts:
        if cut.involves_eta:
            eta = max(eta, cut.eta_floor(indicator))
        elif not cut.satisfied(0.0, indicator):
            return None
    return eta


def solve_master(problem: MasterProblem, warm_start: Selection | None = None) -> MasterSolution:
    """Best-first branch-and-bound over the relaxation.

    Stops when the tree is exhausted (Optimal), when the incumbent is
    proven within rel_gap_tol of the tree bound (GapLimit), or at the time
    limit (TimeLimit, returning the incumbent and the proven bound).
    """
    t0 = time.monotonic()
    inc_eta = np.inf
    inc_pi = None
    if warm_start is not None:
        eta = _feasible_eta(problem, warm_start.indicator.astype(np.float64))
        if eta is not None:
            inc_eta = eta
            inc_pi = warm_start.indicator.astype(np.int8)

    status, bound, frac, free_idx = _solve_node(problem, problem.fixed_one, problem.fixed_zero)
    if status == LP_INFEASIBLE:
        return MasterSolution(np.inf, None, np.inf, MasterStatus.INFEASIBLE)

    def finish(st, lb):
        sel = Selection(indicator=inc_pi) if inc_pi is not None else None
        return MasterSolution(float(inc_eta), sel, float(min(lb, inc_eta)), st)

    heap = []
    seq = 0
    heapq.heappush(heap, (bound, seq, problem.fixed_one, problem.fixed_zero, frac, free_idx))

    def try_integral(frac, free_idx, ones, eta_val) -> bool:
        nonlocal inc_eta, inc_pi
        if np.any(np.minimum(frac, 1.0 - frac) > INT_TOL):
            return False
        pi = np.zeros(problem.n, dtype=np.int8)
        pi[list(ones)] = 1
        pi[free_idx[frac > 0.5]] = 1
        if eta_val < inc_eta:
            inc_eta = eta_val
            inc_pi = pi
        return True

    while heap:
        bound, _, ones, zeros, frac, free_idx = heapq.heappop(heap)
        if inc_pi is not None:
            if bound >= inc_eta - 1e-9:
                return finish(MasterStatus.OPTIMAL, bound)
            if (inc_eta - bound) <= problem.rel_gap_tol * max(abs(inc_eta), 1e-9):
                return finish(MasterStatus.GAP_LIMIT, bound)
        if time.monotonic() - t0 > problem.time_limit_s:
            if inc_pi is None:
                _dive(problem, frac, free_idx, ones, try_integral)
            return finish(MasterStatus.TIME_LIMIT, bound)

        if try_integral(frac, free_idx, ones, bound):
            continue

        frac_dist = np.minimum(frac, 1.0 - frac)
        var = free_idx[int(np.argmax(frac_dist))]
        for val in (1, 0):
            child_ones = ones + (int(var),) if val == 1 else ones
            child_zeros = zeros + (int(var),) if val == 0 else zeros
            remaining = problem.n - len(child_ones) - len(child_zeros)
            if len(child_ones) > problem.budget:
                continue
            if len(child_ones) + remaining < problem.budget:
                continue
            st, child_bound, child_frac, child_free = _solve_node(problem, child_ones, child_zeros)
            if st == LP_INFEASIBLE:
                continue
            if child_frac.size == 0 or not try_integral(child_frac, child_free, child_ones, child_bound):
                if child_bound < inc_eta - 1e-9:
                    seq += 1
                    heapq.heappush(
                        heap, (child_bound, seq, child_ones, child_zeros, child_frac, child_free)
                    )
            if time.monotonic() - t0 > problem.time_limit_s:
                lb = min([bound] + [h[0] for h in heap]) if heap else bound
                if inc_pi is None:
                    _dive(problem, frac, free_idx, ones, try_integral)
                return finish(MasterStatus.TIME_LIMIT, lb)

    if inc_pi is None:
        # The relaxation was feasible but no binary point survives the cuts.
        return MasterSolution(np.inf, None, np.inf, MasterStatus.INFEASIBLE)
    return finish(MasterStatus.OPTIMAL, inc_eta)


def _dive(problem, frac, free_idx, ones, try_integral) -> None:
    """Last-resort rounding when time runs out with no incumbent yet."""
    need = problem.budget - len(ones)
    if not 0 <= need <= free_idx.size:
        return
    order = np.argsort(-frac, kind="stable")
    pi = np.zeros(problem.n, dtype=np.float64)
    pi[list(ones)] = 1.0
    pi[free_idx[order[:need]]] = 1.0
    eta = _feasible_eta(problem, pi)
    if eta is not None:
        rounded = np.zeros(free_idx.size)
        rounded[order[:need]] = 1.0
        try_integral(rounded, free_idx, ones, eta)
