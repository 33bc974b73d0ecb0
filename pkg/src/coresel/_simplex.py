"""Dense two-phase primal simplex with variable bounds.

Solves  min c'x  s.t.  A x = b,  lo <= x <= hi  on a dense tableau. Sized
for master relaxations: a handful of constraint rows against a few thousand
columns. Entering variables follow Dantzig's rule (largest violation,
lowest index on ties) and switch to Bland's rule after a configurable run
of degenerate steps; leaving ties go to the lowest variable index. All
lower bounds must be finite; upper bounds may be +inf.
"""

import numpy as np

from .errors import SolverFailure

LP_OPTIMAL = 0
LP_INFEASIBLE = 1
LP_UNBOUNDED = 2

_AT_LO = 0
_AT_UP = 1
_BASIC = 2


def solve_lp(A, b, c, lo, hi, *, bland_after: int, max_iters: int,
             tol: float = 1e-9):
    """Returns (status, x, objective); x is None unless status is optimal."""
    A = np.asarray(A, dtype=np.float64)
    m, n = A.shape
    b = np.asarray(b, dtype=np.float64)
    c = np.asarray(c, dtype=np.float64)
    lo = np.asarray(lo, dtype=np.float64)
    hi = np.asarray(hi, dtype=np.float64)
    if not np.all(np.isfinite(lo)):
        raise ValueError("simplex requires finite lower bounds")

    # Start every structural variable at its lower bound and cover the
    # residual with one artificial column per row.
    resid = b - A @ lo
    sign = np.where(resid < 0, -1.0, 1.0)
    n_ext = n + m
    T = np.empty((m, n_ext), dtype=np.float64)
    T[:, :n] = A * sign[:, None]
    T[:, n:] = np.eye(m)
    xB = np.abs(resid)

    lo_ext = np.concatenate([lo, np.zeros(m)])
    hi_ext = np.concatenate([hi, np.full(m, np.inf)])
    xval = lo_ext.copy()
    status = np.full(n_ext, _AT_LO, dtype=np.int8)
    basis = np.arange(n, n_ext)
    status[basis] = _BASIC
    xval[basis] = xB

    c_phase1 = np.concatenate([np.zeros(n), np.ones(m)])
    st = _iterate(T, xB, xval, status, basis, lo_ext, hi_ext, c_phase1,
                  bland_after, max_iters, tol)
    if st == LP_UNBOUNDED:
        raise SolverFailure("phase-1 objective unbounded; inconsistent tableau")
    if float(c_phase1[basis] @ xB) > 1e-7:
        return LP_INFEASIBLE, None, np.inf

    # Freeze artificials at zero and optimize the real objective.
    lo_ext[n:] = 0.0
    hi_ext[n:] = 0.0
    c_phase2 = np.concatenate([c, np.zeros(m)])
    st = _iterate(T, xB, xval, status, basis, lo_ext, hi_ext, c_phase2,
                  bland_after, max_iters, tol)
    if st == LP_UNBOUNDED:
        return LP_UNBOUNDED, None, -np.inf

    x = xval.copy()
    x[basis] = xB
    x = x[:n]
    return LP_OPTIMAL, x, float(c @ x)


def _iterate(T, xB, xval, status, basis, lo, hi, c, bland_after, max_iters, tol):
    m, n_ext = T.shape
    bland = False
    degen_streak = 0
    basic_lo = lo[basis]
    basic_hi = hi[basis]

    for _ in range(max_iters):
        d = c - T.T @ c[basis]
        viol = np.zeros(n_ext)
        free = (status != _BASIC) & (lo < hi)
        down = free & (status == _AT_LO) & (d < -tol)
        up = free & (status == _AT_UP) & (d > tol)
        viol[down] = -d[down]
        viol[up] = d[up]
        if bland:
            cand = np.flatnonzero(viol > 0)
            if cand.size == 0:
                return LP_OPTIMAL
            j = int(cand[0])
        else:
            j = int(np.argmax(viol))
            if viol[j] <= 0:
                return LP_OPTIMAL
        direction = 1.0 if status[j] == _AT_LO else -1.0

        w = direction * T[:, j]
        theta = hi[j] - lo[j]  # entering variable flips to its other bound
        leave = -1
        pos = w > tol
        neg = w < -tol
        with np.errstate(divide="ignore", invalid="ignore"):
            ratios = np.where(pos, (xB - basic_lo) / np.where(pos, w, 1.0), np.inf)
            ratios = np.where(neg, (xB - basic_hi) / np.where(neg, w, 1.0), ratios)
        r = int(np.argmin(ratios)) if m else -1
        if m and ratios[r] < theta - 1e-12:
            # lowest basic-variable index among tying rows, for determinism
            ties = np.flatnonzero(ratios <= ratios[r] + 1e-12)
            r = int(ties[np.argmin(basis[ties])])
            theta = max(ratios[r], 0.0)
            leave = r
        if not np.isfinite(theta):
            return LP_UNBOUNDED

        xB -= theta * w
        xval[j] = xval[j] + direction * theta
        if leave < 0:
            status[j] = _AT_UP if status[j] == _AT_LO else _AT_LO
        else:
            out = basis[leave]
            xval[out] = basic_lo[leave] if w[leave] > 0 else basic_hi[leave]
            status[out] = _AT_LO if w[leave] > 0 else _AT_UP
            piv_col = T[:, j].copy()
            piv = piv_col[leave]
            T[leave] /= piv
            others = np.arange(m) != leave
            T[others] -= np.outer(piv_col[others], T[leave])
            xB[leave] = xval[j]
            basis[leave] = j
            status[j] = _BASIC
            basic_lo[leave] = lo[j]
            basic_hi[leave] = hi[j]

        if theta <= 1e-12:
            degen_streak += 1
            if degen_streak > bland_after:
                bland = True
        else:
            degen_streak = 0
    raise SolverFailure(f"simplex exceeded {max_iters} iterations")
