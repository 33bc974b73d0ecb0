"""Constraint families added to the relaxed master problem.

Four kinds bound the epigraph variable eta from below (the per-iteration
subgradient cut plus three distance-based optimality cuts), and two prune
the binary search space around previously visited selections.

The distance-based cuts come in two modes. ``paper_literal`` charges each
selected point its nearest positive distance, which overcounts because a
selected point may keep up to 1/N (lower bound) or its full 1/B (triangle)
of incoming mass at zero cost; on tiny pools the literal forms can exceed
the true optimum. ``corrected`` removes exactly that slack and is the
default; the two coincide as B/N -> 0.
"""

import enum
import warnings
from dataclasses import dataclass

import numpy as np

from .distances import DistanceMatrix
from .errors import IsolatedDuplicatePool
from .transport import Selection, TransportSolution

CUT_MODES = ("corrected", "paper_literal")


class CutKind(str, enum.Enum):
    BENDERS = "Benders"
    LOWER_BOUND = "LowerBound"
    TRIANGLE = "Triangle"
    DUAL_INEQ = "DualIneq"
    PRUNE_NEAR = "PruneNear"
    PRUNE_FAR = "PruneFar"


@dataclass(frozen=True)
class Cut:
    """One linear constraint over (eta, pi).

    involves_eta cuts read  eta >= coeffs'pi + rhs.  Pruning cuts read
    coeffs'pi >= rhs (PruneNear) or coeffs'pi <= rhs (PruneFar).
    """

    kind: CutKind
    coeffs: np.ndarray
    rhs: float
    involves_eta: bool
    degenerate: bool = False

    def __post_init__(self):
        co = np.ascontiguousarray(np.asarray(self.coeffs, dtype=np.float64))
        if not (np.all(np.isfinite(co)) and np.isfinite(self.rhs)):
            raise ValueError("cut has non-finite coefficients")
        object.__setattr__(self, "coeffs", co)

    def eta_floor(self, indicator: np.ndarray) -> float:
        """Right-hand side value at a selection (eta cuts only)."""
        return float(self.coeffs @ indicator) + self.rhs

    def satisfied(self, eta: float, indicator: np.ndarray, tol: float = 1e-9) -> bool:
        lhs = float(self.coeffs @ indicator)
        if self.involves_eta:
            return eta >= lhs + self.rhs - tol
        if self.kind is CutKind.PRUNE_NEAR:
            return lhs >= self.rhs - tol
        return lhs <= self.rhs + tol


def benders_cut(sol: TransportSolution, sel_hat: Selection, n: int) -> Cut:
    """Subgradient cut from one transport solve's dual potentials.

    eta >= (1/N) mu'1 - (1/B) lam'pi.  By strong duality the right side
    equals the solve's value at pi = pi_hat, and by weak duality it lower
    bounds the transport value of every other selection.
    """
    budget = sel_hat.budget
    return Cut(
        kind=CutKind.BENDERS,
        coeffs=-sol.lam / budget,
        rhs=float(sol.mu.sum()) / n,
        involves_eta=True,
    )


def _positive_row_min(entries: np.ndarray) -> tuple[np.ndarray, bool]:
    """Per-row minimum over strictly positive entries; 0 for all-zero rows."""
    masked = np.where(entries > 0, entries, np.inf)
    mins = masked.min(axis=1)
    degenerate = bool(np.isinf(mins).any())
    return np.where(np.isinf(mins), 0.0, mins), degenerate


def lower_bound_cut(dist: DistanceMatrix, budget: int, mode: str = "corrected") -> Cut:
    """Onset cut: selected points cannot receive their mass for free.

    Each selected point takes in 1/B of mass; everything beyond the 1/N it
    can source from itself costs at least its nearest positive distance.
    paper_literal charges the full 1/B.
    """
    _check_mode(mode)
    if not 1 <= budget <= dist.n:
        raise ValueError(f"budget {budget} out of range for pool of {dist.n}")
    dmin, degenerate = _positive_row_min(dist.entries)
    if degenerate:
        warnings.warn(
            "pool has points with no positive distance to anything; "
            "the lower-bound cut degenerates to eta >= 0",
            IsolatedDuplicatePool,
        )
    factor = 1.0 / budget if mode == "paper_literal" else max(1.0 / budget - 1.0 / dist.n, 0.0)
    return Cut(
        kind=CutKind.LOWER_BOUND,
        coeffs=factor * dmin,
        rhs=0.0,
        involves_eta=True,
        degenerate=degenerate,
    )


def triangle_cut(dist: DistanceMatrix, sel_hat: Selection, w_hat: float,
                 mode: str = "corrected") -> Cut:
    """Metric cut relative to a visited selection.

    Transporting any candidate core set onto the visited one costs at least
    each candidate point's distance to the nearest visited point, and that
    cost is bounded by the two transport values combined. Points shared
    with the visited selection ride along for free in corrected mode.
    """
    _check_mode(mode)
    sel_cols = dist.entries[:, sel_hat.indices]
    if mode == "paper_literal":
        c, _ = _positive_row_min(sel_cols)
    else:
        c = sel_cols.min(axis=1)
        c[sel_hat.indicator == 1] = 0.0
    return Cut(
        kind=CutKind.TRIANGLE,
        coeffs=c / sel_hat.budget,
        rhs=-w_hat,
        involves_eta=True,
    )


def dual_ineq_cut(dist: DistanceMatrix, sol: TransportSolution, sel_hat: Selection) -> Cut:
    """Dual-potential cut with a worst-row slack term, as printed.

    The printed sign of the potential terms disagrees with its own
    derivation, so the driver validates every cut of this kind against the
    incumbent and drops the family on the first observed violation.
    """
    n = dist.n
    budget = sel_hat.budget
    maxrow = dist.entries.max(axis=1)
    coeffs = (sol.lam - maxrow) / budget
    rhs = sol.value - float(sol.mu.sum()) / n
    return Cut(kind=CutKind.DUAL_INEQ, coeffs=coeffs, rhs=rhs, involves_eta=True)


def prune_near_cut(sel_hat: Selection, beta_plus: float) -> Cut:
    """Keep the search within a Hamming ball around a good selection."""
    _check_beta(beta_plus, "beta_plus")
    return Cut(
        kind=CutKind.PRUNE_NEAR,
        coeffs=sel_hat.indicator.astype(np.float64),
        rhs=beta_plus * sel_hat.budget,
        involves_eta=False,
    )


def prune_far_cut(sel_hat: Selection, beta_minus: float) -> Cut:
    """Remove a Hamming ball around a bad selection (bans it outright)."""
    _check_beta(beta_minus, "beta_minus")
    return Cut(
        kind=CutKind.PRUNE_FAR,
        coeffs=sel_hat.indicator.astype(np.float64),
        rhs=beta_minus * sel_hat.budget,
        involves_eta=False,
    )


def _check_mode(mode: str) -> None:
    if mode not in CUT_MODES:
        raise ValueError(f"unknown cut mode {mode!r}, expected one of {CUT_MODES}")


def _check_beta(value: float, name: str) -> None:
    if not 0.0 < value < 1.0:
        raise ValueError(f"{name} must lie in (0, 1), got {value}")
