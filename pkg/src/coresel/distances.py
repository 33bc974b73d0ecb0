"""Base-metric cost matrices over embedding pools.

The rest of the package is metric-agnostic: every transport problem and cut
consumes the dense matrix built here. Cosine is realized as the Euclidean
distance between L2-normalized rows, so downstream code never branches on
the metric.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import NonFiniteInput, ZeroVectorUnderCosine

# Entries below this are snapped to exact zero so that "distance > 0" filters
# used by cut construction are deterministic.
ZERO_SNAP = 1e-12

METRICS = ("euclidean", "cosine")


@dataclass(frozen=True)
class FeatureMatrix:
    """An N x d pool of embedding vectors, one row per point."""

    values: np.ndarray

    def __post_init__(self):
        vals = np.ascontiguousarray(np.asarray(self.values, dtype=np.float64))
        if vals.ndim != 2:
            raise ValueError(f"feature matrix must be 2-D, got shape {vals.shape}")
        n, d = vals.shape
        if n < 2 or d < 1:
            raise ValueError(f"need at least 2 points and 1 dimension, got {n}x{d}")
        if not np.all(np.isfinite(vals)):
            raise NonFiniteInput("feature matrix contains NaN or Inf")
        object.__setattr__(self, "values", vals)

    @property
    def n_points(self) -> int:
        return self.values.shape[0]

    @property
    def dim(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class DistanceMatrix:
    """Dense symmetric nonnegative cost matrix with a zero diagonal."""

    entries: np.ndarray
    metric_tag: str = "euclidean"

    def __post_init__(self):
        ent = np.ascontiguousarray(np.asarray(self.entries, dtype=np.float64))
        if ent.ndim != 2 or ent.shape[0] != ent.shape[1]:
            raise ValueError(f"distance matrix must be square, got shape {ent.shape}")
        object.__setattr__(self, "entries", ent)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def validate(self, atol: float = 1e-9) -> None:
        """Check the type invariants; raises ValueError on violation."""
        ent = self.entries
        if not np.all(np.isfinite(ent)):
            raise ValueError("distance matrix has non-finite entries")
        if np.any(ent < 0):
            raise ValueError("distance matrix has negative entries")
        if not np.array_equal(ent, ent.T):
            raise ValueError("distance matrix is not symmetric")
        if np.any(np.diagonal(ent) != 0.0):
            raise ValueError("distance matrix has a nonzero diagonal")
        if self.metric_tag == "cosine" and np.any(ent > 2.0):
            raise ValueError("cosine distances exceed the chord bound of 2")


def compute_distance_matrix(features: FeatureMatrix, metric: str = "euclidean") -> DistanceMatrix:
    """Build the dense pairwise cost matrix under the given base metric.

    Euclidean entries are the plain L2 distances; cosine entries are L2
    distances after row-wise unit normalization (chord distance, in [0, 2]).
    """
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}, expected one of {METRICS}")
    x = features.values
    if metric == "cosine":
        norms = np.linalg.norm(x, axis=1)
        if np.any(norms == 0.0):
            bad = int(np.flatnonzero(norms == 0.0)[0])
            raise ZeroVectorUnderCosine(f"row {bad} is all-zero; cosine metric undefined")
        x = x / norms[:, None]

    # Pairwise differences are computed directly (not via the Gram-matrix
    # identity) so tiny distances keep full precision; the 1e-9 triangle
    # tolerance downstream relies on it. Chunked to bound peak memory.
    n = x.shape[0]
    ent = np.empty((n, n), dtype=np.float64)
    chunk = max(1, int(2**22 / max(1, n * x.shape[1])))
    for start in range(0, n, chunk):
        stop = min(n, start + chunk)
        diff = x[start:stop, None, :] - x[None, :, :]
        ent[start:stop] = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    np.fill_diagonal(ent, 0.0)
    ent[ent < ZERO_SNAP] = 0.0
    if metric == "cosine":
        np.minimum(ent, 2.0, out=ent)
    return DistanceMatrix(entries=ent, metric_tag=metric)
