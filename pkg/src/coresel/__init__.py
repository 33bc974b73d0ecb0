"""Budgeted core-set selection by minimum discrete Wasserstein distance."""

from .distances import DistanceMatrix, FeatureMatrix, compute_distance_matrix
from .transport import Selection, TransportSolution, wasserstein, wasserstein_reduced

__all__ = [
    "DistanceMatrix",
    "FeatureMatrix",
    "compute_distance_matrix",
    "Selection",
    "TransportSolution",
    "wasserstein",
    "wasserstein_reduced",
]

__version__ = "0.1.0"
