"""Rao-Stirling diversity and its effective-number transform 1 / (1 - delta)."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .similarity import DistanceMatrix


@dataclass(frozen=True)
class DiversityResult:
    sample_name: str
    delta: float
    d2_3: float
    n_patents: int

    @classmethod
    def from_delta(cls, sample_name: str, delta: float, n_patents: int) -> "DiversityResult":
        return cls(sample_name, delta, d2_3(delta), n_patents)


def proportions(weights) -> np.ndarray:
    w = np.asarray(weights, dtype=np.float64).ravel()
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise ValueError("portfolio weights must be finite and nonnegative")
    total = w.sum()
    if total <= 0:
        raise ValueError("empty portfolio: diversity undefined")
    return w / total


def rao_delta(weights, d: DistanceMatrix | np.ndarray) -> float:
    """Sum of p_i * p_j * d_ij over ordered pairs i != j.

    ``weights`` may be raw (fractional) counts; they are normalized here.
    """
    dist = d.values if isinstance(d, DistanceMatrix) else np.asarray(d, dtype=np.float64)
    p = proportions(weights)
    if dist.shape != (p.size, p.size):
        raise ValueError(f"distance matrix is {dist.shape}, portfolio has {p.size} classes")
    support = np.flatnonzero(p)
    ps = p[support]
    sub = dist[np.ix_(support, support)]
    delta = float(ps @ sub @ ps - ps @ (np.diag(sub) * ps))
    # negative rounding residue when all mass sits at zero distance
    return max(delta, 0.0)


def d2_3(delta: float) -> float:
    if not 0.0 <= delta < 1.0:
        raise ValueError(f"delta must lie in [0, 1), got {delta!r}")
    return 1.0 / (1.0 - delta)


def diversity(sample_name: str, weights, d: DistanceMatrix | np.ndarray, n_patents: int) -> DiversityResult:
    return DiversityResult.from_delta(sample_name, rao_delta(weights, d), n_patents)
