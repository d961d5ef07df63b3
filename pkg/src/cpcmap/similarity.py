"""Class-by-class similarity from the 2-mode matrix: Jaccard, cosine, Tanimoto.

The three kernels share one form, ``xy / f(xx, yy, xy)``, so the full
matrices are computed from a single Gram matrix ``M @ M.T``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np
import scipy.sparse as sp

from .comatrix import TwoModeMatrix
from .stats import pearson

Kind = Literal["jaccard", "cosine", "tanimoto"]
KINDS: tuple[str, ...] = ("jaccard", "cosine", "tanimoto")


def _pair(x, y) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=np.float64).ravel()
    y = np.asarray(y, dtype=np.float64).ravel()
    if x.shape != y.shape:
        raise ValueError(f"vector lengths differ: {x.size} vs {y.size}")
    return x, y


def jaccard(x, y) -> float:
    """Jaccard index on binarized vectors (any positive entry counts as 1)."""
    x, y = _pair(x, y)
    return tanimoto((x > 0).astype(np.float64), (y > 0).astype(np.float64))


def tanimoto(x, y) -> float:
    x, y = _pair(x, y)
    xy = float(x @ y)
    denom = float(x @ x) + float(y @ y) - xy
    if denom == 0.0:
        return 0.0
    return xy / denom


def cosine(x, y) -> float:
    x, y = _pair(x, y)
    nx, ny = np.sqrt(x @ x), np.sqrt(y @ y)
    if nx == 0.0 or ny == 0.0:
        return 0.0
    return min(1.0, float(x @ y) / (float(nx) * float(ny)))


@dataclass(frozen=True)
class SymmetricSimilarityMatrix:
    """Raw similarities in [0, 1]; ``scale`` applies only on export."""

    values: np.ndarray
    kind: str
    codes: tuple[str, ...]
    scale: float = 1.0

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def scaled(self) -> np.ndarray:
        return self.values * self.scale


@dataclass(frozen=True)
class DistanceMatrix:
    values: np.ndarray
    codes: tuple[str, ...]

    @property
    def n(self) -> int:
        return self.values.shape[0]


def similarity_from_gram(gram: np.ndarray, kind: str) -> np.ndarray:
    """Turn a Gram matrix of (binarized for jaccard) profiles into similarities.

    Zero profiles get similarity 0 with everything, themselves included.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown similarity kind {kind!r}")
    gram = np.asarray(gram, dtype=np.float64)
    sq = np.diag(gram).copy()
    if kind == "cosine":
        norms = np.sqrt(sq)
        denom = np.outer(norms, norms)
    else:
        denom = sq[:, None] + sq[None, :] - gram
    out = np.zeros_like(gram)
    np.divide(gram, denom, out=out, where=denom > 0)
    np.clip(out, 0.0, 1.0, out=out)
    # pin symmetry and the diagonal exactly; the division can leave 1 +- ulp
    upper = np.triu(out, 1)
    return upper + upper.T + np.diag((sq > 0).astype(np.float64))


def similarity_matrix(m: TwoModeMatrix, kind: Kind = "cosine") -> SymmetricSimilarityMatrix:
    data = m.data
    if kind == "jaccard":
        data = data.copy()
        data.eliminate_zeros()
        data.data = np.ones_like(data.data)
    gram = (data @ data.T).toarray() if sp.issparse(data) else data @ data.T
    return SymmetricSimilarityMatrix(similarity_from_gram(gram, kind), kind, m.scheme.codes)


def to_distance(s: SymmetricSimilarityMatrix) -> DistanceMatrix:
    """``1 - cosine``. Only cosine matrices qualify; the raw (unscaled) values are used."""
    if s.kind != "cosine":
        raise ValueError(f"distances are defined from cosine similarities only, got {s.kind!r}")
    if np.any(s.values > 1.0) or np.any(s.values < 0.0):
        raise ValueError("similarity values outside [0, 1]; was a scaled matrix passed as raw?")
    d = 1.0 - s.values
    # zero-profile classes keep similarity 0 on the diagonal; their self-distance is still 0
    np.fill_diagonal(d, 0.0)
    return DistanceMatrix(d, s.codes)


def scaled_view(s: SymmetricSimilarityMatrix, factor: float = 1000.0) -> SymmetricSimilarityMatrix:
    if not factor > 0:
        raise ValueError("scale factor must be positive")
    return SymmetricSimilarityMatrix(s.values, s.kind, s.codes, float(factor))


def offdiag_pearson(a, b) -> float:
    """Pearson correlation over paired off-diagonal cells (QAP-style comparison)."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape != b.shape:
        raise ValueError("offdiag_pearson needs two square matrices of equal size")
    if a.shape[0] < 2:
        raise ValueError("offdiag_pearson needs dimension >= 2")
    mask = ~np.eye(a.shape[0], dtype=bool)
    return pearson(a[mask], b[mask])
