"""Comparison statistics: Cramér's V between labelings, Pearson and Spearman.

Coefficients only; no significance tests.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Sequence

import numpy as np
from scipy.stats import rankdata


class UndefinedStatistic(ValueError):
    """Raised when a coefficient is undefined for the given input (e.g. zero variance)."""


@dataclass(frozen=True)
class ContingencyTable:
    counts: np.ndarray
    row_labels: tuple
    col_labels: tuple

    @property
    def n(self) -> int:
        return int(self.counts.sum())

    @classmethod
    def from_labelings(cls, a: Sequence[Hashable], b: Sequence[Hashable]) -> "ContingencyTable":
        if len(a) != len(b):
            raise ValueError(f"labelings differ in length: {len(a)} vs {len(b)}")
        rows = sorted(set(a), key=repr)
        cols = sorted(set(b), key=repr)
        ri = {lab: i for i, lab in enumerate(rows)}
        ci = {lab: j for j, lab in enumerate(cols)}
        counts = np.zeros((len(rows), len(cols)), dtype=np.int64)
        for x, y in zip(a, b):
            counts[ri[x], ci[y]] += 1
        return cls(counts, tuple(rows), tuple(cols))


def chi_square(counts) -> float:
    """Pearson chi-square of independence, without continuity correction."""
    counts = np.asarray(counts, dtype=np.float64)
    n = counts.sum()
    expected = np.outer(counts.sum(axis=1), counts.sum(axis=0)) / n
    mask = expected > 0
    return float((((counts - expected) ** 2)[mask] / expected[mask]).sum())


def cramers_v_table(counts) -> float:
    counts = np.asarray(counts, dtype=np.float64)
    # empty rows/columns carry no categories
    counts = counts[counts.sum(axis=1) > 0][:, counts.sum(axis=0) > 0]
    r, c = counts.shape
    if r < 2 or c < 2:
        raise UndefinedStatistic("Cramér's V needs at least two labels on each side")
    v = np.sqrt(chi_square(counts) / (counts.sum() * (min(r, c) - 1)))
    return float(min(v, 1.0))


def cramers_v(a: Sequence[Hashable], b: Sequence[Hashable]) -> float:
    return cramers_v_table(ContingencyTable.from_labelings(a, b).counts)


def section_labels(codes: Sequence[str]) -> list[str]:
    """Collapse CPC-4 codes to their one-letter section (A-H, Y)."""
    return [c[0] for c in codes]


def pearson(x, y) -> float:
    x = np.asarray(x, dtype=np.float64).ravel()
    y = np.asarray(y, dtype=np.float64).ravel()
    if x.size != y.size:
        raise ValueError(f"series differ in length: {x.size} vs {y.size}")
    if x.size < 2:
        raise ValueError("need at least two observations")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        raise UndefinedStatistic("zero variance: correlation undefined")
    r = float(dx @ dy) / np.sqrt(sxx * syy)
    return float(np.clip(r, -1.0, 1.0))


def spearman(x, y) -> float:
    """Pearson correlation of average ranks."""
    x = np.asarray(x, dtype=np.float64).ravel()
    y = np.asarray(y, dtype=np.float64).ravel()
    if x.size != y.size:
        raise ValueError(f"series differ in length: {x.size} vs {y.size}")
    return pearson(rankdata(x, method="average"), rankdata(y, method="average"))
