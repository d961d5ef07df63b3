"""Sparse 2-mode matrix: CPC-4 classes (citing side) x individual cited patents."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np
import scipy.sparse as sp

from .ingest import ClassScheme, PatentRecord, SchemeError

Counting = Literal["whole", "fractional"]


@dataclass(frozen=True)
class TwoModeMatrix:
    """``data[i, j]`` is the citation mass from class ``i`` to cited patent ``j``."""

    data: sp.csr_matrix
    scheme: ClassScheme
    col_ids: tuple[str, ...]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    @property
    def col_index(self) -> dict[str, int]:
        return {cid: j for j, cid in enumerate(self.col_ids)}

    def total(self) -> float:
        return float(self.data.sum())

    def dense(self) -> np.ndarray:
        return self.data.toarray()


@dataclass(frozen=True)
class ClassCitationProfile:
    code: str
    vector: dict[int, float]


def build_two_mode(
    corpus: Sequence[PatentRecord], scheme: ClassScheme, counting: Counting = "fractional"
) -> TwoModeMatrix:
    """Aggregate citing patents into their classes.

    A cited id appearing ``m`` times in a patent with ``k`` classes adds ``m``
    (whole) or ``m / k`` (fractional) to each of the patent's class rows.
    Columns are numbered in first-encounter order of cited ids.
    """
    if counting not in ("whole", "fractional"):
        raise ValueError(f"unknown counting mode {counting!r}")
    col_index: dict[str, int] = {}
    rows: list[int] = []
    cols: list[int] = []
    vals: list[float] = []
    for record in corpus:
        if not record.cited:
            continue
        class_rows = [scheme.ordinal(c) for c in record.classes]
        share = 1.0 / len(class_rows) if counting == "fractional" else 1.0
        pcols = []
        for cid in record.cited:
            j = col_index.get(cid)
            if j is None:
                j = col_index[cid] = len(col_index)
            pcols.append(j)
        for r in class_rows:
            rows.extend([r] * len(pcols))
            cols.extend(pcols)
        vals.extend([share] * (len(pcols) * len(class_rows)))
    shape = (len(scheme), len(col_index))
    coo = sp.coo_matrix(
        (np.asarray(vals, dtype=np.float64), (np.asarray(rows, dtype=np.int64), np.asarray(cols, dtype=np.int64))),
        shape=shape,
    )
    # tocsr sums duplicate (row, col) entries, so repeated citations accumulate
    data = coo.tocsr()
    data.sort_indices()
    ids = [""] * len(col_index)
    for cid, j in col_index.items():
        ids[j] = cid
    return TwoModeMatrix(data, scheme, tuple(ids))


def binarize(m: TwoModeMatrix) -> TwoModeMatrix:
    data = m.data.copy()
    data.eliminate_zeros()
    data.data = np.ones_like(data.data)
    return TwoModeMatrix(data, m.scheme, m.col_ids)


def row_profile(m: TwoModeMatrix, code: str) -> ClassCitationProfile:
    if code not in m.scheme:
        raise SchemeError(f"class {code!r} not in scheme")
    i = m.scheme.ordinal(code)
    start, end = m.data.indptr[i], m.data.indptr[i + 1]
    vector = {int(j): float(v) for j, v in zip(m.data.indices[start:end], m.data.data[start:end])}
    return ClassCitationProfile(code, vector)


def write_sparse_dump(m: TwoModeMatrix, path) -> None:
    """Write ``rows cols nnz`` then one ``row col value`` triple per line, row-major."""
    data = m.data.tocoo()
    order = np.lexsort((data.col, data.row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{data.shape[0]} {data.shape[1]} {data.nnz}\n")
        for k in order:
            fh.write(f"{data.row[k]} {data.col[k]} {data.data[k]:.6f}\n")


def read_sparse_dump(path) -> sp.csr_matrix:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 3:
            raise ValueError(f"{path}: line 1: expected 'rows cols nnz'")
        n_rows, n_cols, nnz = (int(x) for x in header)
        rows, cols, vals = [], [], []
        for lineno, line in enumerate(fh, start=2):
            parts = line.split()
            if len(parts) != 3:
                raise ValueError(f"{path}: line {lineno}: expected 'row col value'")
            rows.append(int(parts[0]))
            cols.append(int(parts[1]))
            vals.append(float(parts[2]))
    if len(vals) != nnz:
        raise ValueError(f"{path}: header declares {nnz} entries, found {len(vals)}")
    return sp.csr_matrix((vals, (rows, cols)), shape=(n_rows, n_cols))
