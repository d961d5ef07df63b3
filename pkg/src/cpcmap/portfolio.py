"""Portfolio distributions, overlays, difference maps, run tables, local maps."""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from . import fileio
from .diversity import DiversityResult
from .ingest import ClassScheme, PatentRecord
from .maps import GREEN, NEUTRAL, RED, BaseMap, MapNode, OverlayMap

NAME_MAX = 10


@dataclass(frozen=True)
class PortfolioDistribution:
    sample_name: str
    weights: np.ndarray  # fractional counts, indexed by scheme ordinal
    n_patents: int
    codes: tuple[str, ...]

    def __post_init__(self):
        if not self.sample_name:
            raise ValueError("sample name must be non-empty")
        if len(self.weights) != len(self.codes):
            raise ValueError("weights do not match the class list")

    @property
    def label(self) -> str:
        """Name as used for table columns and rows (first 10 characters)."""
        return self.sample_name[:NAME_MAX]

    def weight(self, code: str) -> float:
        return float(self.weights[self.codes.index(code)])


def distribution(corpus: Sequence[PatentRecord], scheme: ClassScheme, sample_name: str = "sample") -> PortfolioDistribution:
    """Each patent spreads one unit evenly over its classes."""
    if not corpus:
        raise ValueError("empty patent set: no distribution")
    w = np.zeros(len(scheme))
    for record in corpus:
        share = 1.0 / len(record.classes)
        for code in record.classes:
            w[scheme.ordinal(code)] += share
    return PortfolioDistribution(sample_name, w, len(corpus), scheme.codes)


def _check(p: PortfolioDistribution, base: BaseMap) -> None:
    base.check_aligned(p.codes)


def overlay(p: PortfolioDistribution, base: BaseMap) -> OverlayMap:
    _check(p, base)
    nodes = [
        MapNode(n.id, n.label, n.x, n.y, n.cluster, float(w))
        for n, w in zip(base.nodes, p.weights)
    ]
    return OverlayMap(nodes)


def difference_overlay(p1: PortfolioDistribution, p2: PortfolioDistribution, base: BaseMap) -> OverlayMap:
    """Signed comparison: red where the first set is stronger, green where the second is."""
    if p1.codes != p2.codes:
        raise ValueError("portfolios use different class schemes")
    _check(p1, base)
    nodes = []
    for n, w1, w2 in zip(base.nodes, p1.weights, p2.weights):
        score = float(w1) - float(w2)
        color = RED if score > 0 else GREEN if score < 0 else NEUTRAL
        nodes.append(MapNode(n.id, n.label, n.x, n.y, color, abs(score), score))
    return OverlayMap(nodes)


def append_matrix_table(table_path, p: PortfolioDistribution) -> fileio.MatrixTable:
    with fileio.exclusive(table_path):
        fileio.append_matrix_column(table_path, p.codes, p.label, p.weights)
        return fileio.read_matrix_table(table_path)


def append_rao_table(table_path, r: DiversityResult) -> list[fileio.RaoRow]:
    row = fileio.RaoRow(r.sample_name[:NAME_MAX], r.delta, r.d2_3, r.n_patents)
    with fileio.exclusive(table_path):
        fileio.append_rao_row(table_path, row)
        return fileio.read_rao_table(table_path)


def ranked_rao_table(table_path) -> list[fileio.RaoRow]:
    """Rows ranked by delta, most diverse first (stable for ties)."""
    return sorted(fileio.read_rao_table(table_path), key=lambda r: -r.delta)


@dataclass
class PortfolioNetwork:
    names: list[str]
    cosine: np.ndarray  # runs x runs, zero diagonal
    cooccurrence: np.ndarray  # raw inner products of run vectors
    zero_runs: list[str]

    def edges(self) -> list[tuple[int, int, float]]:
        return fileio.vos_network_edges(self.cosine)


def portfolio_cosine_network(table: fileio.MatrixTable) -> PortfolioNetwork:
    """Cosine similarity between runs' class-weight vectors."""
    x = np.asarray(table.values, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] < 2:
        raise ValueError("a local map needs at least two runs")
    gram = x.T @ x
    norms = np.sqrt(np.diag(gram))
    zero = [name for name, nrm in zip(table.names, norms) if nrm == 0]
    if zero:
        warnings.warn(f"runs with all-zero vectors get no edges: {', '.join(zero)}", stacklevel=2)
    denom = np.outer(norms, norms)
    cos = np.zeros_like(gram)
    np.divide(gram, denom, out=cos, where=denom > 0)
    np.clip(cos, 0.0, 1.0, out=cos)
    upper = np.triu(cos, 1)
    cos = upper + upper.T
    return PortfolioNetwork(list(table.names), cos, gram, zero)


def write_local_map(net: PortfolioNetwork, outdir) -> dict[str, Path]:
    """Write ``cosine.net`` (Pajek) and ``coocc.dat`` (raw co-occurrence matrix)."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    paths = {"net": outdir / "cosine.net", "dat": outdir / "coocc.dat"}
    fileio.write_pajek_network(net.names, net.edges(), paths["net"])
    fileio.write_dense_matrix(net.cooccurrence, paths["dat"])
    return paths
