"""End-to-end composition of the library steps."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from . import fileio
from .cluster import Partition, modularity, modularity_cluster
from .comatrix import build_two_mode
from .diversity import DiversityResult, diversity
from .ingest import ClassScheme, PatentRecord, RecordFilter, filter_corpus, read_corpus, validate_against_scheme
from .maps import BaseMap
from .portfolio import append_matrix_table, append_rao_table, distribution, overlay
from .similarity import DistanceMatrix, SymmetricSimilarityMatrix, similarity_matrix, to_distance

log = logging.getLogger(__name__)


def load_records(
    path, scheme: ClassScheme, record_filter: RecordFilter | None = None, strict: bool = False
) -> tuple[list[PatentRecord], list[str]]:
    """Read, validate and filter a corpus file. Returns records and warning lines."""
    parsed = read_corpus(path, strict=strict)
    records, report = validate_against_scheme(parsed.records, scheme, strict=strict)
    notes = list(parsed.warnings)
    notes += [f"patent {pid}: unknown class {code!r} dropped" for pid, code in report.unknown]
    notes += [f"patent {pid}: no known classes, record dropped" for pid in report.dropped_records]
    if record_filter is not None:
        records = filter_corpus(records, record_filter)
    for note in notes:
        log.warning(note)
    return records, notes


@dataclass
class PortfolioRun:
    result: DiversityResult
    artifacts: dict[str, Path] = field(default_factory=dict)


def run_portfolio(
    records: Sequence[PatentRecord],
    scheme: ClassScheme,
    basemap: BaseMap,
    distances: DistanceMatrix,
    name: str,
    outdir,
    matrix_table=None,
    rao_table=None,
) -> PortfolioRun:
    """Overlay, Pajek vector/cluster files, diversity, and table appends for one set."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    if distances.codes != scheme.codes:
        raise ValueError("distance matrix classes do not match the scheme")
    p = distribution(records, scheme, name)
    ov = overlay(p, basemap)
    result = diversity(name, p.weights, distances, p.n_patents)
    artifacts = {"vos": outdir / "vos.txt", "vec": outdir / "cpc.vec", "cls": outdir / "cpc.cls"}
    fileio.write_vos_map(ov, artifacts["vos"])
    fileio.write_pajek_vector(p.weights, artifacts["vec"])
    fileio.write_pajek_clusters([n.cluster for n in basemap.nodes], artifacts["cls"])
    if matrix_table is not None:
        append_matrix_table(matrix_table, p)
        artifacts["matrix_table"] = Path(matrix_table)
    if rao_table is not None:
        append_rao_table(rao_table, result)
        artifacts["rao_table"] = Path(rao_table)
    return PortfolioRun(result, artifacts)


@dataclass
class FullRun:
    jaccard: SymmetricSimilarityMatrix
    cosine: SymmetricSimilarityMatrix
    partition: Partition
    modularity: float
    portfolio: PortfolioRun


def run_full(
    corpus: Sequence[PatentRecord],
    scheme: ClassScheme,
    basemap: BaseMap,
    portfolio_records: Sequence[PatentRecord],
    name: str,
    outdir,
    counting: str = "fractional",
    resolution: float = 1.0,
    seed: int = 0,
) -> FullRun:
    """Build the 2-mode matrix, both similarity matrices, cluster, and one portfolio."""
    m = build_two_mode(corpus, scheme, counting)
    jac = similarity_matrix(m, "jaccard")
    cos = similarity_matrix(m, "cosine")
    part = modularity_cluster(cos, resolution, seed)
    try:
        q = modularity(cos, part, resolution)
    except ValueError:
        q = float("nan")
    outdir = Path(outdir)
    run = run_portfolio(
        portfolio_records, scheme, basemap, to_distance(cos), name, outdir,
        matrix_table=outdir / "matrix.csv", rao_table=outdir / "rao.csv",
    )
    return FullRun(jac, cos, part, q, run)
