"""Modularity clustering of class similarity graphs and nested decompositions.

The optimizer is a seeded Louvain-style scheme: greedy local moving of single
nodes, then aggregation of communities into super-nodes, repeated until no
move improves modularity. The diagonal of the similarity matrix is ignored;
graphs have no self-loops at the class level.
"""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable

import numpy as np

from . import fileio
from .ingest import ClassScheme
from .maps import BaseMap, MapNode
from .similarity import SymmetricSimilarityMatrix

_TIE_TOL = 1e-12


@dataclass(frozen=True)
class Partition:
    """Cluster id per node, contiguous from 1."""

    assignment: tuple[int, ...]

    def __post_init__(self):
        ids = set(self.assignment)
        if ids and ids != set(range(1, len(ids) + 1)):
            raise ValueError("cluster ids must be contiguous from 1")

    @property
    def k(self) -> int:
        return len(set(self.assignment))

    def __len__(self) -> int:
        return len(self.assignment)

    def members(self, cluster: int) -> list[int]:
        return [i for i, c in enumerate(self.assignment) if c == cluster]

    @classmethod
    def from_labels(cls, labels: Iterable) -> "Partition":
        """Relabel arbitrary labels to 1..k in order of first appearance."""
        mapping: dict = {}
        out = []
        for lab in labels:
            if lab not in mapping:
                mapping[lab] = len(mapping) + 1
            out.append(mapping[lab])
        return cls(tuple(out))


def _adjacency(s: SymmetricSimilarityMatrix | np.ndarray) -> np.ndarray:
    values = s.values if isinstance(s, SymmetricSimilarityMatrix) else s
    a = np.array(values, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("similarity matrix must be square")
    if not np.all(np.isfinite(a)) or np.any(a < 0):
        raise ValueError("similarity matrix must be finite and nonnegative")
    np.fill_diagonal(a, 0.0)
    return a


def _modularity(a: np.ndarray, labels: np.ndarray, resolution: float) -> float:
    two_m = a.sum()
    if two_m <= 0:
        raise ValueError("graph has zero total edge weight: modularity undefined")
    _, inv = np.unique(labels, return_inverse=True)
    k = a.sum(axis=1)
    n_c = inv.max() + 1
    tot = np.bincount(inv, weights=k, minlength=n_c)
    internal = 0.0
    for c in range(n_c):
        idx = np.flatnonzero(inv == c)
        internal += a[np.ix_(idx, idx)].sum()
    return float(internal / two_m - resolution * np.sum((tot / two_m) ** 2))


def modularity(s: SymmetricSimilarityMatrix | np.ndarray, p: Partition, resolution: float = 1.0) -> float:
    """Weighted Newman modularity; ``resolution`` multiplies the null-model term."""
    a = _adjacency(s)
    if len(p) != a.shape[0]:
        raise ValueError(f"partition covers {len(p)} nodes, graph has {a.shape[0]}")
    return _modularity(a, np.asarray(p.assignment), resolution)


def _move_nodes(a: np.ndarray, resolution: float, rng: np.random.Generator) -> tuple[np.ndarray, bool]:
    n = a.shape[0]
    k = a.sum(axis=1)
    two_m = a.sum()
    comm = np.arange(n)
    tot = k.copy()
    order = rng.permutation(n)
    any_move = False
    while True:
        moved = False
        for i in order:
            ci = comm[i]
            tot[ci] -= k[i]
            w = np.bincount(comm, weights=a[i], minlength=n)
            w[ci] -= a[i, i]
            gain = w - resolution * tot * k[i] / two_m
            cand = np.flatnonzero(w > 0)
            best = gain[ci]
            if cand.size:
                best = max(best, gain[cand].max())
            tol = _TIE_TOL * max(1.0, abs(best))
            if gain[ci] >= best - tol:
                target = ci
            else:
                # lowest community id among the (near-)tied best
                target = cand[np.flatnonzero(gain[cand] >= best - tol)[0]]
            comm[i] = target
            tot[target] += k[i]
            if target != ci:
                moved = True
                any_move = True
        if not moved:
            break
    return comm, any_move


def _louvain(a: np.ndarray, resolution: float, seed: int) -> np.ndarray:
    n = a.shape[0]
    labels = np.arange(n)
    if a.sum() <= 0:
        return labels
    rng = np.random.default_rng(seed)
    graph = a
    while True:
        comm, moved = _move_nodes(graph, resolution, rng)
        if not moved:
            break
        _, comm = np.unique(comm, return_inverse=True)
        labels = comm[labels]
        n_c = comm.max() + 1
        if n_c == graph.shape[0]:
            break
        onehot = np.zeros((graph.shape[0], n_c))
        onehot[np.arange(graph.shape[0]), comm] = 1.0
        graph = onehot.T @ graph @ onehot
    return labels


def modularity_cluster(
    s: SymmetricSimilarityMatrix | np.ndarray, resolution: float = 1.0, seed: int = 0
) -> Partition:
    """Seeded, deterministic modularity optimization.

    A graph without any edge weight yields singletons. The result is never
    worse than the all-in-one partition.
    """
    if not resolution > 0:
        raise ValueError("resolution must be positive")
    a = _adjacency(s)
    n = a.shape[0]
    if n == 0:
        raise ValueError("empty graph: nothing to cluster")
    labels = _louvain(a, resolution, seed)
    if a.sum() > 0:
        whole = np.zeros(n, dtype=np.int64)
        if _modularity(a, whole, resolution) > _modularity(a, labels, resolution):
            labels = whole
    return Partition.from_labels(labels.tolist())


@dataclass(frozen=True)
class DecompositionPolicy:
    min_size: int = 10
    max_depth: int = 3
    resolution: float = 1.0
    seed: int = 0


@dataclass
class ClusterTree:
    label: str
    members: tuple[int, ...]  # node ordinals in the root matrix
    depth: int
    partition: Partition | None = None
    children: list["ClusterTree"] = field(default_factory=list)

    @property
    def size(self) -> int:
        return len(self.members)

    def is_leaf(self) -> bool:
        return not self.children

    def walk(self):
        yield self
        for child in self.children:
            yield from child.walk()

    def leaves(self) -> list["ClusterTree"]:
        return [t for t in self.walk() if t.is_leaf()]


def decompose(s: SymmetricSimilarityMatrix | np.ndarray, policy: DecompositionPolicy = DecompositionPolicy()) -> ClusterTree:
    a = _adjacency(s)

    def build(members: tuple[int, ...], label: str, depth: int) -> ClusterTree:
        node = ClusterTree(label, members, depth)
        if len(members) < policy.min_size or depth >= policy.max_depth:
            return node
        sub = a[np.ix_(members, members)]
        part = modularity_cluster(sub, policy.resolution, policy.seed)
        node.partition = part
        if part.k < 2:
            return node
        for c in range(1, part.k + 1):
            child_members = tuple(members[i] for i in part.members(c))
            child_label = str(c) if label == "root" else f"{label}.{c}"
            node.children.append(build(child_members, child_label, depth + 1))
        return node

    if a.shape[0] == 0:
        raise ValueError("empty graph: nothing to decompose")
    return build(tuple(range(a.shape[0])), "root", 0)


def write_tree(
    tree: ClusterTree,
    s: SymmetricSimilarityMatrix,
    outdir,
    basemap=None,
    threshold: float = 0.0,
) -> Path:
    """Write one VOS map + network file per tree node, plus ``manifest.tsv``.

    In each map the cluster column holds the child index of the node's split
    (1 for leaves). Coordinates come from ``basemap`` when given, else zero.
    """
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    scaled = s.scaled()
    manifest = ["label\tsize\tdepth\tmap\tnetwork"]
    for node in tree.walk():
        stem = node.label.replace(".", "_")
        map_name, net_name = f"map_{stem}.txt", f"net_{stem}.txt"
        clusters = node.partition.assignment if node.partition is not None and node.children else (1,) * node.size
        nodes = []
        for ordinal, cl in zip(node.members, clusters):
            if basemap is not None:
                bn = basemap.nodes[ordinal]
                x, y = bn.x, bn.y
            else:
                x = y = 0.0
            nodes.append(MapNode(ordinal + 1, s.codes[ordinal], x, y, cl))
        fileio.write_vos_map(BaseMap(nodes), outdir / map_name)
        sub = scaled[np.ix_(node.members, node.members)]
        fileio.write_vos_network_values(sub, threshold, outdir / net_name, ids=[m + 1 for m in node.members])
        manifest.append(f"{node.label}\t{node.size}\t{node.depth}\t{map_name}\t{net_name}")
    path = outdir / "manifest.tsv"
    path.write_text("\n".join(manifest) + "\n", encoding="utf-8")
    return path


_WORD = re.compile(r"[a-z]+(?:-[a-z]+)*")


def default_stopwords() -> frozenset[str]:
    text = resources.files("cpcmap").joinpath("data/stopwords.txt").read_text(encoding="utf-8")
    return frozenset(w.strip() for w in text.split() if w.strip())


def tokenize(title: str) -> list[str]:
    return _WORD.findall(title.lower())


def cluster_terms(
    p: Partition,
    scheme: ClassScheme,
    stopwords: Iterable[str] | None = None,
    top_k: int = 10,
) -> dict[int, list[tuple[str, int]]]:
    """Most frequent title words per cluster, ties broken alphabetically."""
    if len(p) != len(scheme):
        raise ValueError(f"partition covers {len(p)} classes, scheme has {len(scheme)}")
    stop = default_stopwords() if stopwords is None else frozenset(w.lower() for w in stopwords)
    table: dict[int, list[tuple[str, int]]] = {}
    for c in range(1, p.k + 1):
        counts: Counter[str] = Counter()
        for i in p.members(c):
            counts.update(w for w in tokenize(scheme.titles[i]) if w not in stop)
        ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
        table[c] = ranked[:top_k]
    return table


def format_term_table(table: dict[int, list[tuple[str, int]]]) -> str:
    """Tab-separated, one column per cluster, as in a printed term table."""
    clusters = sorted(table)
    depth = max((len(v) for v in table.values()), default=0)
    lines = ["\t".join(f"Cluster {c}" for c in clusters)]
    for r in range(depth):
        lines.append("\t".join(table[c][r][0] if r < len(table[c]) else "" for c in clusters))
    return "\n".join(lines) + "\n"
