"""Readers and writers for VOS map/network files, Pajek bundles, and CSV tables.

All reals are written as 6-decimal fixed point with "." as decimal mark,
lines end in a single LF, and every file ends with a newline.
"""
from __future__ import annotations

import contextlib
import csv
import io
import math
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .maps import BaseMap, MapNode, OverlayMap


class FileFormatError(ValueError):
    def __init__(self, path, line: int | None, message: str):
        self.path = str(path)
        self.line = line
        where = f"{path}" if line is None else f"{path}: line {line}"
        super().__init__(f"{where}: {message}")


class TableBusy(RuntimeError):
    """Another writer holds the table."""


def fmt(x: float) -> str:
    s = f"{x:.6f}"
    return "0.000000" if s == "-0.000000" else s


def _parse_float(path, lineno: int, cell: str) -> float:
    try:
        value = float(cell)
    except ValueError:
        raise FileFormatError(path, lineno, f"non-numeric value {cell!r}") from None
    if not math.isfinite(value):
        raise FileFormatError(path, lineno, f"non-finite value {cell!r}")
    return value


def _parse_int(path, lineno: int, cell: str) -> int:
    try:
        return int(cell)
    except ValueError:
        raise FileFormatError(path, lineno, f"non-integer value {cell!r}") from None


def _write_lines(path, lines: Iterable[str]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for line in lines:
            fh.write(line)
            fh.write("\n")


@contextlib.contextmanager
def exclusive(path):
    """Single-writer guard: fail fast if another process is writing ``path``."""
    lock = Path(str(path) + ".lock")
    try:
        fd = os.open(lock, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
    except FileExistsError:
        raise TableBusy(f"{path} is locked by another writer ({lock} exists)") from None
    try:
        os.close(fd)
        yield
    finally:
        lock.unlink(missing_ok=True)


# -- VOS map / network ------------------------------------------------------

_VOS_REQUIRED = ["id", "label", "x", "y", "cluster"]


def write_vos_map(m: BaseMap, path) -> None:
    has_weight = any(n.weight is not None for n in m.nodes)
    has_score = any(n.score is not None for n in m.nodes)
    header = list(_VOS_REQUIRED)
    if has_weight:
        header.append("weight")
    if has_score:
        header.append("score")
    lines = ["\t".join(header)]
    for n in m.nodes:
        cells = [str(n.id), n.label, fmt(n.x), fmt(n.y), str(n.cluster)]
        if has_weight:
            cells.append(fmt(n.weight if n.weight is not None else 0.0))
        if has_score:
            cells.append(fmt(n.score if n.score is not None else 0.0))
        lines.append("\t".join(cells))
    _write_lines(path, lines)


def read_vos_map(path) -> BaseMap:
    """Read a VOS map file; returns an OverlayMap when a weight column is present."""
    with open(path, encoding="utf-8") as fh:
        rows = [line.rstrip("\n").rstrip("\r") for line in fh]
    if not rows:
        raise FileFormatError(path, 1, "empty file")
    header = rows[0].split("\t")
    if header[:5] != _VOS_REQUIRED or any(h not in ("weight", "score") for h in header[5:]):
        raise FileFormatError(path, 1, f"unexpected header {header!r}")
    has_weight = "weight" in header
    has_score = "score" in header
    nodes = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        cells = row.split("\t")
        if len(cells) != len(header):
            raise FileFormatError(path, lineno, f"expected {len(header)} columns, found {len(cells)}")
        nodes.append(
            MapNode(
                id=_parse_int(path, lineno, cells[0]),
                label=cells[1],
                x=_parse_float(path, lineno, cells[2]),
                y=_parse_float(path, lineno, cells[3]),
                cluster=_parse_int(path, lineno, cells[4]),
                weight=_parse_float(path, lineno, cells[header.index("weight")]) if has_weight else None,
                score=_parse_float(path, lineno, cells[header.index("score")]) if has_score else None,
            )
        )
    return OverlayMap(nodes) if has_weight else BaseMap(nodes)


def vos_network_edges(values: np.ndarray, threshold: float = 0.0, ids: Sequence[int] | None = None):
    """Edges ``(i, j, w)`` with ``i < j``, ``w > 0`` and ``w >= threshold``."""
    values = np.asarray(values, dtype=np.float64)
    n = values.shape[0]
    ids = list(range(1, n + 1)) if ids is None else list(ids)
    iu, ju = np.triu_indices(n, k=1)
    w = values[iu, ju]
    keep = (w > 0) & (w >= threshold)
    return [(ids[i], ids[j], float(x)) for i, j, x in zip(iu[keep], ju[keep], w[keep])]


def write_vos_network_values(values: np.ndarray, threshold: float, path, ids: Sequence[int] | None = None) -> int:
    if threshold < 0:
        raise ValueError("threshold must be nonnegative")
    edges = vos_network_edges(values, threshold, ids)
    _write_lines(path, (f"{i}\t{j}\t{fmt(w)}" for i, j, w in edges))
    return len(edges)


def write_vos_network(s, threshold: float, scale: float | None, path) -> int:
    """Write the scaled similarity matrix ``s`` as a VOS network edge list.

    ``scale`` overrides the matrix's own export scale when given.
    """
    factor = s.scale if scale is None else scale
    return write_vos_network_values(s.values * factor, threshold, path)


def read_vos_network(path) -> list[tuple[int, int, float]]:
    edges = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            cells = line.split()
            if not cells:
                continue
            if len(cells) != 3:
                raise FileFormatError(path, lineno, "expected 'i j strength'")
            edges.append((_parse_int(path, lineno, cells[0]), _parse_int(path, lineno, cells[1]),
                          _parse_float(path, lineno, cells[2])))
    return edges


# -- Pajek ------------------------------------------------------------------


@dataclass
class PajekBundle:
    labels: list[str]
    edges: list[tuple[int, int, float]]  # 1-based vertex numbers
    vector: list[float] | None = None
    clusters: list[int] | None = None

    def check(self) -> None:
        n = len(self.labels)
        if self.vector is not None and len(self.vector) != n:
            raise ValueError(f"vector has {len(self.vector)} entries for {n} vertices")
        if self.clusters is not None and len(self.clusters) != n:
            raise ValueError(f"cluster file has {len(self.clusters)} entries for {n} vertices")
        for i, j, _ in self.edges:
            if not (1 <= i <= n and 1 <= j <= n):
                raise ValueError(f"edge ({i}, {j}) references a vertex outside 1..{n}")


def _quote(label: str) -> str:
    return '"' + label.replace('"', "'") + '"'


def write_pajek_network(labels: Sequence[str], edges: Iterable[tuple[int, int, float]], path) -> None:
    lines = [f"*Vertices {len(labels)}"]
    lines += [f"{i} {_quote(lab)}" for i, lab in enumerate(labels, start=1)]
    lines.append("*Edges")
    lines += [f"{i} {j} {fmt(w)}" for i, j, w in edges]
    _write_lines(path, lines)


def write_pajek_vector(values: Sequence[float], path) -> None:
    _write_lines(path, [f"*Vertices {len(values)}"] + [fmt(v) for v in values])


def write_pajek_clusters(values: Sequence[int], path) -> None:
    _write_lines(path, [f"*Vertices {len(values)}"] + [str(int(v)) for v in values])


def write_pajek(bundle: PajekBundle, base_path) -> dict[str, Path]:
    """Write ``<base>.net`` and, when present, ``<base>.vec`` / ``<base>.cls``."""
    bundle.check()
    base = Path(base_path)
    out = {"net": base.with_suffix(".net")}
    write_pajek_network(bundle.labels, bundle.edges, out["net"])
    if bundle.vector is not None:
        out["vec"] = base.with_suffix(".vec")
        write_pajek_vector(bundle.vector, out["vec"])
    if bundle.clusters is not None:
        out["cls"] = base.with_suffix(".cls")
        write_pajek_clusters(bundle.clusters, out["cls"])
    return out


def _vertices_header(path, line: str) -> int:
    parts = line.split()
    if len(parts) < 2 or parts[0].lower() != "*vertices":
        raise FileFormatError(path, 1, "expected '*Vertices n'")
    return _parse_int(path, 1, parts[1])


def read_pajek_network(path) -> tuple[list[str], list[tuple[int, int, float]]]:
    with open(path, encoding="utf-8") as fh:
        lines = [line.rstrip("\n") for line in fh]
    if not lines:
        raise FileFormatError(path, 1, "empty file")
    n = _vertices_header(path, lines[0])
    labels = []
    for lineno in range(2, n + 2):
        if lineno > len(lines):
            raise FileFormatError(path, lineno, "missing vertex line")
        num, _, rest = lines[lineno - 1].partition(" ")
        if _parse_int(path, lineno, num) != lineno - 1:
            raise FileFormatError(path, lineno, "vertices out of order")
        labels.append(rest.strip().strip('"'))
    if len(lines) < n + 2 or lines[n + 1].strip().lower() not in ("*edges", "*arcs"):
        raise FileFormatError(path, n + 2, "expected '*Edges'")
    edges = []
    for lineno, line in enumerate(lines[n + 2:], start=n + 3):
        cells = line.split()
        if not cells:
            continue
        if len(cells) not in (2, 3):
            raise FileFormatError(path, lineno, "expected 'i j [weight]'")
        w = _parse_float(path, lineno, cells[2]) if len(cells) == 3 else 1.0
        edges.append((_parse_int(path, lineno, cells[0]), _parse_int(path, lineno, cells[1]), w))
    return labels, edges


def _read_pajek_column(path, parse) -> list:
    with open(path, encoding="utf-8") as fh:
        lines = [line.strip() for line in fh]
    if not lines:
        raise FileFormatError(path, 1, "empty file")
    n = _vertices_header(path, lines[0])
    values = [parse(path, i, cell) for i, cell in enumerate(lines[1:], start=2) if cell]
    if len(values) != n:
        raise FileFormatError(path, None, f"header declares {n} vertices, found {len(values)} values")
    return values


def read_pajek_vector(path) -> list[float]:
    return _read_pajek_column(path, _parse_float)


def read_pajek_clusters(path) -> list[int]:
    return _read_pajek_column(path, _parse_int)


def read_pajek(base_path) -> PajekBundle:
    base = Path(base_path)
    labels, edges = read_pajek_network(base.with_suffix(".net"))
    vec = base.with_suffix(".vec")
    cls = base.with_suffix(".cls")
    bundle = PajekBundle(
        labels,
        edges,
        read_pajek_vector(vec) if vec.exists() else None,
        read_pajek_clusters(cls) if cls.exists() else None,
    )
    bundle.check()
    return bundle


# -- CSV tables -------------------------------------------------------------


def _csv_line(cells: Sequence[str]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="").writerow(cells)
    return buf.getvalue()


def _read_csv(path) -> list[list[str]]:
    with open(path, newline="", encoding="utf-8") as fh:
        return [row for row in csv.reader(fh) if row]


def write_symmetric_csv(values: np.ndarray, codes: Sequence[str], path, scale: float = 1.0) -> None:
    """Square matrix with class codes as first row and first column."""
    values = np.asarray(values, dtype=np.float64) * scale
    lines = [_csv_line(["code", *codes])]
    for code, row in zip(codes, values):
        lines.append(_csv_line([code, *(fmt(v) for v in row)]))
    _write_lines(path, lines)


def read_symmetric_csv(path) -> tuple[tuple[str, ...], np.ndarray]:
    rows = _read_csv(path)
    if not rows or rows[0][0] != "code":
        raise FileFormatError(path, 1, "expected header starting with 'code'")
    codes = tuple(rows[0][1:])
    n = len(codes)
    if len(rows) - 1 != n:
        raise FileFormatError(path, None, f"{n} columns but {len(rows) - 1} rows")
    values = np.empty((n, n))
    for i, row in enumerate(rows[1:]):
        lineno = i + 2
        if len(row) != n + 1 or row[0] != codes[i]:
            raise FileFormatError(path, lineno, "row label or width does not match header")
        values[i] = [_parse_float(path, lineno, c) for c in row[1:]]
    return codes, values


@dataclass
class MatrixTable:
    """Classes (rows) x runs (columns) of fractional-count weights."""

    codes: tuple[str, ...]
    names: list[str]
    values: np.ndarray  # shape (len(codes), len(names))


def read_matrix_table(path) -> MatrixTable:
    rows = _read_csv(path)
    if not rows or rows[0][0] != "code":
        raise FileFormatError(path, 1, "expected header starting with 'code'")
    names = rows[0][1:]
    codes, values = [], []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(names) + 1:
            raise FileFormatError(path, lineno, f"expected {len(names) + 1} columns, found {len(row)}")
        codes.append(row[0])
        values.append([_parse_float(path, lineno, c) for c in row[1:]])
    arr = np.array(values, dtype=np.float64).reshape(len(codes), len(names))
    return MatrixTable(tuple(codes), names, arr)


def append_matrix_column(path, codes: Sequence[str], name: str, values: Sequence[float]) -> None:
    """Add one run column; create the table if absent. Existing cells are untouched."""
    path = Path(path)
    if len(values) != len(codes):
        raise ValueError(f"{len(values)} values for {len(codes)} classes")
    new_cells = [fmt(v) for v in values]
    if not path.exists():
        lines = [_csv_line(["code", name])]
        lines += [_csv_line([c, v]) for c, v in zip(codes, new_cells)]
        _write_lines(path, lines)
        return
    with open(path, encoding="utf-8", newline="") as fh:
        old = fh.read().split("\n")
    if old and old[-1] == "":
        old.pop()
    header = next(csv.reader([old[0]])) if old else []
    if not header or header[0] != "code":
        raise FileFormatError(path, 1, "expected header starting with 'code'")
    if name in header[1:]:
        raise ValueError(f"{path}: sample name {name!r} already present")
    existing_codes = [next(csv.reader([line]))[0] for line in old[1:]]
    if tuple(existing_codes) != tuple(codes):
        raise ValueError(f"{path}: class rows differ from the current scheme")
    lines = [old[0] + "," + _csv_line([name])]
    lines += [line + "," + cell for line, cell in zip(old[1:], new_cells)]
    _write_lines(path, lines)


RAO_HEADER = ["name", "delta", "d2_3", "n"]


@dataclass(frozen=True)
class RaoRow:
    name: str
    delta: float
    d2_3: float
    n: int


def read_rao_table(path) -> list[RaoRow]:
    rows = _read_csv(path)
    if not rows or rows[0] != RAO_HEADER:
        raise FileFormatError(path, 1, f"expected header {','.join(RAO_HEADER)}")
    out = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != 4:
            raise FileFormatError(path, lineno, "expected 4 columns")
        out.append(RaoRow(row[0], _parse_float(path, lineno, row[1]), _parse_float(path, lineno, row[2]),
                          _parse_int(path, lineno, row[3])))
    return out


def append_rao_row(path, row: RaoRow) -> None:
    path = Path(path)
    line = _csv_line([row.name, fmt(row.delta), fmt(row.d2_3), str(int(row.n))])
    if not path.exists():
        _write_lines(path, [_csv_line(RAO_HEADER), line])
        return
    if any(r.name == row.name for r in read_rao_table(path)):
        raise ValueError(f"{path}: sample name {row.name!r} already present")
    with open(path, "a", encoding="utf-8", newline="\n") as fh:
        fh.write(line + "\n")


def write_rao_table(rows: Iterable[RaoRow], path) -> None:
    lines = [_csv_line(RAO_HEADER)]
    lines += [_csv_line([r.name, fmt(r.delta), fmt(r.d2_3), str(int(r.n))]) for r in rows]
    _write_lines(path, lines)


def write_dense_matrix(values: np.ndarray, path) -> None:
    """Whitespace-separated square matrix, one row per line."""
    _write_lines(path, (" ".join(fmt(v) for v in row) for row in np.asarray(values, dtype=np.float64)))


def read_dense_matrix(path) -> np.ndarray:
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if line.strip():
                rows.append([_parse_float(path, lineno, c) for c in line.split()])
    return np.array(rows, dtype=np.float64)
