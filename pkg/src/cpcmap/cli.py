"""Command-line front end.

Each subcommand writes its artifacts and prints a one-line summary on stdout.
Failures print one ``error: <Kind>: <message>`` line on stderr and exit 1.
"""
from __future__ import annotations

import argparse
import datetime as dt
import json
import logging
import sys
from pathlib import Path

from . import fileio
from .cluster import DecompositionPolicy, cluster_terms, decompose, format_term_table
from .cluster import modularity as modularity_score
from .cluster import modularity_cluster, write_tree
from .comatrix import build_two_mode, write_sparse_dump
from .ingest import RecordFilter, read_scheme
from .maps import COLOR_NAMES, BaseMap, MapNode
from .pipeline import load_records, run_portfolio
from .portfolio import difference_overlay, distribution, portfolio_cosine_network, write_local_map
from .similarity import KINDS, SymmetricSimilarityMatrix, similarity_matrix, to_distance
from .stats import cramers_v, pearson, section_labels, spearman

log = logging.getLogger("cpcmap")


def _date(text: str) -> dt.date:
    try:
        return dt.date.fromisoformat(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected YYYY-MM-DD, got {text!r}") from None


def _positive(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _add_corpus_args(p: argparse.ArgumentParser, filters: bool = True) -> None:
    p.add_argument("--input", required=True, type=Path, help="line-delimited JSON patent records")
    p.add_argument("--scheme", required=True, type=Path, help="class scheme CSV (code,title)")
    p.add_argument("--strict", action="store_true", help="fail on malformed lines and unknown classes")
    if filters:
        g = p.add_argument_group("record filter")
        g.add_argument("--city")
        g.add_argument("--country")
        g.add_argument("--assignee", help="case-insensitive substring")
        g.add_argument("--date-from", type=_date)
        g.add_argument("--date-to", type=_date)


def _filter(args) -> RecordFilter:
    date_range = None
    if args.date_from or args.date_to:
        date_range = (args.date_from, args.date_to)
    return RecordFilter(date_range, args.city, args.country, args.assignee)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cpcmap", description="Patent classification maps and portfolios.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log warnings to stderr")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    p = sub.add_parser("build-matrix", help="classes x cited-patents sparse matrix")
    _add_corpus_args(p)
    p.add_argument("--counting", choices=("whole", "fractional"), default="fractional")
    p.add_argument("--out", required=True, type=Path)

    p = sub.add_parser("similarity", help="class x class similarity matrix")
    _add_corpus_args(p)
    p.add_argument("--counting", choices=("whole", "fractional"), default="fractional")
    p.add_argument("--kind", choices=KINDS, default="cosine")
    p.add_argument("--scale", type=_positive, default=1.0, help="export multiplier (keep 1 for distance files)")
    p.add_argument("--out", required=True, type=Path, help="symmetric matrix CSV")
    p.add_argument("--network", type=Path, help="also write a VOS network edge list")
    p.add_argument("--threshold", type=float, default=0.0)

    p = sub.add_parser("cluster", help="modularity clustering of a similarity matrix")
    p.add_argument("--similarity", required=True, type=Path)
    p.add_argument("--resolution", type=_positive, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, type=Path, help="Pajek cluster file")
    p.add_argument("--scheme", type=Path, help="class scheme with titles, for --terms")
    p.add_argument("--terms", type=Path, help="write the top-10 title words per cluster")
    p.add_argument("--basemap", type=Path, help="coordinates for --map-out")
    p.add_argument("--map-out", type=Path, help="write a VOS map with the new clusters")

    p = sub.add_parser("decompose", help="nested maps by recursive clustering")
    p.add_argument("--similarity", required=True, type=Path)
    p.add_argument("--resolution", type=_positive, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--min-size", type=int, default=10)
    p.add_argument("--max-depth", type=int, default=3)
    p.add_argument("--scale", type=_positive, default=1000.0)
    p.add_argument("--threshold", type=float, default=0.0)
    p.add_argument("--basemap", type=Path)
    p.add_argument("--outdir", required=True, type=Path)

    p = sub.add_parser("portfolio", help="overlay, diversity and table rows for one patent set")
    _add_corpus_args(p)
    p.add_argument("--basemap", required=True, type=Path)
    p.add_argument("--cosine", required=True, type=Path, help="raw (unscaled) cosine matrix CSV")
    p.add_argument("--name", required=True, help="sample name (first 10 characters label the tables)")
    p.add_argument("--matrix-table", type=Path)
    p.add_argument("--rao-table", type=Path)
    p.add_argument("--outdir", required=True, type=Path)

    p = sub.add_parser("diff", help="difference map of two patent sets")
    _add_corpus_args(p)
    p.add_argument("--input2", required=True, type=Path)
    p.add_argument("--basemap", required=True, type=Path)
    p.add_argument("--outdir", required=True, type=Path)

    p = sub.add_parser("local-map", help="cosine network among runs of a matrix table")
    p.add_argument("--matrix-table", required=True, type=Path)
    p.add_argument("--outdir", required=True, type=Path)

    p = sub.add_parser("stats", help="correlations and Cramér's V")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--rao-table", type=Path, help="Pearson/Spearman of N against delta and d2_3")
    mode.add_argument("--partition-a", type=Path, help="Pajek cluster file")
    p.add_argument("--partition-b", type=Path, help="second cluster file")
    p.add_argument("--sections", action="store_true", help="compare partition-a with CPC sections")
    p.add_argument("--scheme", type=Path, help="class scheme, for --sections")
    p.add_argument("--json", action="store_true", help="machine-readable single line")
    return parser


def _read_similarity(path) -> SymmetricSimilarityMatrix:
    codes, values = fileio.read_symmetric_csv(path)
    return SymmetricSimilarityMatrix(values, "unknown", codes)


def cmd_build_matrix(args) -> str:
    scheme = read_scheme(args.scheme)
    records, _ = load_records(args.input, scheme, _filter(args), args.strict)
    m = build_two_mode(records, scheme, args.counting)
    write_sparse_dump(m, args.out)
    return f"build-matrix: {m.shape[0]} classes x {m.shape[1]} cited patents, nnz={m.data.nnz}, total={m.total():.6f}"


def cmd_similarity(args) -> str:
    scheme = read_scheme(args.scheme)
    records, _ = load_records(args.input, scheme, _filter(args), args.strict)
    s = similarity_matrix(build_two_mode(records, scheme, args.counting), args.kind)
    fileio.write_symmetric_csv(s.values, s.codes, args.out, scale=args.scale)
    msg = f"similarity: {args.kind} {s.n}x{s.n} scale={args.scale:g} -> {args.out}"
    if args.network:
        n_edges = fileio.write_vos_network_values(s.values * args.scale, args.threshold, args.network)
        msg += f", {n_edges} edges -> {args.network}"
    return msg


def cmd_cluster(args) -> str:
    s = _read_similarity(args.similarity)
    part = modularity_cluster(s, args.resolution, args.seed)
    fileio.write_pajek_clusters(part.assignment, args.out)
    try:
        q = modularity_score(s, part, args.resolution)
    except ValueError:  # no edge weight at all
        q = float("nan")
    if args.terms:
        if not args.scheme:
            raise ValueError("--terms requires --scheme")
        scheme = read_scheme(args.scheme)
        if scheme.codes != s.codes:
            raise ValueError("scheme classes do not match the similarity matrix")
        args.terms.write_text(format_term_table(cluster_terms(part, scheme)), encoding="utf-8")
    if args.map_out:
        base = fileio.read_vos_map(args.basemap) if args.basemap else None
        if base is not None:
            base.check_aligned(s.codes)
        nodes = [
            MapNode(i + 1, code, base.nodes[i].x if base else 0.0, base.nodes[i].y if base else 0.0, c)
            for i, (code, c) in enumerate(zip(s.codes, part.assignment))
        ]
        fileio.write_vos_map(BaseMap(nodes), args.map_out)
    return f"cluster: k={part.k} modularity={q:.6f} -> {args.out}"


def cmd_decompose(args) -> str:
    s = _read_similarity(args.similarity)
    s = SymmetricSimilarityMatrix(s.values, s.kind, s.codes, args.scale)
    policy = DecompositionPolicy(args.min_size, args.max_depth, args.resolution, args.seed)
    tree = decompose(s, policy)
    base = fileio.read_vos_map(args.basemap) if args.basemap else None
    if base is not None:
        base.check_aligned(s.codes)
    manifest = write_tree(tree, s, args.outdir, base, args.threshold)
    n_nodes = sum(1 for _ in tree.walk())
    return f"decompose: {n_nodes} maps, {len(tree.leaves())} leaves -> {manifest}"


def cmd_portfolio(args) -> str:
    scheme = read_scheme(args.scheme)
    base = fileio.read_vos_map(args.basemap)
    base.check_aligned(scheme.codes)
    codes, values = fileio.read_symmetric_csv(args.cosine)
    if codes != scheme.codes:
        raise ValueError("cosine matrix classes do not match the scheme")
    dist = to_distance(SymmetricSimilarityMatrix(values, "cosine", codes))
    records, _ = load_records(args.input, scheme, _filter(args), args.strict)
    run = run_portfolio(records, scheme, base, dist, args.name, args.outdir, args.matrix_table, args.rao_table)
    r = run.result
    return f"portfolio: {r.sample_name} N={r.n_patents} delta={r.delta:.2f} d2_3={r.d2_3:.2f}"


def cmd_diff(args) -> str:
    scheme = read_scheme(args.scheme)
    base = fileio.read_vos_map(args.basemap)
    base.check_aligned(scheme.codes)
    f = _filter(args)
    rec1, _ = load_records(args.input, scheme, f, args.strict)
    rec2, _ = load_records(args.input2, scheme, f, args.strict)
    p1 = distribution(rec1, scheme, "set1")
    p2 = distribution(rec2, scheme, "set2")
    ov = difference_overlay(p1, p2, base)
    args.outdir.mkdir(parents=True, exist_ok=True)
    fileio.write_vos_map(ov, args.outdir / "vos2.txt")
    fileio.write_pajek_vector([n.score for n in ov.nodes], args.outdir / "vos2.vec")
    fileio.write_pajek_clusters([n.cluster for n in ov.nodes], args.outdir / "vos2.cls")
    counts = {name: 0 for name in COLOR_NAMES.values()}
    for n in ov.nodes:
        counts[COLOR_NAMES[n.cluster]] += 1
    return (f"diff: N1={p1.n_patents} N2={p2.n_patents} red={counts['red']} green={counts['green']} "
            f"neutral={counts['neutral']}")


def cmd_local_map(args) -> str:
    table = fileio.read_matrix_table(args.matrix_table)
    net = portfolio_cosine_network(table)
    paths = write_local_map(net, args.outdir)
    return f"local-map: {len(net.names)} runs, {len(net.edges())} edges -> {paths['net']}, {paths['dat']}"


def cmd_stats(args) -> str:
    out: dict[str, float | int] = {}
    if args.rao_table:
        rows = fileio.read_rao_table(args.rao_table)
        n = [r.n for r in rows]
        delta = [r.delta for r in rows]
        d23 = [r.d2_3 for r in rows]
        out = {
            "runs": len(rows),
            "pearson_n_delta": pearson(n, delta),
            "pearson_n_d2_3": pearson(n, d23),
            "spearman_n_delta": spearman(n, delta),
        }
    else:
        a = fileio.read_pajek_clusters(args.partition_a)
        if args.sections:
            if not args.scheme:
                raise ValueError("--sections requires --scheme")
            b = section_labels(read_scheme(args.scheme).codes)
        elif args.partition_b:
            b = fileio.read_pajek_clusters(args.partition_b)
        else:
            raise ValueError("--partition-a needs --partition-b or --sections")
        out = {"items": len(a), "cramers_v": cramers_v(a, b)}
    if args.json:
        return json.dumps(out, sort_keys=True)
    return "stats: " + " ".join(f"{k}={v:.6f}" if isinstance(v, float) else f"{k}={v}" for k, v in out.items())


COMMANDS = {
    "build-matrix": cmd_build_matrix,
    "similarity": cmd_similarity,
    "cluster": cmd_cluster,
    "decompose": cmd_decompose,
    "portfolio": cmd_portfolio,
    "diff": cmd_diff,
    "local-map": cmd_local_map,
    "stats": cmd_stats,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.verbose else logging.ERROR,
                        format="%(levelname)s: %(message)s")
    try:
        summary = COMMANDS[args.command](args)
    except Exception as exc:  # noqa: BLE001 - every failure maps to one parseable line
        message = " ".join(str(exc).split())
        print(f"error: {type(exc).__name__}: {message}", file=sys.stderr)
        return 1
    print(summary)
    return 0


if __name__ == "__main__":
    sys.exit(main())
