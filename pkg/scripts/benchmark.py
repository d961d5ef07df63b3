"""Time the full pipeline on a synthetic corpus and report peak memory.

Prints one JSON object. Corpus generation happens first and is not timed;
parsing the corpus file is timed as part of the pipeline.
"""
import argparse
import json
import resource
import sys
import tempfile
import time
from pathlib import Path

from cpcmap.ingest import RecordFilter, write_corpus
from cpcmap.pipeline import load_records, run_full
from cpcmap.synth import make_basemap, make_corpus, make_scheme


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--patents", type=int, default=100_000)
    ap.add_argument("--classes", type=int, default=654)
    ap.add_argument("--citations", type=float, default=8.0)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workdir", type=Path)
    args = ap.parse_args(argv)

    scheme = make_scheme(args.classes, seed=args.seed)
    basemap = make_basemap(scheme, seed=args.seed)
    corpus = make_corpus(scheme, args.patents, args.citations, seed=args.seed)
    with tempfile.TemporaryDirectory() as tmp:
        work = args.workdir or Path(tmp)
        work.mkdir(parents=True, exist_ok=True)
        corpus_path = work / "corpus.jsonl"
        write_corpus(corpus, corpus_path)
        n_citations = sum(len(r.cited) for r in corpus)
        del corpus

        timings = {}
        t0 = time.perf_counter()
        records, _ = load_records(corpus_path, scheme)
        timings["parse"] = time.perf_counter() - t0
        portfolio = load_records(corpus_path, scheme, RecordFilter(city="Boston"))[0]
        t1 = time.perf_counter()
        run = run_full(records, scheme, basemap, portfolio, "Boston", work / "out")
        timings["pipeline"] = time.perf_counter() - t1
        timings["total"] = time.perf_counter() - t0

    peak_mb = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 1024
    report = {
        "patents": args.patents,
        "classes": args.classes,
        "citations": n_citations,
        "clusters": run.partition.k,
        "modularity": round(run.modularity, 6),
        "portfolio_n": run.portfolio.result.n_patents,
        "delta": round(run.portfolio.result.delta, 6),
        "seconds": {k: round(v, 3) for k, v in timings.items()},
        "peak_mb": round(peak_mb, 1),
    }
    json.dump(report, sys.stdout)
    print()
    return 0


if __name__ == "__main__":
    sys.exit(main())
