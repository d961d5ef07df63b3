"""Synthetic schemes, basemaps and corpora with planted topic structure.

Used for tests, benchmarks and the demo scripts; nothing here is real data.
"""
from __future__ import annotations

import datetime as dt
import itertools
import string

import numpy as np

from .ingest import ClassScheme, PatentRecord
from .maps import BaseMap, MapNode

SECTIONS = "ABCDEFGHY"
CITIES = ["Boston", "Eindhoven", "Paris", "Shanghai", "Haifa", "Boulder", "Grenoble", "Atlanta"]
ASSIGNEES = ["Novartis AG", "Merck Sharp & Dohme", "Philips", "Acme Corp", "Initech", "Globex"]
_VOCAB = [
    "material", "device", "apparatus", "machine", "compound", "system", "engine", "vehicle",
    "circuit", "metal", "treatment", "composition", "control", "measuring", "processes",
    "electric", "fluid", "printing", "textile", "radiation", "combustion", "tool", "optical",
]


def make_codes(n: int) -> tuple[str, ...]:
    """``n`` distinct CPC-4 shaped codes, spread over all sections."""
    per_section = [
        [f"{s}{num:02d}{letter}" for num, letter in itertools.product(range(1, 100), string.ascii_uppercase)]
        for s in SECTIONS
    ]
    out = []
    for i in range(n):
        out.append(per_section[i % len(SECTIONS)][i // len(SECTIONS)])
    return tuple(sorted(out))


def make_scheme(n: int = 654, seed: int = 0) -> ClassScheme:
    rng = np.random.default_rng(seed)
    codes = make_codes(n)
    titles = tuple(
        " ".join(rng.choice(_VOCAB, size=rng.integers(2, 6)).tolist()).upper() + " FOR THE SAME"
        for _ in codes
    )
    return ClassScheme(codes, titles)


def topics_for(n_classes: int, n_topics: int) -> np.ndarray:
    return np.arange(n_classes) * n_topics // n_classes


def make_basemap(scheme: ClassScheme, n_topics: int = 9, seed: int = 0) -> BaseMap:
    rng = np.random.default_rng(seed)
    topic = topics_for(len(scheme), n_topics)
    angles = 2 * np.pi * np.arange(n_topics) / n_topics
    nodes = []
    for i, code in enumerate(scheme.codes):
        t = topic[i]
        x = float(np.cos(angles[t]) + 0.15 * rng.standard_normal())
        y = float(np.sin(angles[t]) + 0.15 * rng.standard_normal())
        nodes.append(MapNode(i + 1, code, round(x, 6), round(y, 6), int(t) + 1))
    return BaseMap(nodes)


def make_corpus(
    scheme: ClassScheme,
    n_patents: int,
    mean_citations: float = 8.0,
    n_topics: int = 9,
    pool_per_topic: int | None = None,
    seed: int = 0,
) -> list[PatentRecord]:
    """Patents whose classes and citations concentrate within latent topics."""
    rng = np.random.default_rng(seed)
    n_classes = len(scheme)
    topic = topics_for(n_classes, n_topics)
    members = [np.flatnonzero(topic == t) for t in range(n_topics)]
    if pool_per_topic is None:
        pool_per_topic = max(50, n_patents // n_topics)
    start = dt.date(2016, 1, 1).toordinal()

    topics = rng.integers(0, n_topics, size=n_patents)
    n_classes_per = 1 + rng.poisson(0.8, size=n_patents)
    n_cites = rng.poisson(mean_citations, size=n_patents)
    days = rng.integers(0, 366, size=n_patents)
    cities = rng.integers(0, len(CITIES), size=n_patents)
    assignees = rng.integers(0, len(ASSIGNEES), size=n_patents)

    records = []
    for p in range(n_patents):
        t = topics[p]
        k = min(n_classes_per[p], len(members[t]))
        cls = rng.choice(members[t], size=k, replace=False)
        if rng.random() < 0.1:
            cls = np.append(cls, rng.integers(0, n_classes))
        codes = tuple(dict.fromkeys(scheme.codes[c] for c in cls))
        m = n_cites[p]
        local = rng.random(m) < 0.85
        ranks = np.floor(pool_per_topic * rng.random(m) ** 2).astype(np.int64)
        owner = np.where(local, t, rng.integers(0, n_topics, size=m))
        cited = tuple(f"c{o}-{r}" for o, r in zip(owner.tolist(), ranks.tolist()))
        records.append(
            PatentRecord(
                id=f"P{p:07d}",
                date=dt.date.fromordinal(start + int(days[p])),
                classes=codes,
                cited=cited,
                assignee=ASSIGNEES[assignees[p]],
                city=CITIES[(cities[p] + t) % len(CITIES)],
                country="US",
            )
        )
    return records
