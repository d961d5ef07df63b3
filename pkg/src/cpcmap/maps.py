"""Map geometry: basemap nodes and overlays drawn on them."""
from __future__ import annotations

import math
from dataclasses import dataclass

# cluster-column codes in difference maps
RED, GREEN, NEUTRAL = 1, 2, 3
COLOR_NAMES = {RED: "red", GREEN: "green", NEUTRAL: "neutral"}


@dataclass(frozen=True)
class MapNode:
    id: int  # 1-based; equals class ordinal + 1
    label: str
    x: float
    y: float
    cluster: int
    weight: float | None = None
    score: float | None = None

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"node {self.id}: non-finite coordinates")


@dataclass(frozen=True)
class BaseMap:
    nodes: list[MapNode]

    def __post_init__(self):
        ids = [n.id for n in self.nodes]
        if len(set(ids)) != len(ids):
            raise ValueError("basemap node ids must be unique")

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(n.label for n in self.nodes)

    def check_aligned(self, codes) -> None:
        codes = tuple(codes)
        if len(codes) != len(self.nodes):
            raise ValueError(f"basemap has {len(self.nodes)} nodes, scheme has {len(codes)} classes")
        for i, (node, code) in enumerate(zip(self.nodes, codes)):
            if node.id != i + 1 or node.label != code:
                raise ValueError(
                    f"basemap node {i + 1} ({node.id}, {node.label!r}) does not match scheme class {code!r}"
                )


@dataclass(frozen=True)
class OverlayMap(BaseMap):
    """Basemap nodes carrying a weight; difference maps also carry a signed score."""

    @property
    def weights(self) -> list[float]:
        return [n.weight for n in self.nodes]

    @property
    def is_difference(self) -> bool:
        return any(n.score is not None for n in self.nodes)
