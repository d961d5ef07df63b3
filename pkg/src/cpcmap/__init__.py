"""Patent classification maps: class similarity, clustering, portfolio overlays and diversity."""

from .cluster import ClusterTree, DecompositionPolicy, Partition, cluster_terms, decompose, modularity, modularity_cluster
from .comatrix import TwoModeMatrix, binarize, build_two_mode, row_profile
from .diversity import DiversityResult, d2_3, rao_delta
from .ingest import ClassScheme, PatentRecord, RecordFilter, filter_corpus, parse_corpus, validate_against_scheme
from .maps import BaseMap, MapNode, OverlayMap
from .portfolio import PortfolioDistribution, difference_overlay, distribution, overlay, portfolio_cosine_network
from .similarity import (
    DistanceMatrix,
    SymmetricSimilarityMatrix,
    cosine,
    jaccard,
    offdiag_pearson,
    scaled_view,
    similarity_matrix,
    tanimoto,
    to_distance,
)
from .stats import cramers_v, pearson, spearman

__version__ = "0.1.0"
