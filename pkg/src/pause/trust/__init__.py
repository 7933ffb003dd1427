"""Subjective-logic trust fusion: opinions, diversity, selection, feedback."""

from pause.trust.diversity import (
    DiversityModel,
    build_diversity_model,
    cluster_sources,
    cosine_similarity,
    euclidean_distance,
    select_sources,
)
from pause.trust.opinion import (
    TOLERANCE,
    Opinion,
    discount,
    fuse_averaging,
    fuse_averaging_many,
    fuse_cumulative,
    fuse_cumulative_many,
)
from pause.trust.pipeline import FusionTrace, Report, fuse_hypothesis
from pause.trust.profiles import (
    FeatureCodebook,
    Outcome,
    SourceProfile,
    SourceRegistry,
)

__all__ = [
    "TOLERANCE",
    "DiversityModel",
    "FeatureCodebook",
    "FusionTrace",
    "Opinion",
    "Outcome",
    "Report",
    "SourceProfile",
    "SourceRegistry",
    "build_diversity_model",
    "cluster_sources",
    "cosine_similarity",
    "discount",
    "euclidean_distance",
    "fuse_averaging",
    "fuse_averaging_many",
    "fuse_cumulative",
    "fuse_cumulative_many",
    "fuse_hypothesis",
    "select_sources",
]
