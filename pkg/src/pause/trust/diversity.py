"""Diversity model: cluster similar sources, pick diverse ones under budget.

Sources with similar features are assumed likely to report alike, so they are
grouped by single-linkage clustering under cosine similarity (an edge links
two sources iff similarity >= threshold; clusters are the connected
components, which makes the result independent of input order). Selection is
greedy: each pick maximizes trust times (1 + distance to what was already
picked), so near-duplicates of chosen sources score low.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from pause.errors import DimensionMismatch, DomainError
from pause.trust.profiles import SourceProfile

Vector = Sequence[float]


def cosine_similarity(first: Vector, second: Vector) -> float:
    if len(first) != len(second):
        raise DimensionMismatch(
            f"feature vectors differ in dimension: {len(first)} vs {len(second)}"
        )
    dot = sum(x * y for x, y in zip(first, second))
    norm_first = math.sqrt(sum(x * x for x in first))
    norm_second = math.sqrt(sum(y * y for y in second))
    if norm_first == 0.0 and norm_second == 0.0:
        return 1.0
    if norm_first == 0.0 or norm_second == 0.0:
        return 0.0
    return dot / (norm_first * norm_second)


def euclidean_distance(first: Vector, second: Vector) -> float:
    if len(first) != len(second):
        raise DimensionMismatch(
            f"feature vectors differ in dimension: {len(first)} vs {len(second)}"
        )
    return math.sqrt(sum((x - y) ** 2 for x, y in zip(first, second)))


@dataclass(frozen=True)
class DiversityModel:
    """A total, disjoint partition of the known sources, plus their vectors."""

    clusters: tuple[tuple[str, ...], ...]
    similarity_threshold: float
    vectors: Mapping[str, tuple[float, ...]] = field(default_factory=dict)

    def __post_init__(self):
        seen: set[str] = set()
        for cluster in self.clusters:
            for source_id in cluster:
                if source_id in seen:
                    raise DomainError(f"source {source_id!r} appears in two clusters")
                seen.add(source_id)

    def cluster_index(self, source_id: str) -> int:
        for index, cluster in enumerate(self.clusters):
            if source_id in cluster:
                return index
        raise DomainError(f"source {source_id!r} is not in the diversity model")

    @property
    def source_ids(self) -> set[str]:
        return {sid for cluster in self.clusters for sid in cluster}


def cluster_sources(
    vectors: Mapping[str, Vector],
    similarity_threshold: float,
) -> DiversityModel:
    """Single-linkage clustering of feature vectors at the given threshold."""
    source_ids = sorted(vectors)
    dims = {len(vectors[sid]) for sid in source_ids}
    if len(dims) > 1:
        raise DimensionMismatch(f"feature vectors differ in dimension: {sorted(dims)}")

    parent = {sid: sid for sid in source_ids}

    def find(sid: str) -> str:
        while parent[sid] != sid:
            parent[sid] = parent[parent[sid]]
            sid = parent[sid]
        return sid

    for i, left in enumerate(source_ids):
        for right in source_ids[i + 1 :]:
            if cosine_similarity(vectors[left], vectors[right]) >= similarity_threshold:
                root_left, root_right = find(left), find(right)
                if root_left != root_right:
                    # Lexicographically smaller id becomes the root.
                    low, high = sorted((root_left, root_right))
                    parent[high] = low

    groups: dict[str, list[str]] = {}
    for sid in source_ids:
        groups.setdefault(find(sid), []).append(sid)
    clusters = tuple(tuple(sorted(members)) for _, members in sorted(groups.items()))
    return DiversityModel(
        clusters=clusters,
        similarity_threshold=similarity_threshold,
        vectors={sid: tuple(v) for sid, v in vectors.items()},
    )


def build_diversity_model(
    profiles: Sequence[SourceProfile],
    similarity_threshold: float,
    grid_cell_deg: float = 0.5,
) -> DiversityModel:
    """Encode profiles with a codebook built from them, then cluster."""
    from pause.trust.profiles import FeatureCodebook

    codebook = FeatureCodebook(profiles, grid_cell_deg)
    return cluster_sources(
        {p.source_id: codebook.encode(p) for p in profiles}, similarity_threshold
    )


def select_sources(
    candidates: Sequence[SourceProfile],
    model: DiversityModel,
    budget: float,
) -> list[SourceProfile]:
    """Greedy budgeted selection favoring trusted-but-diverse sources.

    Score of a candidate is trust * (1 + min Euclidean feature distance to the
    already-chosen set); the first pick maximizes trust alone. Ties break on
    source_id. Returns picks in selection order; empty when nothing is
    affordable.
    """
    if budget < 0:
        raise DomainError(f"budget must be non-negative, got {budget!r}")
    remaining = list(candidates)
    chosen: list[SourceProfile] = []
    budget_left = budget
    while True:
        affordable = [c for c in remaining if c.cost <= budget_left]
        if not affordable:
            return chosen

        def score(candidate: SourceProfile) -> float:
            if not chosen:
                return candidate.trust
            vector = model.vectors[candidate.source_id]
            nearest = min(
                euclidean_distance(vector, model.vectors[pick.source_id])
                for pick in chosen
            )
            return candidate.trust * (1.0 + nearest)

        best = min(affordable, key=lambda c: (-score(c), c.source_id))
        chosen.append(best)
        remaining.remove(best)
        budget_left -= best.cost
