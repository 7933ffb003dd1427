"""The full fusion pipeline for one hypothesis.

discount each report by its source's trust
  -> averaging fusion within each diversity cluster (duplicates add nothing)
  -> cumulative fusion across cluster representatives (independent
     corroboration reduces uncertainty)

This split is what blunts collusion: a crowd of look-alike sources lands in
one cluster and counts once, while agreement across genuinely diverse
clusters strengthens the conclusion.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

from pause.errors import DomainError
from pause.trust.diversity import DiversityModel
from pause.trust.opinion import (
    Opinion,
    discount,
    fuse_averaging_many,
    fuse_cumulative_many,
)
from pause.trust.profiles import SourceProfile


@dataclass(frozen=True)
class Report:
    """One source's ledger-backed statement about one hypothesis."""

    source_id: str
    hypothesis_id: str
    opinion: Opinion
    ledger_digest: str
    cost: float = 0.0

    def __post_init__(self):
        if self.cost < 0:
            raise DomainError("report cost must be non-negative")


@dataclass
class FusionTrace:
    """Every intermediate opinion, for the console and for audit."""

    hypothesis_id: str
    discounted: list[dict[str, Any]] = field(default_factory=list)
    cluster_opinions: list[dict[str, Any]] = field(default_factory=list)
    fused: Opinion | None = None

    def to_json_dict(self) -> dict[str, Any]:
        def as_dict(opinion: Opinion) -> dict[str, float]:
            return {"b": opinion.b, "d": opinion.d, "u": opinion.u, "a": opinion.a}

        return {
            "hypothesis_id": self.hypothesis_id,
            "discounted": [
                {**entry, "opinion": as_dict(entry["opinion"])} for entry in self.discounted
            ],
            "cluster_opinions": [
                {**entry, "opinion": as_dict(entry["opinion"])}
                for entry in self.cluster_opinions
            ],
            "fused": None if self.fused is None else as_dict(self.fused),
        }


def fuse_hypothesis(
    reports: Sequence[Report],
    profiles: Mapping[str, SourceProfile],
    model: DiversityModel,
    trace: FusionTrace | None = None,
) -> Opinion:
    """Fuse all reports on one hypothesis into a single opinion.

    Deterministic and invariant under permutation of ``reports``: reports are
    ordered inside each cluster by (source_id, ledger_digest) and clusters by
    their lexicographically smallest member.
    """
    if not reports:
        raise DomainError("cannot fuse an empty report set")
    hypothesis = reports[0].hypothesis_id
    for report in reports:
        if report.hypothesis_id != hypothesis:
            raise DomainError(
                f"mixed hypotheses in one fusion: {hypothesis!r} vs {report.hypothesis_id!r}"
            )

    by_cluster: dict[int, list[Report]] = {}
    for report in reports:
        if report.source_id not in profiles:
            raise DomainError(f"no profile for reporting source {report.source_id!r}")
        by_cluster.setdefault(model.cluster_index(report.source_id), []).append(report)

    cluster_opinions: list[Opinion] = []
    for cluster_index in sorted(by_cluster):
        members = sorted(
            by_cluster[cluster_index], key=lambda r: (r.source_id, r.ledger_digest)
        )
        discounted: list[Opinion] = []
        for report in members:
            weakened = discount(report.opinion, profiles[report.source_id].trust)
            discounted.append(weakened)
            if trace is not None:
                trace.discounted.append(
                    {
                        "source_id": report.source_id,
                        "ledger_digest": report.ledger_digest,
                        "trust": profiles[report.source_id].trust,
                        "cluster": cluster_index,
                        "opinion": weakened,
                    }
                )
        cluster_opinion = fuse_averaging_many(discounted)
        cluster_opinions.append(cluster_opinion)
        if trace is not None:
            trace.cluster_opinions.append(
                {"cluster": cluster_index, "opinion": cluster_opinion}
            )

    fused = fuse_cumulative_many(cluster_opinions)
    if trace is not None:
        trace.fused = fused
    return fused
