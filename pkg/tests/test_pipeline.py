"""The per-hypothesis fusion pipeline, against a stepwise reference run."""

from __future__ import annotations

import random

import pytest

from pause.trust import (
    DiversityModel,
    Opinion,
    Report,
    SourceProfile,
    discount,
    fuse_averaging_many,
    fuse_cumulative_many,
    fuse_hypothesis,
    FusionTrace,
)
from tests.test_opinion import assert_opinion_close


def _model(clusters, vectors=None):
    return DiversityModel(
        clusters=tuple(tuple(sorted(c)) for c in clusters),
        similarity_threshold=0.8,
        vectors=vectors or {},
    )


def _profiles(*specs):
    return {
        sid: SourceProfile(sid, confirmed=r, refuted=s) for sid, r, s in specs
    }


def test_single_fully_trusted_report_passes_through():
    opinion = Opinion(0.7, 0.1, 0.2, 0.5)
    profiles = {"s1": SourceProfile("s1", confirmed=10**9)}  # trust -> 1
    report = Report("s1", "hyp", opinion, ledger_digest="d1")
    fused = fuse_hypothesis([report], profiles, _model([("s1",)]))
    assert_opinion_close(fused, opinion, tol=1e-6)


def test_identical_reports_in_one_cluster_collapse():
    opinion = Opinion(0.6, 0.2, 0.2, 0.5)
    profiles = _profiles(("s1", 4, 0), ("s2", 4, 0), ("s3", 4, 0))
    model = _model([("s1", "s2", "s3")])
    one = fuse_hypothesis([Report("s1", "h", opinion, "d1")], profiles, model)
    many = fuse_hypothesis(
        [Report(f"s{i}", "h", opinion, f"d{i}") for i in (1, 2, 3)], profiles, model
    )
    assert_opinion_close(many, one)


def test_three_clusters_two_reports_each_vs_stepwise_reference():
    rng = random.Random(5)

    def random_opinion():
        b = rng.uniform(0, 0.7)
        d = rng.uniform(0, 1 - b - 0.05)
        return Opinion(b, d, 1 - b - d, 0.5)

    sources = [f"s{i}" for i in range(6)]
    clusters = [("s0", "s1"), ("s2", "s3"), ("s4", "s5")]
    profiles = {sid: SourceProfile(sid, confirmed=rng.randrange(10), refuted=rng.randrange(4)) for sid in sources}
    reports = [Report(sid, "h", random_opinion(), f"dig-{sid}") for sid in sources]
    model = _model(clusters)

    # Straight-line reference: run the documented stages by hand.
    expected_clusters = []
    for cluster in clusters:
        member_reports = [r for r in reports if r.source_id in cluster]
        discounted = [
            discount(r.opinion, profiles[r.source_id].trust) for r in member_reports
        ]
        expected_clusters.append(fuse_averaging_many(discounted))
    expected = fuse_cumulative_many(expected_clusters)

    assert_opinion_close(fuse_hypothesis(reports, profiles, model), expected)


def test_report_order_permutation_invariance():
    rng = random.Random(11)
    profiles = _profiles(("a", 3, 1), ("b", 1, 1), ("c", 8, 0), ("d", 0, 2))
    model = _model([("a", "b"), ("c",), ("d",)])
    reports = [
        Report("a", "h", Opinion(0.5, 0.2, 0.3, 0.5), "d1"),
        Report("b", "h", Opinion(0.1, 0.6, 0.3, 0.5), "d2"),
        Report("c", "h", Opinion(0.4, 0.4, 0.2, 0.5), "d3"),
        Report("d", "h", Opinion(0.2, 0.1, 0.7, 0.5), "d4"),
        Report("a", "h", Opinion(0.9, 0.05, 0.05, 0.5), "d5"),
    ]
    baseline = fuse_hypothesis(reports, profiles, model)
    for _ in range(10):
        shuffled = reports[:]
        rng.shuffle(shuffled)
        assert fuse_hypothesis(shuffled, profiles, model) == baseline


def test_mixed_hypotheses_rejected():
    from pause.errors import DomainError

    profiles = _profiles(("a", 0, 0))
    with pytest.raises(DomainError):
        fuse_hypothesis(
            [
                Report("a", "h1", Opinion.vacuous(), "d1"),
                Report("a", "h2", Opinion.vacuous(), "d2"),
            ],
            profiles,
            _model([("a",)]),
        )


def test_trace_captures_every_stage():
    profiles = _profiles(("a", 2, 0), ("b", 0, 0))
    model = _model([("a",), ("b",)])
    reports = [
        Report("a", "h", Opinion(0.6, 0.2, 0.2, 0.5), "d1"),
        Report("b", "h", Opinion(0.3, 0.3, 0.4, 0.5), "d2"),
    ]
    trace = FusionTrace(hypothesis_id="h")
    fused = fuse_hypothesis(reports, profiles, model, trace=trace)
    assert len(trace.discounted) == 2
    assert len(trace.cluster_opinions) == 2
    assert trace.fused == fused
    payload = trace.to_json_dict()
    assert payload["fused"]["b"] == pytest.approx(fused.b)
