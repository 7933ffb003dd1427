"""Cross-check conflicts: perfidy, unsupported protection, spoofed blindness."""

from __future__ import annotations

from datetime import datetime, timezone

from pause.minai import (
    CrossCheckConfig,
    Detection,
    ProtectionStatus,
    assess_protection,
    contains,
    cross_check,
)
from pause.picture import EntityTrack, TrackKind
from pause.trust import Opinion
from pause.wf import GeoShape, StateKind

EPOCH = datetime(2030, 1, 1, tzinfo=timezone.utc)
HERE = (47.1, 37.5)


def _track(kind, expectation_b=0.85, u=0.1, lat=47.1, lon=37.5, subject="hospital"):
    return EntityTrack(
        track_id=f"track-{kind.value.lower()}",
        kind=kind,
        location=GeoShape.of(lat, lon, 200),
        opinion=Opinion(expectation_b, 1.0 - expectation_b - u, u, 0.5),
        contributing=("cd" * 32,),
        last_update=EPOCH,
        status=StateKind.ACTIVE,
        subject=subject,
    )


def det(label, box, frame_id=0):
    return Detection(label=label, box=box, confidence=0.95, frame_id=frame_id)


def _tank_with_cross():
    return [
        det("tank", (0.2, 0.2, 0.8, 0.8)),
        det("red_cross", (0.45, 0.45, 0.55, 0.55)),
    ]


def test_red_cross_on_tank_raises_c1():
    detections = _tank_with_cross()
    machine = assess_protection(detections)
    # The naive gate is spoofed into seeing protection; that is the point.
    assert machine.assessment is ProtectionStatus.PROTECTED
    result = cross_check(machine, detections, [], HERE)
    assert not result.consistent
    assert [c.code for c in result.conflicts] == ["C1"]
    assert result.requires_review
    assert result.review_mode == "type_ii"


def test_c1_fires_iff_containment_arithmetic_says_so():
    tank = det("tank", (0.2, 0.2, 0.8, 0.8))
    inside = det("red_cross", (0.45, 0.45, 0.55, 0.55))
    outside = det("red_cross", (0.0, 0.0, 0.1, 0.1))
    for symbol in (inside, outside):
        machine = assess_protection([tank, symbol])
        result = cross_check(machine, [tank, symbol], [], HERE)
        fired = any(c.code == "C1" for c in result.conflicts)
        assert fired == contains(tank, symbol)


def test_red_cross_on_tent_at_registered_hospital_is_consistent():
    detections = [
        det("tent", (0.2, 0.2, 0.8, 0.8)),
        det("red_cross", (0.45, 0.45, 0.55, 0.55)),
    ]
    machine = assess_protection(detections)
    hospital = _track(TrackKind.PROTECTED_SITE, expectation_b=0.88)  # E = 0.93
    result = cross_check(machine, detections, [hospital], HERE)
    assert result.consistent


def test_protected_percept_with_only_threat_tracks_raises_c2():
    detections = _tank_with_cross()
    machine = assess_protection(detections)
    threat = _track(TrackKind.THREAT, expectation_b=0.7, subject="military_activity")
    result = cross_check(machine, detections, [threat], HERE)
    codes = [c.code for c in result.conflicts]
    assert "C1" in codes and "C2" in codes
    c2 = next(c for c in result.conflicts if c.code == "C2")
    assert c2.related_digest == threat.contributing[0]


def test_not_protected_percept_at_high_e_hospital_raises_c3():
    # Symbols made unreadable: the classifier sees only a bare tent.
    detections = [det("tent", (0.2, 0.2, 0.8, 0.8))]
    machine = assess_protection(detections)
    assert machine.assessment is ProtectionStatus.NOT_PROTECTED
    hospital = _track(TrackKind.PROTECTED_SITE, expectation_b=0.85)  # E = 0.9
    result = cross_check(machine, detections, [hospital], HERE)
    assert [c.code for c in result.conflicts] == ["C3"]
    assert result.conflicts[0].related_digest == hospital.contributing[0]


def test_c3_respects_distance_and_evidence_thresholds():
    detections = [det("tent", (0.2, 0.2, 0.8, 0.8))]
    machine = assess_protection(detections)
    far_hospital = _track(TrackKind.PROTECTED_SITE, lat=47.5)  # ~44 km away
    weak_hospital = _track(TrackKind.PROTECTED_SITE, expectation_b=0.3, u=0.3)
    for picture in ([far_hospital], [weak_hospital]):
        assert cross_check(machine, detections, picture, HERE).consistent
    config = CrossCheckConfig(high_expectation=0.4)
    assert not cross_check(machine, detections, [weak_hospital], HERE, config).consistent


def test_protected_percept_with_nearby_humanitarian_asset_is_consistent():
    detections = [
        det("person", (0.4, 0.3, 0.6, 0.9)),
        det("white_flag", (0.55, 0.1, 0.7, 0.35)),
    ]
    machine = assess_protection(detections)
    asset = _track(TrackKind.HUMANITARIAN_ASSET, subject="personal_beacon")
    threat = _track(TrackKind.THREAT, subject="belligerent")
    result = cross_check(machine, detections, [asset, threat], HERE)
    assert result.consistent
