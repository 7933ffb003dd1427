"""Cross-checking machine percepts against the ledger-backed picture.

A smart gate does not trust a lone symbol. Three conflict patterns:

    C1  perfidy: a protective symbol painted on a military silhouette
        (symbol box contained in a tank box).
    C2  unsupported protection: the machine says Protected but no protected
        or humanitarian track with enough evidence is registered nearby,
        while a threat track is.
    C3  spoofed blindness: the machine says NotProtected at a location the
        ledger knows hosts a high-evidence protected site (or the symbols
        were made unreadable).

Any conflict escalates the decision to mandatory human review in the slow,
deliberate mode; evidence is appended to the ledger by the caller.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

from pause.minai.detections import (
    MILITARY_SILHOUETTES,
    PROTECTIVE_SYMBOLS,
    Detection,
    PerceptionState,
    ProtectionStatus,
)
from pause.minai.rules import GateConfig, contains
from pause.picture.geo import Point, haversine_km
from pause.picture.tracks import EntityTrack, TrackKind


@dataclass(frozen=True)
class CrossCheckConfig:
    radius_km: float = 1.0
    protected_min_expectation: float = 0.5
    high_expectation: float = 0.7
    gate: GateConfig = GateConfig()


@dataclass(frozen=True)
class Conflict:
    code: str  # C1 | C2 | C3
    reason: str
    related_digest: str | None = None

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "code": self.code,
            "reason": self.reason,
            "related_digest": self.related_digest,
        }


@dataclass(frozen=True)
class CrossCheckResult:
    conflicts: tuple[Conflict, ...]

    @property
    def consistent(self) -> bool:
        return not self.conflicts

    @property
    def requires_review(self) -> bool:
        return bool(self.conflicts)

    @property
    def review_mode(self) -> str | None:
        # Conflicts force the slow, reflective decision path.
        return "type_ii" if self.conflicts else None

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "consistent": self.consistent,
            "requires_review": self.requires_review,
            "review_mode": self.review_mode,
            "conflicts": [c.to_json_dict() for c in self.conflicts],
        }


def _tracks_near(
    picture: Sequence[EntityTrack], location: Point, radius_km: float
) -> list[EntityTrack]:
    return [
        track
        for track in picture
        if haversine_km((track.location.latitude, track.location.longitude), location)
        <= radius_km
    ]


def cross_check(
    machine: PerceptionState,
    detections: Sequence[Detection],
    picture: Sequence[EntityTrack],
    location: Point,
    config: CrossCheckConfig = CrossCheckConfig(),
) -> CrossCheckResult:
    conflicts: list[Conflict] = []

    by_frame: dict[int, list[Detection]] = {}
    for detection in detections:
        by_frame.setdefault(detection.frame_id, []).append(detection)
    for frame_id, frame in sorted(by_frame.items()):
        symbols = [d for d in frame if d.label in PROTECTIVE_SYMBOLS]
        silhouettes = [d for d in frame if d.label in MILITARY_SILHOUETTES]
        for symbol in symbols:
            for silhouette in silhouettes:
                if contains(silhouette, symbol, config.gate.containment_fraction):
                    conflicts.append(
                        Conflict(
                            code="C1",
                            reason=(
                                f"{symbol.label} contained in {silhouette.label} "
                                f"(frame {frame_id}): protective symbol on a "
                                "military silhouette"
                            ),
                        )
                    )

    nearby = _tracks_near(picture, location, config.radius_km)
    protected_nearby = [
        t
        for t in nearby
        if t.kind in (TrackKind.PROTECTED_SITE, TrackKind.HUMANITARIAN_ASSET)
        and t.opinion.expectation >= config.protected_min_expectation
    ]
    threats_nearby = [
        t
        for t in nearby
        if t.kind is TrackKind.THREAT
        and t.opinion.expectation >= config.protected_min_expectation
    ]

    if (
        machine.assessment is ProtectionStatus.PROTECTED
        and not protected_nearby
        and threats_nearby
    ):
        threat = threats_nearby[0]
        conflicts.append(
            Conflict(
                code="C2",
                reason=(
                    "machine sees protection but no registered protected entity is "
                    f"within {config.radius_km} km, while threat {threat.track_id} "
                    f"(E={threat.opinion.expectation:.3f}) is"
                ),
                related_digest=threat.contributing[0] if threat.contributing else None,
            )
        )

    if machine.assessment is ProtectionStatus.NOT_PROTECTED:
        strong_sites = [
            t
            for t in nearby
            if t.kind is TrackKind.PROTECTED_SITE
            and t.opinion.expectation >= config.high_expectation
        ]
        if strong_sites:
            site = strong_sites[0]
            conflicts.append(
                Conflict(
                    code="C3",
                    reason=(
                        f"machine sees no protection but protected site {site.track_id} "
                        f"(E={site.opinion.expectation:.3f}) is registered here"
                    ),
                    related_digest=site.contributing[0] if site.contributing else None,
                )
            )

    return CrossCheckResult(conflicts=tuple(conflicts))
