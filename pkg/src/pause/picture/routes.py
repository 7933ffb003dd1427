"""Route risk assessment against the threat picture.

risk(route) = sum over Threat tracks of
    severity(subject) * E(track opinion) * exp(-distance / lambda_km)

where distance is the minimum great-circle distance from the route polyline
to the threat center. Risk is monotone in every threat's evidence and
decays smoothly with distance; the chosen route is the argmin with
lexicographic tie-break.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Sequence

from pause.errors import EmptyRoutes, InvariantViolation
from pause.picture.geo import Point, point_to_polyline_km
from pause.picture.tracks import EntityTrack, PictureConfig, TrackKind


@dataclass(frozen=True)
class RouteOption:
    route_id: str
    polyline: tuple[Point, ...]

    def __post_init__(self):
        if len(self.polyline) < 2:
            raise InvariantViolation("polyline", "a route needs at least 2 points")
        for lat, lon in self.polyline:
            if not -90 <= lat <= 90 or not -180 <= lon <= 180:
                raise InvariantViolation("polyline", f"({lat}, {lon}) out of range")

    @classmethod
    def from_json_dict(cls, data: dict[str, Any]) -> "RouteOption":
        return cls(
            route_id=str(data["route_id"]),
            polyline=tuple((float(p[0]), float(p[1])) for p in data["polyline"]),
        )

    def to_json_dict(self) -> dict[str, Any]:
        return {"route_id": self.route_id, "polyline": [list(p) for p in self.polyline]}


@dataclass(frozen=True)
class ThreatContribution:
    track_id: str
    subject: str
    severity: float
    expectation: float
    distance_km: float
    contribution: float

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "track_id": self.track_id,
            "subject": self.subject,
            "severity": self.severity,
            "expectation": self.expectation,
            "distance_km": self.distance_km,
            "contribution": self.contribution,
        }


@dataclass(frozen=True)
class RiskAssessment:
    scores: dict[str, float]
    breakdown: dict[str, tuple[ThreatContribution, ...]]
    chosen: str

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "scores": dict(self.scores),
            "breakdown": {
                route: [c.to_json_dict() for c in contributions]
                for route, contributions in self.breakdown.items()
            },
            "chosen": self.chosen,
        }


def assess_routes(
    routes: Sequence[RouteOption],
    picture: Sequence[EntityTrack],
    config: PictureConfig = PictureConfig(),
) -> RiskAssessment:
    if not routes:
        raise EmptyRoutes("no candidate routes supplied")
    if config.lambda_km <= 0:
        raise InvariantViolation("lambda_km", "must be positive")
    threats = [t for t in picture if t.kind is TrackKind.THREAT]
    scores: dict[str, float] = {}
    breakdown: dict[str, tuple[ThreatContribution, ...]] = {}
    for route in routes:
        contributions = []
        for threat in threats:
            center = (threat.location.latitude, threat.location.longitude)
            distance = point_to_polyline_km(center, route.polyline)
            severity = config.severity_of(threat.subject)
            expectation = threat.opinion.expectation
            contributions.append(
                ThreatContribution(
                    track_id=threat.track_id,
                    subject=threat.subject,
                    severity=severity,
                    expectation=expectation,
                    distance_km=distance,
                    contribution=severity
                    * expectation
                    * math.exp(-distance / config.lambda_km),
                )
            )
        # The score IS the sum of the breakdown, by construction.
        scores[route.route_id] = sum(c.contribution for c in contributions)
        breakdown[route.route_id] = tuple(contributions)
    chosen = min(scores, key=lambda rid: (scores[rid], rid))
    return RiskAssessment(scores=scores, breakdown=breakdown, chosen=chosen)
