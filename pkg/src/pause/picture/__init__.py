"""Common operational picture: tracks, anonymity, decisions, route risk."""

from pause.picture.anonymize import anonymize, laplace_sample, pseudonym_for
from pause.picture.decisions import Decision, decision_support, evidence_threshold
from pause.picture.geo import (
    EARTH_RADIUS_KM,
    haversine_km,
    km_to_deg_lat,
    km_to_deg_lon,
    point_to_polyline_km,
    point_to_segment_km,
)
from pause.picture.geojson import tracks_to_geojson
from pause.picture.routes import (
    RiskAssessment,
    RouteOption,
    ThreatContribution,
    assess_routes,
)
from pause.picture.tracks import (
    EntityTrack,
    PictureConfig,
    TrackKind,
    build_picture,
    track_kind_for,
)

__all__ = [
    "EARTH_RADIUS_KM",
    "Decision",
    "EntityTrack",
    "PictureConfig",
    "RiskAssessment",
    "RouteOption",
    "ThreatContribution",
    "TrackKind",
    "anonymize",
    "assess_routes",
    "build_picture",
    "decision_support",
    "evidence_threshold",
    "haversine_km",
    "km_to_deg_lat",
    "km_to_deg_lon",
    "laplace_sample",
    "point_to_polyline_km",
    "point_to_segment_km",
    "pseudonym_for",
    "track_kind_for",
    "tracks_to_geojson",
]
