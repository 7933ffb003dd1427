"""GeoJSON export of tracks and routes for the console map."""

from __future__ import annotations

from typing import Any, Sequence

from pause.picture.routes import RouteOption
from pause.picture.tracks import EntityTrack


def tracks_to_geojson(
    tracks: Sequence[EntityTrack], routes: Sequence[RouteOption] = ()
) -> dict[str, Any]:
    features: list[dict[str, Any]] = []
    for track in tracks:
        features.append(
            {
                "type": "Feature",
                "geometry": {
                    "type": "Point",
                    "coordinates": [track.location.longitude, track.location.latitude],
                },
                "properties": {
                    "track_id": track.track_id,
                    "kind": track.kind.value,
                    "subject": track.subject,
                    "status": track.status.value,
                    "expectation": track.opinion.expectation,
                    "uncertainty": track.opinion.u,
                    "radius_m": track.location.radius_m,
                    "contributing": list(track.contributing),
                },
            }
        )
    for route in routes:
        features.append(
            {
                "type": "Feature",
                "geometry": {
                    "type": "LineString",
                    "coordinates": [[lon, lat] for lat, lon in route.polyline],
                },
                "properties": {"route_id": route.route_id, "kind": "Route"},
            }
        )
    return {"type": "FeatureCollection", "features": features}
