"""Great-circle geometry on the desk-scale sphere."""

from __future__ import annotations

import math
from typing import Sequence

EARTH_RADIUS_KM = 6371.0088
KM_PER_DEG_LAT = 110.574
KM_PER_DEG_LON_EQUATOR = 111.320

Point = tuple[float, float]  # (latitude, longitude) in degrees


def haversine_km(a: Point, b: Point) -> float:
    lat1, lon1, lat2, lon2 = map(math.radians, (*a, *b))
    dlat = lat2 - lat1
    dlon = lon2 - lon1
    h = math.sin(dlat / 2) ** 2 + math.cos(lat1) * math.cos(lat2) * math.sin(dlon / 2) ** 2
    return 2 * EARTH_RADIUS_KM * math.asin(min(1.0, math.sqrt(h)))


def _bearing(a: Point, b: Point) -> float:
    lat1, lon1, lat2, lon2 = map(math.radians, (*a, *b))
    y = math.sin(lon2 - lon1) * math.cos(lat2)
    x = math.cos(lat1) * math.sin(lat2) - math.sin(lat1) * math.cos(lat2) * math.cos(lon2 - lon1)
    return math.atan2(y, x)


def _clamp(value: float, low: float = -1.0, high: float = 1.0) -> float:
    return min(high, max(low, value))


def point_to_segment_km(p: Point, a: Point, b: Point) -> float:
    """Minimum great-circle distance from ``p`` to the arc ``a``-``b``."""
    if a == b:
        return haversine_km(p, a)
    d13 = haversine_km(a, p) / EARTH_RADIUS_KM  # angular distance
    if d13 == 0.0:
        return 0.0
    theta13 = _bearing(a, p)
    theta12 = _bearing(a, b)
    dxt = math.asin(_clamp(math.sin(d13) * math.sin(theta13 - theta12)))
    # Along-track position of the perpendicular foot.
    cos_dxt = math.cos(dxt)
    if abs(cos_dxt) < 1e-15:
        return abs(dxt) * EARTH_RADIUS_KM
    dat = math.acos(_clamp(math.cos(d13) / cos_dxt))
    if math.cos(theta13 - theta12) < 0:
        return haversine_km(p, a)  # foot lies behind a
    d12 = haversine_km(a, b) / EARTH_RADIUS_KM
    if dat > d12:
        return haversine_km(p, b)  # foot lies beyond b
    return abs(dxt) * EARTH_RADIUS_KM


def point_to_polyline_km(p: Point, polyline: Sequence[Point]) -> float:
    if len(polyline) == 1:
        return haversine_km(p, polyline[0])
    return min(
        point_to_segment_km(p, polyline[i], polyline[i + 1])
        for i in range(len(polyline) - 1)
    )


def km_to_deg_lat(km: float) -> float:
    return km / KM_PER_DEG_LAT


def km_to_deg_lon(km: float, at_latitude: float) -> float:
    scale = KM_PER_DEG_LON_EQUATOR * math.cos(math.radians(at_latitude))
    if abs(scale) < 1e-9:
        scale = 1e-9  # polar degenerate case; desk scenarios stay off the poles
    return km / scale
