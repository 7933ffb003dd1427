"""Civilian report anonymization: pseudonymity plus location/time coarsening.

Identity is replaced by a per-scenario pseudonym; latitude and longitude are
perturbed by independent Laplace noise with scale 1/epsilon kilometers
(converted to degrees at the report latitude); the timestamp is truncated to
the hour. Noise comes from the scenario's seeded generator, so runs are
reproducible. Category, subject, status, and references pass through
untouched.
"""

from __future__ import annotations

import math
import random

from pause.errors import DomainError, MissingGeometry
from pause.picture.geo import km_to_deg_lat, km_to_deg_lon
from pause.wf.messages import GeoShape, WfMessage


def laplace_sample(rng: random.Random, scale: float) -> float:
    """Inverse-CDF Laplace draw; E|x| equals ``scale``."""
    u = rng.random() - 0.5
    return -scale * math.copysign(1.0, u) * math.log(1.0 - 2.0 * abs(u))


def anonymize(
    message: WfMessage,
    epsilon: float,
    rng: random.Random,
    pseudonym: str,
) -> WfMessage:
    """Return the anonymized message; the caller vouches the originator is
    civilian-class (role enforcement lives in the node service)."""
    if epsilon <= 0:
        raise DomainError(f"epsilon must be positive, got {epsilon!r}")
    if message.geometry is None:
        raise MissingGeometry("anonymization requires geometry to perturb")
    scale_km = 1.0 / epsilon
    noise_lat_km = laplace_sample(rng, scale_km)
    noise_lon_km = laplace_sample(rng, scale_km)
    latitude = message.geometry.latitude + km_to_deg_lat(noise_lat_km)
    longitude = message.geometry.longitude + km_to_deg_lon(
        noise_lon_km, message.geometry.latitude
    )
    latitude = min(90.0, max(-90.0, latitude))
    longitude = min(180.0, max(-180.0, longitude))
    blurred = GeoShape.of(latitude, longitude, message.geometry.radius_m)
    coarse_time = message.timestamp.replace(minute=0, second=0, microsecond=0)
    anonymized = WfMessage(
        version=message.version,
        originator_id=pseudonym,
        category=message.category,
        subject_code=message.subject_code,
        reference_indicator=message.reference_indicator,
        referenced_hash=message.referenced_hash,
        timestamp=coarse_time,
        duration=message.duration,
        geometry=blurred,
        payload_text=message.payload_text,
    )
    anonymized.validate()
    return anonymized


def pseudonym_for(source_id: str, scenario_seed: int | str) -> str:
    """Stable within a scenario, unlinkable across scenarios."""
    import hashlib

    tag = hashlib.sha256(f"{scenario_seed}:pseudonym:{source_id}".encode()).hexdigest()
    return f"anon-{tag[:10]}"
