"""Canonical wire encoding, hashing, and the JSON mirror form.

The canonical form is line-free UTF-8 text: ten fields in fixed order joined
by the unit separator 0x1f. It is documented byte-for-byte in
``docs/protocol.md``; the message digest is SHA-256 over these bytes.
Decoding is strict: any input that is not the canonical encoding of some
valid message is rejected, so ``decode(b)`` either errors or satisfies
``encode(decode(b)) == b``.
"""

from __future__ import annotations

import hashlib
from datetime import datetime, timezone
from typing import Any

from pause.errors import (
    FieldOutOfRange,
    InvariantViolation,
    MalformedBytes,
    UnknownCategory,
)
from pause.wf.messages import (
    SUBJECT_CODES,
    UNIT_SEPARATOR,
    GeoShape,
    MessageCategory,
    RefIndicator,
    WfMessage,
)

FIELD_COUNT = 10
TIMESTAMP_FORMAT = "%Y-%m-%dT%H:%M:%SZ"


def format_timestamp(ts: datetime) -> str:
    return ts.astimezone(timezone.utc).strftime(TIMESTAMP_FORMAT)


def parse_timestamp(text: str) -> datetime:
    try:
        parsed = datetime.strptime(text, TIMESTAMP_FORMAT)
    except ValueError:
        raise MalformedBytes(f"timestamp {text!r} is not YYYY-MM-DDTHH:MM:SSZ") from None
    if parsed.strftime(TIMESTAMP_FORMAT) != text:
        # strptime matches literals case-insensitively; canonical form does not.
        raise MalformedBytes(f"timestamp {text!r} is not in canonical form")
    return parsed.replace(tzinfo=timezone.utc)


def encode(message: WfMessage) -> bytes:
    """Encode a valid message to its unique canonical byte sequence."""
    message.validate()
    geometry = message.geometry
    fields = (
        str(message.version),
        message.originator_id,
        message.category.value,
        str(message.subject_code),
        message.reference_indicator.value,
        message.referenced_hash or "",
        format_timestamp(message.timestamp),
        "" if message.duration is None else str(message.duration),
        ""
        if geometry is None
        else f"{geometry.latitude:.5f},{geometry.longitude:.5f},{geometry.radius_m:.1f}",
        message.payload_text or "",
    )
    return UNIT_SEPARATOR.join(fields).encode("utf-8")


def _canonical_int(field: str, text: str) -> int:
    # Leading zeros, signs, or whitespace would re-encode differently.
    if not text.isdigit() or str(int(text)) != text:
        raise MalformedBytes(f"{field}: {text!r} is not a canonical integer")
    return int(text)


def _parse_geometry(text: str) -> GeoShape:
    parts = text.split(",")
    if len(parts) != 3:
        raise MalformedBytes(f"geometry {text!r} is not lat,lon,radius")
    try:
        lat, lon, radius = (float(p) for p in parts)
    except ValueError:
        raise MalformedBytes(f"geometry {text!r} has non-numeric components") from None
    if (f"{lat:.5f}", f"{lon:.5f}", f"{radius:.1f}") != tuple(parts):
        raise MalformedBytes(f"geometry {text!r} is not at canonical fixed point")
    if not -90.0 <= lat <= 90.0:
        raise FieldOutOfRange(f"latitude {lat} outside [-90, 90]")
    if not -180.0 <= lon <= 180.0:
        raise FieldOutOfRange(f"longitude {lon} outside [-180, 180]")
    if radius < 0.0:
        raise FieldOutOfRange(f"radius_m {radius} is negative")
    return GeoShape(latitude=lat, longitude=lon, radius_m=radius)


def decode(data: bytes) -> WfMessage:
    """Decode canonical bytes; strict inverse of :func:`encode`."""
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError:
        raise MalformedBytes("input is not valid UTF-8") from None
    parts = text.split(UNIT_SEPARATOR)
    if len(parts) != FIELD_COUNT:
        raise MalformedBytes(f"expected {FIELD_COUNT} fields, found {len(parts)}")
    (
        raw_version,
        originator_id,
        raw_category,
        raw_subject,
        raw_indicator,
        raw_reference,
        raw_timestamp,
        raw_duration,
        raw_geometry,
        raw_payload,
    ) = parts

    version = _canonical_int("version", raw_version)
    if version < 1:
        raise FieldOutOfRange(f"version {version} must be positive")
    try:
        category = MessageCategory.from_code(raw_category)
    except KeyError:
        raise UnknownCategory(f"unknown category code {raw_category!r}") from None
    subject_code = _canonical_int("subject_code", raw_subject)
    if subject_code not in SUBJECT_CODES[category]:
        raise FieldOutOfRange(
            f"subject_code {subject_code} outside category {category.value}'s table"
        )
    try:
        indicator = RefIndicator.from_code(raw_indicator)
    except KeyError:
        raise MalformedBytes(f"unknown reference indicator {raw_indicator!r}") from None
    duration = None if raw_duration == "" else _canonical_int("duration", raw_duration)
    geometry = None if raw_geometry == "" else _parse_geometry(raw_geometry)

    message = WfMessage(
        version=version,
        originator_id=originator_id,
        category=category,
        subject_code=subject_code,
        reference_indicator=indicator,
        referenced_hash=raw_reference or None,
        timestamp=parse_timestamp(raw_timestamp),
        duration=duration,
        geometry=geometry,
        payload_text=raw_payload or None,
    )
    message.validate()  # cross-field rules: payload presence, duress legality, ...
    return message


def digest_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def digest(message: WfMessage) -> str:
    """SHA-256 hex digest of the canonical bytes; the message's identity."""
    return digest_bytes(encode(message))


def to_json_dict(message: WfMessage) -> dict[str, Any]:
    """JSON mirror of the message; field names match the type's fields."""
    return {
        "version": message.version,
        "originator_id": message.originator_id,
        "category": message.category.value,
        "subject_code": message.subject_code,
        "reference_indicator": message.reference_indicator.name.title(),
        "referenced_hash": message.referenced_hash,
        "timestamp": format_timestamp(message.timestamp),
        "duration": message.duration,
        "geometry": None
        if message.geometry is None
        else {
            "latitude": message.geometry.latitude,
            "longitude": message.geometry.longitude,
            "radius_m": message.geometry.radius_m,
        },
        "payload_text": message.payload_text,
    }


def from_json_dict(data: dict[str, Any]) -> WfMessage:
    """Parse the JSON mirror form and validate the result."""
    try:
        raw_category = data["category"]
        geometry = data.get("geometry")
    except (TypeError, KeyError) as exc:
        raise InvariantViolation("message", f"missing field: {exc}") from None
    try:
        category = MessageCategory.from_code(raw_category)
    except KeyError:
        raise UnknownCategory(f"unknown category {raw_category!r}") from None
    raw_indicator = data.get("reference_indicator", "New")
    try:
        indicator = RefIndicator[raw_indicator.upper()]
    except (KeyError, AttributeError):
        try:
            indicator = RefIndicator.from_code(raw_indicator)
        except (KeyError, TypeError):
            raise InvariantViolation(
                "reference_indicator", f"unknown value {raw_indicator!r}"
            ) from None
    shape = None
    if geometry is not None:
        try:
            shape = GeoShape.of(
                float(geometry["latitude"]),
                float(geometry["longitude"]),
                float(geometry.get("radius_m", 0.0)),
            )
        except (TypeError, KeyError, ValueError):
            raise InvariantViolation("geometry", f"bad geometry object {geometry!r}") from None
    timestamp = data.get("timestamp")
    if isinstance(timestamp, str):
        parsed_ts = parse_timestamp(timestamp)
    elif isinstance(timestamp, datetime):
        parsed_ts = timestamp
    else:
        raise InvariantViolation("timestamp", "required; ISO-8601 UTC string")
    try:
        version = int(data.get("version", 1))
        subject_code = int(data.get("subject_code", 0))
    except (TypeError, ValueError):
        raise InvariantViolation("version", "version and subject_code must be integers") from None
    message = WfMessage(
        version=version,
        originator_id=str(data.get("originator_id", "")),
        category=category,
        subject_code=subject_code,
        reference_indicator=indicator,
        referenced_hash=data.get("referenced_hash"),
        timestamp=parsed_ts,
        duration=data.get("duration"),
        geometry=shape,
        payload_text=data.get("payload_text"),
    )
    message.validate()
    return message
