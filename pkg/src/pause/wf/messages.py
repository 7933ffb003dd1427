"""Humanitarian protocol message model.

A message is a digital equivalent of a physical protective sign or signal:
nine functional categories (protective sign, emergency, danger, status,
infrastructure, mission, request, resource, free text), each with a small
committed table of subject codes. Messages are immutable values; the wire
form lives in :mod:`pause.wf.codec`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from datetime import datetime, timezone

from pause.errors import InvariantViolation, UnknownCategory

#: Fields carried as text must never contain the unit separator: it is the
#: canonical encoding's field delimiter.
UNIT_SEPARATOR = "\x1f"

DIGEST_HEX_LEN = 64


class MessageCategory(enum.Enum):
    """The nine functional categories, keyed by their one-letter codes."""

    PROTECTIVE_SIGN = "P"
    EMERGENCY_SIGNAL = "E"
    DANGER_SIGN = "D"
    STATUS_SIGNAL = "S"
    INFRASTRUCTURE_SIGN = "I"
    MISSION_SIGNAL = "M"
    REQUEST_SIGNAL = "Q"
    RESOURCE_MESSAGE = "R"
    FREE_TEXT = "F"

    @classmethod
    def from_code(cls, code: str) -> "MessageCategory":
        for member in cls:
            if member.value == code:
                return member
        raise KeyError(code)


class RefIndicator(enum.Enum):
    """How a message relates to an earlier one."""

    NEW = "N"
    UPDATE = "U"
    CANCEL = "C"
    ACKNOWLEDGE = "A"
    DURESS = "D"

    @classmethod
    def from_code(cls, code: str) -> "RefIndicator":
        for member in cls:
            if member.value == code:
                return member
        raise KeyError(code)


#: Duress is a property of signals humans emit about themselves; it is only
#: legal on emergency and status signals.
DURESS_CATEGORIES = frozenset(
    {MessageCategory.EMERGENCY_SIGNAL, MessageCategory.STATUS_SIGNAL}
)

#: Categories whose payload is text (a resource URL or free text); all other
#: categories must not carry a payload.
PAYLOAD_CATEGORIES = frozenset(
    {MessageCategory.RESOURCE_MESSAGE, MessageCategory.FREE_TEXT}
)

#: Committed subject-code tables, one per category. Codes are category-scoped
#: small integers; labels are the stable names used in scenario files and in
#: the HTTP API.
SUBJECT_CODES: dict[MessageCategory, dict[int, str]] = {
    MessageCategory.PROTECTIVE_SIGN: {
        1: "hospital",
        2: "safety_zone",
        3: "white_flag",
        4: "humanitarian_convoy",
        5: "cultural_property",
        6: "medical_unit",
    },
    MessageCategory.EMERGENCY_SIGNAL: {
        1: "emergency_beacon",
        2: "distress_signal",
    },
    MessageCategory.DANGER_SIGN: {
        1: "area_under_attack",
        2: "land_mines",
        3: "disaster",
        4: "belligerent",
        5: "military_activity",
    },
    MessageCategory.STATUS_SIGNAL: {
        1: "personal_beacon",
        2: "persons_for_assistance",
        3: "infrastructure_status",
    },
    MessageCategory.INFRASTRUCTURE_SIGN: {
        1: "road",
        2: "school",
        3: "utility",
        4: "water_treatment",
        5: "hospital",
        6: "power_plant",
    },
    MessageCategory.MISSION_SIGNAL: {
        1: "convoy_movement",
        2: "deconfliction",
    },
    MessageCategory.REQUEST_SIGNAL: {
        1: "area_access",
        2: "cease_fire",
    },
    MessageCategory.RESOURCE_MESSAGE: {
        1: "web_resource",
    },
    MessageCategory.FREE_TEXT: {
        1: "free_text",
    },
}


def subject_label(category: MessageCategory, subject_code: int) -> str:
    return SUBJECT_CODES[category][subject_code]


def subject_code_for(category: MessageCategory, label: str) -> int:
    for code, name in SUBJECT_CODES[category].items():
        if name == label:
            return code
    raise KeyError(f"{category.value}: no subject labelled {label!r}")


def _quantize(value: float, decimals: int) -> float:
    # Fixed-point quantization that is exactly reproduced by the wire format.
    return float(f"{value:.{decimals}f}")


@dataclass(frozen=True)
class GeoShape:
    """A circle on the ground: center plus radius in meters.

    Latitude and longitude are stored at 5-decimal-degree fixed point and the
    radius at 0.1 m, matching the canonical encoding exactly; construct via
    :meth:`of` to quantize arbitrary floats.
    """

    latitude: float
    longitude: float
    radius_m: float = 0.0

    @classmethod
    def of(cls, latitude: float, longitude: float, radius_m: float = 0.0) -> "GeoShape":
        return cls(
            latitude=_quantize(latitude, 5),
            longitude=_quantize(longitude, 5),
            radius_m=_quantize(radius_m, 1),
        )

    def validate(self) -> None:
        if not -90.0 <= self.latitude <= 90.0:
            raise InvariantViolation("geometry.latitude", f"{self.latitude} outside [-90, 90]")
        if not -180.0 <= self.longitude <= 180.0:
            raise InvariantViolation("geometry.longitude", f"{self.longitude} outside [-180, 180]")
        if not self.radius_m >= 0.0:
            raise InvariantViolation("geometry.radius_m", f"{self.radius_m} is negative")
        for field_name, value, decimals in (
            ("latitude", self.latitude, 5),
            ("longitude", self.longitude, 5),
            ("radius_m", self.radius_m, 1),
        ):
            if value != _quantize(value, decimals):
                raise InvariantViolation(
                    f"geometry.{field_name}",
                    f"{value!r} not at {decimals}-decimal fixed point; use GeoShape.of",
                )


def _check_text(field: str, value: str, allow_empty: bool = False) -> None:
    if not allow_empty and value == "":
        raise InvariantViolation(field, "must not be empty")
    if UNIT_SEPARATOR in value:
        raise InvariantViolation(field, "must not contain the unit separator (0x1f)")
    if field == "originator_id" and any(ord(ch) < 0x20 for ch in value):
        raise InvariantViolation(field, "must not contain control characters")


@dataclass(frozen=True)
class WfMessage:
    """One protocol message. Immutable; validate() checks all invariants."""

    version: int
    originator_id: str
    category: MessageCategory
    subject_code: int
    reference_indicator: RefIndicator = RefIndicator.NEW
    referenced_hash: str | None = None
    timestamp: datetime = datetime(2030, 1, 1, tzinfo=timezone.utc)
    duration: int | None = None
    geometry: GeoShape | None = None
    payload_text: str | None = None

    def validate(self) -> None:
        if not isinstance(self.version, int) or self.version < 1:
            raise InvariantViolation("version", f"{self.version!r} is not a positive integer")
        _check_text("originator_id", self.originator_id)
        if not isinstance(self.category, MessageCategory):
            raise InvariantViolation("category", f"{self.category!r} is not a MessageCategory")
        if self.subject_code not in SUBJECT_CODES[self.category]:
            raise InvariantViolation(
                "subject_code",
                f"{self.subject_code} is not a committed subject of category {self.category.value}",
            )
        if self.reference_indicator is RefIndicator.NEW:
            if self.referenced_hash is not None:
                raise InvariantViolation("referenced_hash", "must be absent on a New message")
        else:
            if self.referenced_hash is None:
                raise InvariantViolation(
                    "referenced_hash",
                    f"required when reference_indicator is {self.reference_indicator.name}",
                )
            if len(self.referenced_hash) != DIGEST_HEX_LEN or any(
                ch not in "0123456789abcdef" for ch in self.referenced_hash
            ):
                raise InvariantViolation("referenced_hash", "must be 64 lowercase hex characters")
        if (
            self.reference_indicator is RefIndicator.DURESS
            and self.category not in DURESS_CATEGORIES
        ):
            raise InvariantViolation(
                "reference_indicator",
                f"Duress is only legal on categories "
                f"{'/'.join(sorted(c.value for c in DURESS_CATEGORIES))}, "
                f"not {self.category.value}",
            )
        if self.timestamp.tzinfo is None or self.timestamp.utcoffset() != timezone.utc.utcoffset(None):
            raise InvariantViolation("timestamp", "must be timezone-aware UTC")
        if self.timestamp.microsecond != 0:
            raise InvariantViolation("timestamp", "second resolution required; truncate microseconds")
        if self.duration is not None and (not isinstance(self.duration, int) or self.duration < 0):
            raise InvariantViolation("duration", f"{self.duration!r} is not a non-negative integer")
        if self.geometry is not None:
            self.geometry.validate()
        if self.category in PAYLOAD_CATEGORIES:
            if self.payload_text is None:
                raise InvariantViolation(
                    "payload_text", f"required for category {self.category.value}"
                )
            _check_text("payload_text", self.payload_text)
        elif self.payload_text is not None:
            raise InvariantViolation(
                "payload_text", f"not allowed for category {self.category.value}"
            )

    @property
    def subject(self) -> str:
        return subject_label(self.category, self.subject_code)

    def with_reference(self, indicator: RefIndicator, referenced_hash: str) -> "WfMessage":
        return replace(self, reference_indicator=indicator, referenced_hash=referenced_hash)


def make_message(
    *,
    originator_id: str,
    category: MessageCategory | str,
    subject: int | str,
    timestamp: datetime,
    version: int = 1,
    reference_indicator: RefIndicator | str = RefIndicator.NEW,
    referenced_hash: str | None = None,
    duration: int | None = None,
    geometry: GeoShape | None = None,
    payload_text: str | None = None,
) -> WfMessage:
    """Build a validated message, normalizing the flexible input forms.

    Accepts category/indicator as enum members, one-letter codes, or enum
    names; subject as a code or label; truncates the timestamp to whole UTC
    seconds; quantizes geometry to wire precision.
    """
    if isinstance(category, str):
        try:
            category = MessageCategory.from_code(category)
        except KeyError:
            try:
                category = MessageCategory[category.upper()]
            except KeyError:
                raise UnknownCategory(f"unknown category {category!r}") from None
    if isinstance(reference_indicator, str):
        try:
            reference_indicator = RefIndicator.from_code(reference_indicator)
        except KeyError:
            reference_indicator = RefIndicator[reference_indicator.upper()]
    if isinstance(subject, str):
        subject = subject_code_for(category, subject)
    if geometry is not None:
        geometry = GeoShape.of(geometry.latitude, geometry.longitude, geometry.radius_m)
    message = WfMessage(
        version=version,
        originator_id=originator_id,
        category=category,
        subject_code=subject,
        reference_indicator=reference_indicator,
        referenced_hash=referenced_hash,
        timestamp=timestamp.astimezone(timezone.utc).replace(microsecond=0),
        duration=duration,
        geometry=geometry,
        payload_text=payload_text,
    )
    message.validate()
    return message
