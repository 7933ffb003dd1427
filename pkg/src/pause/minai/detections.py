"""Labeled detections from a pluggable classifier, and perception states."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Any

from pause.errors import InvariantViolation

#: The closed label set the protection rules reason over.
KNOWN_LABELS = frozenset(
    {
        "tent",
        "truck",
        "tank",
        "person",
        "gun",
        "red_cross",
        "red_crescent",
        "white_flag",
        "hands_up",
    }
)

PROTECTIVE_SYMBOLS = frozenset({"red_cross", "red_crescent"})
CONTAINER_OBJECTS = frozenset({"tent", "truck", "tank", "person"})
MILITARY_SILHOUETTES = frozenset({"tank"})


@dataclass(frozen=True)
class Detection:
    """One classifier detection in normalized [0, 1] image coordinates."""

    label: str
    box: tuple[float, float, float, float]  # (x_min, y_min, x_max, y_max)
    confidence: float
    frame_id: int
    timestamp: int = 0
    object_id: str | None = None  # stable id from the tracker, when available

    def __post_init__(self):
        if self.label not in KNOWN_LABELS:
            raise InvariantViolation("label", f"unknown label {self.label!r}")
        x_min, y_min, x_max, y_max = self.box
        if not (x_min < x_max and y_min < y_max):
            raise InvariantViolation("box", f"degenerate box {self.box}")
        if not all(0.0 <= v <= 1.0 for v in self.box):
            raise InvariantViolation("box", f"box {self.box} outside [0, 1]")
        if not 0.0 <= self.confidence <= 1.0:
            raise InvariantViolation("confidence", f"{self.confidence} outside [0, 1]")

    @property
    def area(self) -> float:
        x_min, y_min, x_max, y_max = self.box
        return (x_max - x_min) * (y_max - y_min)

    @property
    def center(self) -> tuple[float, float]:
        x_min, y_min, x_max, y_max = self.box
        return ((x_min + x_max) / 2.0, (y_min + y_max) / 2.0)

    def center_distance(self, other: "Detection") -> float:
        (x1, y1), (x2, y2) = self.center, other.center
        return ((x1 - x2) ** 2 + (y1 - y2) ** 2) ** 0.5

    def intersection_area(self, other: "Detection") -> float:
        ax0, ay0, ax1, ay1 = self.box
        bx0, by0, bx1, by1 = other.box
        width = min(ax1, bx1) - max(ax0, bx0)
        height = min(ay1, by1) - max(ay0, by0)
        if width <= 0 or height <= 0:
            return 0.0
        return width * height

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "label": self.label,
            "box": list(self.box),
            "confidence": self.confidence,
            "frame_id": self.frame_id,
            "timestamp": self.timestamp,
            "object_id": self.object_id,
        }

    @classmethod
    def from_json_dict(cls, data: dict[str, Any]) -> "Detection":
        return cls(
            label=data["label"],
            box=tuple(float(v) for v in data["box"]),
            confidence=float(data.get("confidence", 1.0)),
            frame_id=int(data["frame_id"]),
            timestamp=int(data.get("timestamp", 0)),
            object_id=data.get("object_id"),
        )


class Perceiver(enum.Enum):
    OPERATOR = "Operator"
    MACHINE = "Machine"


class ProtectionStatus(enum.Enum):
    PROTECTED = "Protected"
    NOT_PROTECTED = "NotProtected"

    @classmethod
    def parse(cls, value: "ProtectionStatus | str") -> "ProtectionStatus":
        if isinstance(value, cls):
            return value
        normalized = str(value).replace(" ", "").replace("_", "").lower()
        for member in cls:
            if member.value.lower() == normalized:
                return member
        raise InvariantViolation("assessment", f"unknown protection status {value!r}")


@dataclass(frozen=True)
class PerceptionState:
    """One perceiver's protection assessment plus the rules behind it."""

    perceiver: Perceiver
    assessment: ProtectionStatus
    rationale: tuple[str, ...]

    def __post_init__(self):
        if self.assessment is ProtectionStatus.PROTECTED and not self.rationale:
            raise InvariantViolation(
                "rationale", "a Protected assessment must state why"
            )

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "perceiver": self.perceiver.value,
            "assessment": self.assessment.value,
            "rationale": list(self.rationale),
        }


def operator_state(
    assessment: ProtectionStatus | str, note: str = "operator judgment"
) -> PerceptionState:
    status = ProtectionStatus.parse(assessment)
    return PerceptionState(Perceiver.OPERATOR, status, (note,))
