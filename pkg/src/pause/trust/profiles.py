"""Source profiles: identity features, trust evidence, and feedback.

Trust is the Laplace-smoothed success rate t = (r+1)/(r+s+2) over confirmed
and refuted reports. Feature attributes are encoded to numeric vectors by a
codebook: categorical values one-hot, report location bucketed to a grid
cell, report time bucketed to the hour.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

from pause.errors import DomainError
from pause.trust.opinion import Opinion


class Outcome(enum.Enum):
    CONFIRMED = "Confirmed"
    REFUTED = "Refuted"


#: Categorical attributes the codebook one-hot encodes, in committed order.
CATEGORICAL_ATTRIBUTES = ("organisation", "alliances", "nationality")


@dataclass(frozen=True)
class SourceProfile:
    """One information source: identity, features, and trust evidence."""

    source_id: str
    attributes: Mapping[str, Any] = field(default_factory=dict)
    confirmed: int = 0
    refuted: int = 0
    cost: float = 1.0
    civilian: bool = False

    def __post_init__(self):
        if self.confirmed < 0 or self.refuted < 0:
            raise DomainError("evidence counts must be non-negative")
        if self.cost < 0:
            raise DomainError("cost must be non-negative")

    @property
    def trust(self) -> float:
        """t = (r+1)/(r+s+2), in (0, 1); a fresh source sits at 0.5."""
        return (self.confirmed + 1.0) / (self.confirmed + self.refuted + 2.0)

    @property
    def prior_opinion(self) -> Opinion:
        """The evidence-backed opinion about this source's reliability."""
        return Opinion.from_evidence(float(self.confirmed), float(self.refuted))

    def feedback(self, outcome: Outcome) -> "SourceProfile":
        if outcome is Outcome.CONFIRMED:
            return replace(self, confirmed=self.confirmed + 1)
        return replace(self, refuted=self.refuted + 1)

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "source_id": self.source_id,
            "attributes": dict(self.attributes),
            "evidence": [self.confirmed, self.refuted],
            "cost": self.cost,
            "civilian": self.civilian,
        }

    @classmethod
    def from_json_dict(cls, data: Mapping[str, Any]) -> "SourceProfile":
        r, s = data.get("evidence", (0, 0))
        return cls(
            source_id=data["source_id"],
            attributes=dict(data.get("attributes", {})),
            confirmed=int(r),
            refuted=int(s),
            cost=float(data.get("cost", 1.0)),
            civilian=bool(data.get("civilian", False)),
        )


class FeatureCodebook:
    """Deterministic attribute-to-vector encoding shared by a source set.

    Value lists are collected from the profiles and sorted, so the encoding
    depends only on the set of profiles, never on their order.
    """

    def __init__(self, profiles: Iterable[SourceProfile], grid_cell_deg: float = 0.5):
        if grid_cell_deg <= 0:
            raise DomainError("grid_cell_deg must be positive")
        self.grid_cell_deg = grid_cell_deg
        values: dict[str, set[str]] = {name: set() for name in CATEGORICAL_ATTRIBUTES}
        values["location_cell"] = set()
        values["report_hour"] = set()
        for profile in profiles:
            for name in CATEGORICAL_ATTRIBUTES:
                for value in self._raw_values(profile, name):
                    values[name].add(value)
            cell = self._location_cell(profile)
            if cell is not None:
                values["location_cell"].add(cell)
            hour = self._hour(profile)
            if hour is not None:
                values["report_hour"].add(hour)
        self._index: list[tuple[str, str]] = [
            (name, value)
            for name in (*CATEGORICAL_ATTRIBUTES, "location_cell", "report_hour")
            for value in sorted(values[name])
        ]

    @staticmethod
    def _raw_values(profile: SourceProfile, name: str) -> list[str]:
        raw = profile.attributes.get(name)
        if raw is None:
            return []
        if isinstance(raw, str):
            return [raw]
        return [str(v) for v in raw]

    def _location_cell(self, profile: SourceProfile) -> str | None:
        lat = profile.attributes.get("report_latitude")
        lon = profile.attributes.get("report_longitude")
        if lat is None or lon is None:
            return None
        return (
            f"{math.floor(float(lat) / self.grid_cell_deg)}:"
            f"{math.floor(float(lon) / self.grid_cell_deg)}"
        )

    @staticmethod
    def _hour(profile: SourceProfile) -> str | None:
        hour = profile.attributes.get("report_hour")
        return None if hour is None else str(int(hour))

    def encode(self, profile: SourceProfile) -> tuple[float, ...]:
        """One-hot/multi-hot vector plus the raw expertise component."""
        active: set[tuple[str, str]] = set()
        for name in CATEGORICAL_ATTRIBUTES:
            for value in self._raw_values(profile, name):
                active.add((name, value))
        cell = self._location_cell(profile)
        if cell is not None:
            active.add(("location_cell", cell))
        hour = self._hour(profile)
        if hour is not None:
            active.add(("report_hour", hour))
        vector = [1.0 if key in active else 0.0 for key in self._index]
        vector.append(float(profile.attributes.get("expertise", 0.0)))
        return tuple(vector)


class SourceRegistry:
    """The known sources, loadable from a JSON registry file."""

    def __init__(self, profiles: Iterable[SourceProfile] = (), grid_cell_deg: float = 0.5):
        self._profiles: dict[str, SourceProfile] = {}
        self.grid_cell_deg = grid_cell_deg
        for profile in profiles:
            self.add(profile)

    def add(self, profile: SourceProfile) -> None:
        self._profiles[profile.source_id] = profile

    def __contains__(self, source_id: str) -> bool:
        return source_id in self._profiles

    def __len__(self) -> int:
        return len(self._profiles)

    def get(self, source_id: str) -> SourceProfile:
        try:
            return self._profiles[source_id]
        except KeyError:
            raise DomainError(f"unknown source {source_id!r}") from None

    def profiles(self) -> list[SourceProfile]:
        return [self._profiles[sid] for sid in sorted(self._profiles)]

    def apply_feedback(self, source_id: str, outcome: Outcome) -> SourceProfile:
        updated = self.get(source_id).feedback(outcome)
        self._profiles[source_id] = updated
        return updated

    def vectors(self) -> dict[str, tuple[float, ...]]:
        codebook = FeatureCodebook(self.profiles(), self.grid_cell_deg)
        return {p.source_id: codebook.encode(p) for p in self.profiles()}

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "grid_cell_deg": self.grid_cell_deg,
            "profiles": [p.to_json_dict() for p in self.profiles()],
        }

    @classmethod
    def from_json_dict(cls, data: Mapping[str, Any]) -> "SourceRegistry":
        return cls(
            profiles=[SourceProfile.from_json_dict(p) for p in data.get("profiles", [])],
            grid_cell_deg=float(data.get("grid_cell_deg", 0.5)),
        )

    @classmethod
    def load(cls, path: str | Path) -> "SourceRegistry":
        return cls.from_json_dict(json.loads(Path(path).read_text()))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json_dict(), indent=2, sort_keys=True))
