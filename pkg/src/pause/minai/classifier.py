"""Pluggable classifier interface and the deterministic scripted stub.

No vision model lives here: the gate consumes labeled detections from
anything honoring the protocol. The scripted stub replays detection frames
from JSON lines files, which is how scenarios drive perception tests.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Protocol, Sequence, runtime_checkable

from pause.errors import UnverifiedModel
from pause.minai.detections import Detection


@dataclass(frozen=True)
class ModelProvenance:
    """What the classifier is made of; the gate refuses unverified weights."""

    model_id: str
    algorithm_digest: str
    training_data_digest: str
    weights_verified: bool

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "model_id": self.model_id,
            "algorithm_digest": self.algorithm_digest,
            "training_data_digest": self.training_data_digest,
            "weights_verified": self.weights_verified,
        }


@runtime_checkable
class Classifier(Protocol):
    provenance: ModelProvenance

    def detect(self, frame_index: int) -> list[Detection]: ...

    def frame_count(self) -> int: ...


def require_verified(classifier: Classifier) -> Classifier:
    if not classifier.provenance.weights_verified:
        raise UnverifiedModel(
            f"classifier {classifier.provenance.model_id!r} has unverified weights origin"
        )
    return classifier


class ScriptedClassifier:
    """Replays a fixed detection script; deterministic by construction."""

    def __init__(
        self,
        frames: Sequence[Sequence[Detection]],
        provenance: ModelProvenance | None = None,
    ):
        self._frames = [list(frame) for frame in frames]
        self.provenance = provenance or ModelProvenance(
            model_id="scripted-stub",
            algorithm_digest="0" * 64,
            training_data_digest="0" * 64,
            weights_verified=True,
        )

    def detect(self, frame_index: int) -> list[Detection]:
        return list(self._frames[frame_index])

    def frame_count(self) -> int:
        return len(self._frames)

    def all_detections(self) -> list[Detection]:
        return [d for frame in self._frames for d in frame]

    @classmethod
    def from_frame_dicts(cls, frames: Sequence[dict[str, Any]]) -> "ScriptedClassifier":
        """Frames as dicts: {"frame_id": n, "detections": [...]}."""
        parsed = []
        for frame in frames:
            frame_id = int(frame.get("frame_id", len(parsed)))
            parsed.append(
                [
                    Detection.from_json_dict({"frame_id": frame_id, **d})
                    for d in frame.get("detections", [])
                ]
            )
        return cls(parsed)

    @classmethod
    def from_jsonl(cls, path: str | Path) -> "ScriptedClassifier":
        """One frame per line."""
        frames = [
            json.loads(line)
            for line in Path(path).read_text().splitlines()
            if line.strip()
        ]
        return cls.from_frame_dicts(frames)
