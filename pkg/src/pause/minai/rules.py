"""Machine protection rules over detection streams.

Four rules, any of which marks the scene Protected:

    R1  a protective symbol contained in an object box ("the symbol is ON
        the object"): >= 90% of the symbol's area inside the object.
    R2  a white flag co-present with a person in the same frame.
    R3  a hands-up person with no gun within the proximity radius.
    R4  surrender transition: a tracked person holds a gun in an earlier
        frame, then appears hands-up with every gun separated.

Rules only ever add protection: more protective detections can never flip a
Protected assessment back to NotProtected.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from pause.errors import FrameMismatch
from pause.minai.detections import (
    CONTAINER_OBJECTS,
    PROTECTIVE_SYMBOLS,
    Detection,
    Perceiver,
    PerceptionState,
    ProtectionStatus,
)


@dataclass(frozen=True)
class GateConfig:
    confidence_threshold: float = 0.5
    containment_fraction: float = 0.9
    proximity_radius: float = 0.15  # normalized units; "near" for R3/R4
    separation_radius: float = 0.15


def contains(outer: Detection, inner: Detection, fraction: float = 0.9) -> bool:
    """True iff at least ``fraction`` of ``inner`` lies within ``outer``."""
    if outer.frame_id != inner.frame_id:
        raise FrameMismatch(
            f"containment across frames {outer.frame_id} and {inner.frame_id}"
        )
    return outer.intersection_area(inner) >= fraction * inner.area


def _frames_in_order(detections: Iterable[Detection]) -> list[tuple[int, list[Detection]]]:
    frames: dict[int, list[Detection]] = {}
    for detection in detections:
        frames.setdefault(detection.frame_id, []).append(detection)
    return sorted(frames.items())


def assess_protection(
    detections: Sequence[Detection],
    config: GateConfig = GateConfig(),
) -> PerceptionState:
    """Run the protection rules over a time-ordered detection sequence."""
    confident = [d for d in detections if d.confidence >= config.confidence_threshold]
    if not confident:
        return PerceptionState(
            Perceiver.MACHINE, ProtectionStatus.NOT_PROTECTED, ("no detections",)
        )

    fired: list[str] = []
    gun_holders: dict[str, int] = {}  # object_id -> frame where they held a gun

    for frame_id, frame in _frames_in_order(confident):
        symbols = [d for d in frame if d.label in PROTECTIVE_SYMBOLS]
        objects = [d for d in frame if d.label in CONTAINER_OBJECTS]
        persons = [d for d in frame if d.label == "person"]
        flags = [d for d in frame if d.label == "white_flag"]
        hands_up = [d for d in frame if d.label == "hands_up"]
        guns = [d for d in frame if d.label == "gun"]

        for symbol in symbols:
            for obj in objects:
                if contains(obj, symbol, config.containment_fraction):
                    fired.append(
                        f"R1: {symbol.label} contained in {obj.label} (frame {frame_id})"
                    )

        if flags and persons:
            fired.append(f"R2: white_flag co-present with person (frame {frame_id})")

        for raised in hands_up:
            if not any(
                raised.center_distance(gun) < config.proximity_radius for gun in guns
            ):
                fired.append(
                    f"R3: hands_up with no gun within proximity (frame {frame_id})"
                )

        # R4 bookkeeping: who is holding a gun right now?
        for person in persons + hands_up:
            if person.object_id is None:
                continue
            holding = any(
                person.center_distance(gun) < config.proximity_radius
                or person.intersection_area(gun) > 0
                for gun in guns
            )
            if holding:
                gun_holders[person.object_id] = frame_id
            elif (
                person.label == "hands_up"
                and person.object_id in gun_holders
                and gun_holders[person.object_id] < frame_id
                and all(
                    person.center_distance(gun) >= config.separation_radius
                    for gun in guns
                )
            ):
                fired.append(
                    f"R4: surrender transition by {person.object_id} "
                    f"(frames {gun_holders[person.object_id]}->{frame_id})"
                )

    deduped = tuple(dict.fromkeys(fired))
    if deduped:
        return PerceptionState(Perceiver.MACHINE, ProtectionStatus.PROTECTED, deduped)
    return PerceptionState(
        Perceiver.MACHINE, ProtectionStatus.NOT_PROTECTED, ("no protection rule fired",)
    )
