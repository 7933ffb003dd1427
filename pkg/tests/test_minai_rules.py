"""Protection rules: containment arithmetic and the four-rule gate."""

from __future__ import annotations

import pytest

from pause.errors import FrameMismatch, InvariantViolation, UnverifiedModel
from pause.minai import (
    Detection,
    GateConfig,
    ModelProvenance,
    ProtectionStatus,
    ScriptedClassifier,
    assess_protection,
    contains,
    require_verified,
)


def det(label, box, frame_id=0, confidence=0.95, object_id=None):
    return Detection(
        label=label, box=box, confidence=confidence, frame_id=frame_id, object_id=object_id
    )


# -- containment --------------------------------------------------------------


def test_inner_fully_inside():
    outer = det("tent", (0.1, 0.1, 0.9, 0.9))
    inner = det("red_cross", (0.4, 0.4, 0.6, 0.6))
    assert contains(outer, inner)


def test_disjoint_boxes():
    outer = det("tent", (0.1, 0.1, 0.4, 0.4))
    inner = det("red_cross", (0.6, 0.6, 0.9, 0.9))
    assert not contains(outer, inner)


def test_overlap_fractions():
    # Inner box 0.2 wide; slide it so exactly half / 95% is inside the outer.
    outer = det("tent", (0.0, 0.0, 0.5, 1.0))
    half_in = det("red_cross", (0.4, 0.4, 0.6, 0.6))  # 50% inside
    assert not contains(outer, half_in)
    mostly_in = det("red_cross", (0.29, 0.4, 0.49, 0.6))  # 100% inside
    assert contains(outer, mostly_in)
    ninety_five = det("red_cross", (0.31, 0.4, 0.51, 0.6))  # 95% inside
    assert contains(outer, ninety_five)


def test_frame_mismatch():
    with pytest.raises(FrameMismatch):
        contains(det("tent", (0, 0, 1, 1), frame_id=0), det("red_cross", (0.1, 0.1, 0.2, 0.2), frame_id=1))


def test_degenerate_box_rejected():
    with pytest.raises(InvariantViolation):
        det("tent", (0.5, 0.5, 0.5, 0.9))


# -- rules --------------------------------------------------------------------


def test_red_cross_on_tent_fires_r1():
    state = assess_protection(
        [det("tent", (0.1, 0.1, 0.9, 0.9)), det("red_cross", (0.4, 0.4, 0.6, 0.6))]
    )
    assert state.assessment is ProtectionStatus.PROTECTED
    assert any(r.startswith("R1") for r in state.rationale)


def test_person_with_white_flag_fires_r2():
    state = assess_protection(
        [det("person", (0.4, 0.3, 0.6, 0.9)), det("white_flag", (0.55, 0.1, 0.7, 0.35))]
    )
    assert state.assessment is ProtectionStatus.PROTECTED
    assert any(r.startswith("R2") for r in state.rationale)


def test_hands_up_without_gun_fires_r3():
    state = assess_protection([det("hands_up", (0.4, 0.2, 0.6, 0.9))])
    assert state.assessment is ProtectionStatus.PROTECTED
    assert any(r.startswith("R3") for r in state.rationale)


def test_hands_up_with_gun_in_hand_does_not_fire_r3():
    state = assess_protection(
        [
            det("hands_up", (0.4, 0.2, 0.6, 0.9)),
            det("gun", (0.45, 0.45, 0.55, 0.6)),  # center within 0.15
        ]
    )
    assert state.assessment is ProtectionStatus.NOT_PROTECTED


def test_surrender_transition_fires_r4():
    frames = [
        # Frame 0: person p1 holding a gun.
        det("person", (0.4, 0.3, 0.6, 0.9), frame_id=0, object_id="p1"),
        det("gun", (0.45, 0.5, 0.55, 0.65), frame_id=0),
        # Frame 1: same person hands up, gun discarded on the ground far away.
        det("hands_up", (0.4, 0.2, 0.6, 0.9), frame_id=1, object_id="p1"),
        det("gun", (0.05, 0.85, 0.12, 0.95), frame_id=1),
    ]
    state = assess_protection(frames)
    assert state.assessment is ProtectionStatus.PROTECTED
    assert any(r.startswith("R4") for r in state.rationale)
    # R3 also fires in frame 1; both rationales carry frame ids.
    assert any("frames 0->1" in r for r in state.rationale)


def test_empty_input_not_protected():
    state = assess_protection([])
    assert state.assessment is ProtectionStatus.NOT_PROTECTED
    assert state.rationale == ("no detections",)


def test_low_confidence_detections_ignored():
    state = assess_protection(
        [det("hands_up", (0.4, 0.2, 0.6, 0.9), confidence=0.3)]
    )
    assert state.assessment is ProtectionStatus.NOT_PROTECTED
    loose = GateConfig(confidence_threshold=0.2)
    assert (
        assess_protection(
            [det("hands_up", (0.4, 0.2, 0.6, 0.9), confidence=0.3)], loose
        ).assessment
        is ProtectionStatus.PROTECTED
    )


def test_adding_protective_detection_never_unprotects():
    base = [det("tent", (0.1, 0.1, 0.9, 0.9)), det("red_cross", (0.4, 0.4, 0.6, 0.6))]
    assert assess_protection(base).assessment is ProtectionStatus.PROTECTED
    extended = base + [
        det("white_flag", (0.7, 0.1, 0.8, 0.2)),
        det("person", (0.65, 0.3, 0.75, 0.8)),
        det("red_crescent", (0.45, 0.45, 0.55, 0.55)),
    ]
    assert assess_protection(extended).assessment is ProtectionStatus.PROTECTED


def test_protected_rationale_nonempty_invariant():
    state = assess_protection(
        [det("tent", (0.1, 0.1, 0.9, 0.9)), det("red_cross", (0.4, 0.4, 0.6, 0.6))]
    )
    assert state.rationale


# -- classifier plumbing -------------------------------------------------------


def test_scripted_classifier_round_trip(tmp_path):
    path = tmp_path / "frames.jsonl"
    path.write_text(
        '{"frame_id": 0, "detections": [{"label": "tent", "box": [0.1, 0.1, 0.9, 0.9], "confidence": 0.9}]}\n'
        '{"frame_id": 1, "detections": []}\n'
    )
    classifier = ScriptedClassifier.from_jsonl(path)
    assert classifier.frame_count() == 2
    assert classifier.detect(0)[0].label == "tent"
    assert classifier.detect(1) == []
    assert require_verified(classifier) is classifier


def test_unverified_weights_refused():
    classifier = ScriptedClassifier(
        [],
        provenance=ModelProvenance(
            model_id="sketchy",
            algorithm_digest="1" * 64,
            training_data_digest="2" * 64,
            weights_verified=False,
        ),
    )
    with pytest.raises(UnverifiedModel):
        require_verified(classifier)
