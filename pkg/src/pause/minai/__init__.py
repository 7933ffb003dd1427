"""Protective perception rules, engagement outcomes, and cross-checking."""

from pause.minai.classifier import (
    Classifier,
    ModelProvenance,
    ScriptedClassifier,
    require_verified,
)
from pause.minai.crosscheck import (
    Conflict,
    CrossCheckConfig,
    CrossCheckResult,
    cross_check,
)
from pause.minai.detections import (
    KNOWN_LABELS,
    Detection,
    Perceiver,
    PerceptionState,
    ProtectionStatus,
    operator_state,
)
from pause.minai.engagement import (
    NOT_PROTECTED,
    OUTCOME_TABLE,
    PROTECTED,
    EngagementCase,
    resolve_engagement,
)
from pause.minai.rules import GateConfig, assess_protection, contains

__all__ = [
    "KNOWN_LABELS",
    "NOT_PROTECTED",
    "OUTCOME_TABLE",
    "PROTECTED",
    "Classifier",
    "Conflict",
    "CrossCheckConfig",
    "CrossCheckResult",
    "Detection",
    "EngagementCase",
    "GateConfig",
    "ModelProvenance",
    "Perceiver",
    "PerceptionState",
    "ProtectionStatus",
    "ScriptedClassifier",
    "assess_protection",
    "contains",
    "cross_check",
    "operator_state",
    "require_verified",
    "resolve_engagement",
]
