"""Shared exception hierarchy.

Every error carries a stable machine-readable ``code`` so the HTTP layer
can emit problem documents without string-matching messages.
"""

from __future__ import annotations


class PauseError(Exception):
    """Base class for all domain errors."""

    code = "error"


class InvariantViolation(PauseError):
    """A message or value violates a structural invariant.

    ``field`` names the offending field.
    """

    code = "invariant_violation"

    def __init__(self, field: str, detail: str):
        super().__init__(f"{field}: {detail}")
        self.field = field
        self.detail = detail


class MalformedBytes(PauseError):
    code = "malformed_bytes"


class UnknownCategory(PauseError):
    code = "unknown_category"


class FieldOutOfRange(PauseError):
    code = "field_out_of_range"


class UnknownKey(PauseError):
    code = "unknown_key"


class OpaqueCiphertext(PauseError):
    """Envelope content is encrypted for a group this party is not in."""

    code = "opaque_ciphertext"


class RejectedSignature(PauseError):
    code = "rejected_signature"


class InvalidPeerChain(PauseError):
    code = "invalid_peer_chain"


class UnknownDigest(PauseError):
    code = "unknown_digest"


class DomainError(PauseError):
    code = "domain_error"


class BaseRateMismatch(PauseError):
    code = "base_rate_mismatch"


class DimensionMismatch(PauseError):
    code = "dimension_mismatch"


class MissingGeometry(PauseError):
    code = "missing_geometry"


class EmptyRoutes(PauseError):
    code = "empty_routes"


class FrameMismatch(PauseError):
    code = "frame_mismatch"


class UnverifiedModel(PauseError):
    """Classifier weights come from an unverified origin; the gate refuses it."""

    code = "unverified_model"


class ScenarioError(PauseError):
    """Scenario file failed validation; ``event_index`` locates the problem."""

    code = "scenario_invalid"

    def __init__(self, message: str, event_index: int | None = None):
        super().__init__(message)
        self.event_index = event_index
