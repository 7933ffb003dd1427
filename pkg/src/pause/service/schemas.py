"""Request/response models for the HTTP API (JSON mirror of docs/api.md)."""

from __future__ import annotations

from typing import Any

from pydantic import BaseModel, Field


class MessageSubmission(BaseModel):
    message: dict[str, Any]
    signature: str | None = None  # hex; omitted for civilian-relay sessions


class MessageAccepted(BaseModel):
    digest: str
    entry_id: str
    originator_id: str
    anonymized: bool = False


class PictureSnapshot(BaseModel):
    version: int
    tracks: list[dict[str, Any]]
    geojson: dict[str, Any]


class BlockRange(BaseModel):
    from_height: int
    blocks: list[dict[str, Any]]


class AuditTrail(BaseModel):
    digest: str
    events: list[dict[str, Any]]


class WhatIfRequest(BaseModel):
    routes: list[dict[str, Any]]


class TrustFeedback(BaseModel):
    outcome: str  # Confirmed | Refuted


class TrustUpdated(BaseModel):
    source_id: str
    trust: float
    confirmed: int
    refuted: int


class EngagementRequest(BaseModel):
    truth: str
    operator: str
    machine: str
    machine_rationale: list[str] = Field(default_factory=list)


class DetectionReport(BaseModel):
    frames: list[dict[str, Any]]
    location: tuple[float, float]
    operator: str | None = None
    truth: str | None = None


class PerceptionResponse(BaseModel):
    assessment: str
    rationale: list[str]
    conflicts: list[dict[str, Any]]
    requires_review: bool
    review_mode: str | None
    engagement: dict[str, Any] | None = None


class SyncRequest(BaseModel):
    node_id: str
    blocks: list[dict[str, Any]]


class SyncResponse(BaseModel):
    node_id: str
    blocks: list[dict[str, Any]]
    absorbed: int


class ProblemDocument(BaseModel):
    code: str
    detail: str
