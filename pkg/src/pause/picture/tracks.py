"""Building the common operational picture from a verified chain.

Every number in the picture is reproducible from ledger digests alone:
tracks are a pure, deterministic function of the chain snapshot plus the
source registry, so rebuilding from raw blocks yields a byte-identical
picture.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from datetime import datetime
from typing import Any, Mapping, Sequence

from pause.ledger.entries import Block, logical_messages
from pause.picture.geo import haversine_km
from pause.trust import (
    DiversityModel,
    Opinion,
    Report,
    SourceProfile,
    SourceRegistry,
    build_diversity_model,
    fuse_hypothesis,
)
from pause.wf import GroupKeyring, MessageCategory, StateKind, WfMessage, open_envelope
from pause.wf.codec import format_timestamp
from pause.wf.references import resolve_references


class TrackKind(enum.Enum):
    PROTECTED_SITE = "ProtectedSite"
    CRITICAL_INFRASTRUCTURE = "CriticalInfrastructure"
    THREAT = "Threat"
    SURRENDER_EVENT = "SurrenderEvent"
    HUMANITARIAN_ASSET = "HumanitarianAsset"


#: Which messages assert map entities, and of what kind. Requests, resources
#: and free text inform but do not place anything on the map.
_KIND_BY_CATEGORY: dict[MessageCategory, TrackKind] = {
    MessageCategory.PROTECTIVE_SIGN: TrackKind.PROTECTED_SITE,
    MessageCategory.EMERGENCY_SIGNAL: TrackKind.SURRENDER_EVENT,
    MessageCategory.DANGER_SIGN: TrackKind.THREAT,
    MessageCategory.STATUS_SIGNAL: TrackKind.HUMANITARIAN_ASSET,
    MessageCategory.INFRASTRUCTURE_SIGN: TrackKind.CRITICAL_INFRASTRUCTURE,
    MessageCategory.MISSION_SIGNAL: TrackKind.HUMANITARIAN_ASSET,
}

#: Moving protective signs are assets, not sites.
_MOBILE_PROTECTIVE_SUBJECTS = {4}  # humanitarian_convoy


def track_kind_for(message: WfMessage) -> TrackKind | None:
    kind = _KIND_BY_CATEGORY.get(message.category)
    if (
        kind is TrackKind.PROTECTED_SITE
        and message.subject_code in _MOBILE_PROTECTIVE_SUBJECTS
    ):
        return TrackKind.HUMANITARIAN_ASSET
    return kind


@dataclass(frozen=True)
class PictureConfig:
    merge_radius_m: float = 500.0
    base_rate: float = 0.5
    similarity_threshold: float = 0.8
    u_max: float = 0.4
    lambda_km: float = 2.0
    epsilon: float = 1.0
    severity: Mapping[str, float] = field(
        default_factory=lambda: {
            "belligerent": 1.0,
            "land_mines": 0.9,
            "area_under_attack": 0.8,
            "military_activity": 0.6,
            "disaster": 0.5,
        }
    )

    def severity_of(self, subject: str) -> float:
        return float(self.severity.get(subject, 0.5))


@dataclass(frozen=True)
class EntityTrack:
    """A fused, geolocated hypothesis about one entity on the ground."""

    track_id: str
    kind: TrackKind
    location: Any  # GeoShape
    opinion: Opinion
    contributing: tuple[str, ...]
    last_update: datetime
    status: StateKind
    subject: str

    @property
    def expectation(self) -> float:
        return self.opinion.expectation

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "track_id": self.track_id,
            "kind": self.kind.value,
            "location": {
                "latitude": self.location.latitude,
                "longitude": self.location.longitude,
                "radius_m": self.location.radius_m,
            },
            "opinion": {
                "b": self.opinion.b,
                "d": self.opinion.d,
                "u": self.opinion.u,
                "a": self.opinion.a,
            },
            "expectation": self.opinion.expectation,
            "contributing": list(self.contributing),
            "last_update": format_timestamp(self.last_update),
            "status": self.status.value,
            "subject": self.subject,
        }


@dataclass
class _TrackDraft:
    kind: TrackKind
    location: Any
    subject: str
    first_digest: str
    heads: list[tuple[str, WfMessage]] = field(default_factory=list)
    ancestors: set[str] = field(default_factory=set)
    duress: bool = False
    last_update: datetime | None = None


def build_picture(
    chain: Sequence[Block],
    registry: SourceRegistry,
    config: PictureConfig = PictureConfig(),
    keyring: GroupKeyring | None = None,
) -> list[EntityTrack]:
    """Fuse a chain snapshot into entity tracks.

    Cancelled chains are excluded, duress-flagged chains carried with their
    flag; unreadable (group-encrypted) content is skipped unless the keyring
    opens it. Originators without a registered profile count as fresh
    sources (trust 0.5).
    """
    readable: list[tuple[str, WfMessage]] = []
    for entry in logical_messages(chain):
        envelope = entry.envelope
        if envelope.is_encrypted:
            if keyring is None or not keyring.has(envelope.encryption_group):
                continue
            message = open_envelope(envelope, keyring)
        else:
            message = envelope.message
        readable.append((envelope.digest, message))

    report = resolve_references(readable)
    messages_by_digest = dict(readable)
    head_set = set(report.head_digests())

    drafts: list[_TrackDraft] = []
    for digest, message in readable:
        if digest not in head_set:
            continue
        kind = track_kind_for(message)
        if kind is None or message.geometry is None:
            continue
        here = (message.geometry.latitude, message.geometry.longitude)
        target: _TrackDraft | None = None
        for draft in drafts:
            if draft.kind is not kind:
                continue
            there = (draft.location.latitude, draft.location.longitude)
            if haversine_km(here, there) * 1000.0 <= config.merge_radius_m:
                target = draft
                break
        if target is None:
            target = _TrackDraft(
                kind=kind,
                location=message.geometry,
                subject=message.subject,
                first_digest=digest,
            )
            drafts.append(target)
        target.heads.append((digest, message))
        target.duress = target.duress or (
            report.states[digest].status is StateKind.UNDER_DURESS
        )
        target.last_update = (
            message.timestamp
            if target.last_update is None
            else max(target.last_update, message.timestamp)
        )
        # Trace the whole reference chain, not just the head.
        walk = message.referenced_hash
        while walk is not None and walk not in target.ancestors:
            target.ancestors.add(walk)
            earlier = messages_by_digest.get(walk)
            walk = earlier.referenced_hash if earlier is not None else None

    # Profiles for every reporting originator; unknown ones start fresh.
    profiles: dict[str, SourceProfile] = {p.source_id: p for p in registry.profiles()}
    for draft in drafts:
        for _, message in draft.heads:
            profiles.setdefault(message.originator_id, SourceProfile(message.originator_id))
    model: DiversityModel = build_diversity_model(
        sorted(profiles.values(), key=lambda p: p.source_id),
        config.similarity_threshold,
        grid_cell_deg=registry.grid_cell_deg,
    )

    tracks: list[EntityTrack] = []
    for draft in drafts:
        track_id = f"track-{draft.first_digest[:12]}"
        reports = [
            Report(
                source_id=message.originator_id,
                hypothesis_id=track_id,
                opinion=Opinion.assertion(config.base_rate),
                ledger_digest=digest,
            )
            for digest, message in draft.heads
        ]
        opinion = fuse_hypothesis(reports, profiles, model)
        contributing = tuple(
            sorted({d for d, _ in draft.heads} | draft.ancestors)
        )
        tracks.append(
            EntityTrack(
                track_id=track_id,
                kind=draft.kind,
                location=draft.location,
                opinion=opinion,
                contributing=contributing,
                last_update=draft.last_update,
                status=StateKind.UNDER_DURESS if draft.duress else StateKind.ACTIVE,
                subject=draft.subject,
            )
        )
    tracks.sort(key=lambda t: (t.kind.value, t.track_id))
    return tracks
