"""The node service: HTTP surface over one ledger node.

All ledger mutations funnel through the node's single-writer append; picture
snapshots are immutable and swapped atomically; queries never mutate state.
Sessions are identified by the X-Client-Id / X-Client-Role headers:
civilian-relay sessions can only submit through the anonymity layer (the
server anonymizes and signs under a held pseudonym key), and observers are
read-only.
"""

from __future__ import annotations

import random
import threading
from typing import Any

from fastapi import Depends, FastAPI, Header, Request
from fastapi.responses import JSONResponse, StreamingResponse

from pause import __version__
from pause.errors import (
    DomainError,
    EmptyRoutes,
    FieldOutOfRange,
    InvalidPeerChain,
    InvariantViolation,
    MalformedBytes,
    MissingGeometry,
    OpaqueCiphertext,
    PauseError,
    RejectedSignature,
    ScenarioError,
    UnknownCategory,
    UnknownDigest,
    UnknownKey,
)
from pause.ledger import Block, LedgerNode, audit_trail, chain_bytes, verify_chain
from pause.minai import (
    CrossCheckConfig,
    ScriptedClassifier,
    assess_protection,
    cross_check,
    operator_state,
    require_verified,
    resolve_engagement,
)
from pause.picture import (
    PictureConfig,
    RouteOption,
    anonymize,
    assess_routes,
    build_picture,
    pseudonym_for,
    tracks_to_geojson,
)
from pause.service.bus import EventBus
from pause.service.config import NodeServiceConfig
from pause.service.schemas import (
    AuditTrail,
    BlockRange,
    DetectionReport,
    EngagementRequest,
    MessageAccepted,
    MessageSubmission,
    PerceptionResponse,
    PictureSnapshot,
    ProblemDocument,
    SyncRequest,
    SyncResponse,
    TrustFeedback,
    TrustUpdated,
    WhatIfRequest,
)
from pause.trust import Outcome, SourceRegistry
from pause.wf import (
    Envelope,
    GeoShape,
    GroupKeyring,
    KeyPair,
    KeyRegistry,
    derive_keypair,
    from_json_dict,
)
from pause.wf import codec

_STATUS_BY_ERROR: list[tuple[type[PauseError], int]] = [
    (RejectedSignature, 401),
    (UnknownKey, 401),
    (UnknownDigest, 404),
    (OpaqueCiphertext, 403),
    (InvalidPeerChain, 409),
    (InvariantViolation, 400),
    (MalformedBytes, 400),
    (UnknownCategory, 400),
    (FieldOutOfRange, 400),
    (DomainError, 400),
    (MissingGeometry, 400),
    (EmptyRoutes, 400),
    (ScenarioError, 400),
]

WRITE_ROLES = {"Military", "Humanitarian", "ICRC", "CivilianRelay"}


class Session:
    def __init__(self, client_id: str, role: str):
        self.client_id = client_id
        self.role = role

    @property
    def read_only(self) -> bool:
        return self.role not in WRITE_ROLES

    @property
    def civilian(self) -> bool:
        return self.role == "CivilianRelay"


def _session(
    x_client_id: str = Header(default="anonymous"),
    x_client_role: str = Header(default="Observer"),
) -> Session:
    return Session(x_client_id, x_client_role)


class NodeService:
    """Mutable service state around one LedgerNode."""

    def __init__(self, config: NodeServiceConfig):
        self.config = config
        self.registry = KeyRegistry()
        self.sources = (
            SourceRegistry.load(config.sources_file)
            if config.sources_file
            else SourceRegistry()
        )
        if config.registry_file:
            for originator, pub_hex in (
                KeyRegistry.load(config.registry_file).to_dict().items()
            ):
                self.registry.register(originator, pub_hex)
        if config.demo_key_seed is not None:
            for profile in self.sources.profiles():
                keypair = derive_keypair(
                    f"source:{profile.source_id}", config.demo_key_seed
                )
                self.registry.register(profile.source_id, keypair.public_key)
        self.node = LedgerNode(
            config.node_id,
            KeyPair.from_seed(config.key_seed.encode("utf-8")),
            self.registry,
            block_size=config.block_size,
        )
        self.registry.register(config.node_id, self.node.keypair.public_key)
        self.keyring = GroupKeyring(
            {gid: bytes.fromhex(key) for gid, key in config.group_keys.items()}
        )
        self.picture_config = PictureConfig(
            merge_radius_m=config.merge_radius_m,
            similarity_threshold=config.similarity_threshold,
            u_max=config.u_max,
            lambda_km=config.lambda_km,
            epsilon=config.epsilon,
        )
        self.cross_config = CrossCheckConfig()
        self.bus = EventBus(config.event_queue_size)
        self.anonymity_rng = random.Random(f"{config.anonymize_seed}:service")
        self.pseudonym_keys: dict[str, KeyPair] = {}
        self._lock = threading.Lock()
        self._snapshot_version = 0
        self._snapshot: list = []
        self._refresh_picture(publish=False)

    # -- picture lifecycle -------------------------------------------------

    def _refresh_picture(self, publish: bool = True) -> None:
        old = {t.track_id: t.to_json_dict() for t in self._snapshot}
        snapshot = build_picture(
            self.node.chain, self.sources, self.picture_config, keyring=self.keyring
        )
        self._snapshot = snapshot
        self._snapshot_version += 1
        if not publish:
            return
        for track in snapshot:
            payload = track.to_json_dict()
            if old.get(track.track_id) != payload:
                self.bus.publish({"type": "track_update", "track": payload})

    def snapshot(self) -> PictureSnapshot:
        tracks = self._snapshot
        return PictureSnapshot(
            version=self._snapshot_version,
            tracks=[t.to_json_dict() for t in tracks],
            geojson=tracks_to_geojson(tracks),
        )

    # -- appends -------------------------------------------------------------

    def append_envelope(self, envelope: Envelope) -> Any:
        with self._lock:
            before = {b.block_hash for b in self.node.chain}
            entry = self.node.append(envelope)
            new_blocks = [b for b in self.node.chain if b.block_hash not in before]
            for block in new_blocks:
                self.bus.publish(
                    {
                        "type": "block",
                        "height": block.height,
                        "block_hash": block.block_hash,
                        "entries": len(block.entries),
                    }
                )
            self._refresh_picture()
            return entry

    def submit(self, submission: MessageSubmission, session: Session) -> MessageAccepted:
        message = from_json_dict(submission.message)
        anonymized = False
        if session.civilian:
            # Anonymity layer is enforced server-side for civilian relays.
            pseudonym = pseudonym_for(
                message.originator_id, self.config.anonymize_seed
            )
            message = anonymize(
                message, self.config.epsilon, self.anonymity_rng, pseudonym
            )
            anonymized = True
            if pseudonym not in self.pseudonym_keys:
                keypair = derive_keypair(
                    f"pseudonym:{pseudonym}", self.config.anonymize_seed
                )
                self.pseudonym_keys[pseudonym] = keypair
                self.registry.register(pseudonym, keypair.public_key)
            canonical = codec.encode(message)
            digest = codec.digest_bytes(canonical)
            envelope = Envelope(
                originator_id=pseudonym,
                canonical_bytes=canonical,
                digest=digest,
                signature=self.pseudonym_keys[pseudonym].sign(digest.encode("ascii")),
                timestamp=codec.format_timestamp(message.timestamp),
            )
        else:
            if submission.signature is None:
                raise RejectedSignature("a signed submission requires a signature")
            canonical = codec.encode(message)
            envelope = Envelope(
                originator_id=message.originator_id,
                canonical_bytes=canonical,
                digest=codec.digest_bytes(canonical),
                signature=bytes.fromhex(submission.signature),
                timestamp=codec.format_timestamp(message.timestamp),
            )
        entry = self.append_envelope(envelope)
        return MessageAccepted(
            digest=envelope.digest,
            entry_id=entry.entry_id,
            originator_id=envelope.originator_id,
            anonymized=anonymized,
        )


def create_app(config: NodeServiceConfig | None = None) -> FastAPI:
    service = NodeService(config or NodeServiceConfig())
    app = FastAPI(title="pause-node", version=__version__)
    app.state.service = service

    @app.exception_handler(PauseError)
    async def pause_error_handler(_request: Request, exc: PauseError):
        status = next(
            (code for etype, code in _STATUS_BY_ERROR if isinstance(exc, etype)), 500
        )
        return JSONResponse(
            status_code=status,
            content=ProblemDocument(code=exc.code, detail=str(exc)).model_dump(),
        )

    @app.get("/")
    def info() -> dict[str, Any]:
        return {
            "service": "pause-node",
            "version": __version__,
            "node_id": service.config.node_id,
            "height": len(service.node.chain) - 1 if service.node.chain else None,
            "entries": service.node.entry_count,
        }

    @app.post("/messages", response_model=MessageAccepted, status_code=201)
    def post_message(
        submission: MessageSubmission, session: Session = Depends(_session)
    ):
        if session.read_only:
            return JSONResponse(
                status_code=403,
                content=ProblemDocument(
                    code="read_only_role",
                    detail=f"role {session.role!r} cannot submit messages",
                ).model_dump(),
            )
        return service.submit(submission, session)

    @app.get("/picture", response_model=PictureSnapshot)
    def get_picture():
        return service.snapshot()

    @app.get("/ledger/blocks", response_model=BlockRange)
    def get_blocks(from_height: int = 0):
        blocks = [
            b.to_json_dict() for b in service.node.chain if b.height >= from_height
        ]
        return BlockRange(from_height=from_height, blocks=blocks)

    @app.get("/audit/{digest}", response_model=AuditTrail)
    def get_audit(digest: str):
        events = audit_trail(service.node.chain, digest)
        return AuditTrail(digest=digest, events=[e.to_json_dict() for e in events])

    @app.post("/whatif/route")
    def what_if(request: WhatIfRequest):
        routes = [RouteOption.from_json_dict(r) for r in request.routes]
        assessment = assess_routes(routes, service._snapshot, service.picture_config)
        return assessment.to_json_dict()

    @app.post("/trust/{source_id}", response_model=TrustUpdated)
    def post_trust(
        source_id: str, feedback: TrustFeedback, session: Session = Depends(_session)
    ):
        if session.read_only:
            return JSONResponse(
                status_code=403,
                content=ProblemDocument(
                    code="read_only_role",
                    detail=f"role {session.role!r} cannot tune trust",
                ).model_dump(),
            )
        outcome = Outcome(feedback.outcome)
        updated = service.sources.apply_feedback(source_id, outcome)
        service._refresh_picture()
        service.bus.publish(
            {"type": "trust", "source_id": source_id, "trust": updated.trust}
        )
        return TrustUpdated(
            source_id=source_id,
            trust=updated.trust,
            confirmed=updated.confirmed,
            refuted=updated.refuted,
        )

    @app.post("/engagements")
    def post_engagement(
        request: EngagementRequest, session: Session = Depends(_session)
    ):
        if session.read_only:
            return JSONResponse(
                status_code=403,
                content=ProblemDocument(
                    code="read_only_role",
                    detail=f"role {session.role!r} cannot record engagements",
                ).model_dump(),
            )
        from pause.minai import Perceiver, PerceptionState, ProtectionStatus

        machine = PerceptionState(
            Perceiver.MACHINE,
            ProtectionStatus.parse(request.machine),
            tuple(request.machine_rationale) or ("machine assessment",),
        )
        case = resolve_engagement(
            request.truth, operator_state(request.operator), machine
        )
        payload = case.to_json_dict()
        service.bus.publish({"type": "engagement", **payload})
        return payload

    @app.post("/detections", response_model=PerceptionResponse)
    def post_detections(
        report: DetectionReport, session: Session = Depends(_session)
    ):
        if session.read_only:
            return JSONResponse(
                status_code=403,
                content=ProblemDocument(
                    code="read_only_role",
                    detail=f"role {session.role!r} cannot report detections",
                ).model_dump(),
            )
        classifier = require_verified(
            ScriptedClassifier.from_frame_dicts(report.frames)
        )
        detections = classifier.all_detections()
        machine = assess_protection(detections)
        result = cross_check(
            machine,
            detections,
            service._snapshot,
            report.location,
            service.cross_config,
        )
        for conflict in result.conflicts:
            service.bus.publish({"type": "conflict", **conflict.to_json_dict()})
        engagement_payload = None
        if report.operator is not None and report.truth is not None:
            case = resolve_engagement(
                report.truth, operator_state(report.operator), machine
            )
            engagement_payload = case.to_json_dict()
            service.bus.publish({"type": "engagement", **engagement_payload})
        return PerceptionResponse(
            assessment=machine.assessment.value,
            rationale=list(machine.rationale),
            conflicts=[c.to_json_dict() for c in result.conflicts],
            requires_review=result.requires_review,
            review_mode=result.review_mode,
            engagement=engagement_payload,
        )

    @app.post("/sync", response_model=SyncResponse)
    def post_sync(request: SyncRequest):
        foreign = [Block.from_json_dict(b) for b in request.blocks]
        report = verify_chain(foreign)
        if not report.ok:
            service.node.quarantined.add(request.node_id)
            service.node.incidents.append(
                f"peer {request.node_id} offered an invalid chain "
                f"(broken at {report.broken_at}: {report.reason}); quarantined"
            )
            raise InvalidPeerChain(
                f"chain from {request.node_id} broken at height {report.broken_at}"
            )
        with service._lock:
            absorbed = service.node.absorb_entries(
                e for b in foreign for e in b.entries
            )
            blocks = [b.to_json_dict() for b in service.node.chain]
        if absorbed:
            service.bus.publish({"type": "sync", "peer": request.node_id, "absorbed": absorbed})
            service._refresh_picture()
        return SyncResponse(
            node_id=service.config.node_id, blocks=blocks, absorbed=absorbed
        )

    @app.get("/events")
    def get_events(max_events: int = 0):
        subscriber = service.bus.subscribe()
        return StreamingResponse(
            service.bus.stream(subscriber, max_events=max_events),
            media_type="text/event-stream",
        )

    return app


def chain_digest(app: FastAPI) -> str:
    """Fingerprint of the node's committed state, for purity checks."""
    import hashlib

    service: NodeService = app.state.service
    return hashlib.sha256(chain_bytes(service.node.chain)).hexdigest()
