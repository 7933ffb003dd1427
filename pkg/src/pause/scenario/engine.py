"""Discrete-event scenario execution.

Single-threaded event loop over integer virtual ticks; every node interaction
goes through the simulated link layer; all randomness comes from the seed.
Replaying the same (scenario, seed) reproduces the event log byte for byte.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Any

from pause.errors import InvalidPeerChain, PauseError, ScenarioError, UnknownDigest
from pause.ledger import LedgerNode, audit_trail, chain_bytes, save_chain, sync, verify_chain
from pause.ledger.entries import logical_messages
from pause.minai import (
    CrossCheckConfig,
    GateConfig,
    PerceptionState,
    ProtectionStatus,
    ScriptedClassifier,
    assess_protection,
    cross_check,
    operator_state,
    require_verified,
    resolve_engagement,
)
from pause.picture import (
    Decision,
    EntityTrack,
    RiskAssessment,
    anonymize,
    assess_routes,
    build_picture,
    decision_support,
    evidence_threshold,
    pseudonym_for,
    tracks_to_geojson,
)
from pause.scenario.events import EventLog
from pause.scenario.model import NodeRole, Scenario, TimelineEvent
from pause.trust import Outcome, SourceProfile, SourceRegistry
from pause.wf import (
    GeoShape,
    GroupKeyring,
    KeyRegistry,
    RefIndicator,
    derive_keypair,
    make_message,
    seal,
)

EPOCH = datetime(2030, 1, 1, tzinfo=timezone.utc)


@dataclass
class AssertionResult:
    assertion: dict[str, Any]
    ok: bool
    detail: str

    def to_json_dict(self) -> dict[str, Any]:
        return {"assertion": self.assertion, "ok": self.ok, "detail": self.detail}


@dataclass
class RunResult:
    scenario: Scenario
    seed: int
    log: EventLog
    nodes: dict[str, LedgerNode]
    report_node: str
    picture: list[EntityTrack]
    route_assessment: RiskAssessment | None
    assertion_results: list[AssertionResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.assertion_results)

    def write_outputs(self, out_dir: str | Path) -> None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "events.jsonl").write_bytes(self.log.to_jsonl())
        import json

        routes = self.scenario.routes
        (out / "picture.geojson").write_text(
            json.dumps(tracks_to_geojson(self.picture, routes), indent=2, sort_keys=True)
        )
        (out / "report.md").write_text(render_report(self))
        save_chain(self.nodes[self.report_node].chain, out / "ledger")


class ScenarioEngine:
    def __init__(self, scenario: Scenario, seed: int | None = None):
        scenario.validate()
        self.scenario = scenario
        self.seed = scenario.seed if seed is None else seed
        self.rng = random.Random(f"{self.seed}:anonymity")
        self.now = 0
        self.log = EventLog()
        self.gate_config = GateConfig()
        self.cross_config = CrossCheckConfig(gate=self.gate_config)

        self.registry = KeyRegistry()  # originators: sources, nodes, pseudonyms
        self.source_keys = {
            s.source_id: derive_keypair(f"source:{s.source_id}", self.seed)
            for s in scenario.sources
        }
        for source_id, keypair in self.source_keys.items():
            self.registry.register(source_id, keypair.public_key)

        self.sources = SourceRegistry(scenario.sources)
        self.node_registry = KeyRegistry()
        self.nodes: dict[str, LedgerNode] = {}
        self.roles: dict[str, NodeRole] = {}
        for node in scenario.nodes:
            keypair = derive_keypair(f"node:{node.node_id}", self.seed)
            self.node_registry.register(node.node_id, keypair.public_key)
            self.registry.register(node.node_id, keypair.public_key)
            self.nodes[node.node_id] = LedgerNode(
                node.node_id,
                keypair,
                self.registry,
                clock=self._clock,
                block_size=scenario.block_size,
            )
            self.roles[node.node_id] = node.role
        for a, b, up in scenario.links:
            self.nodes[a].set_link(b, up)
            self.nodes[b].set_link(a, up)

        # Trusted-subgroup key material, per member node.
        self.keyrings: dict[str, GroupKeyring] = {
            nid: GroupKeyring() for nid in self.nodes
        }
        self.group_keyring = GroupKeyring.derive(sorted(scenario.groups), self.seed)
        for group, members in scenario.groups.items():
            for member in members:
                self.keyrings[member].add(group, self.group_keyring.get(group))

        self.named_digests: dict[str, str] = {}
        self.pseudonym_keys: dict[str, Any] = {}
        self.last_percept: dict[str, PerceptionState] = {}
        self.route_assessment: RiskAssessment | None = None

    # -- plumbing ----------------------------------------------------------

    def _clock(self) -> datetime:
        return EPOCH + timedelta(seconds=self.now)

    def _record(self, record: dict[str, Any]) -> dict[str, Any]:
        return self.log.append({"at": self.now, **record})

    def _live_peers(self, node_id: str) -> list[str]:
        node = self.nodes[node_id]
        return sorted(p for p in node.peer_set if node.link_up(p))

    def _flood(self, origin: str, envelope) -> None:
        """Deliver to every node reachable over currently-up links."""
        visited: set[str] = set()
        queue = [origin]
        while queue:
            current = queue.pop(0)
            if current in visited:
                continue
            visited.add(current)
            entry = self.nodes[current].append(envelope)
            self._record(
                {
                    "type": "append",
                    "node": current,
                    "digest": envelope.digest,
                    "entry_id": entry.entry_id,
                    "origin": current == origin,
                }
            )
            queue.extend(p for p in self._live_peers(current) if p not in visited)
        # Receipts are ledger entries too: gossip them while links are up.
        self._resync_all()

    def _resync_all(self) -> None:
        """Pairwise-sync along every up link until the network is stable."""
        changed = True
        while changed:
            changed = False
            for a in sorted(self.nodes):
                for b in self._live_peers(a):
                    if a >= b:
                        continue
                    left, right = self.nodes[a], self.nodes[b]
                    if left.entry_count == right.entry_count and chain_bytes(
                        left.chain
                    ) == chain_bytes(right.chain):
                        continue
                    try:
                        sync(left, right)
                        changed = True
                        self._record(
                            {
                                "type": "sync",
                                "a": a,
                                "b": b,
                                "height": len(left.chain) - 1 if left.chain else None,
                                "tip": left.chain[-1].block_hash if left.chain else None,
                            }
                        )
                    except InvalidPeerChain as exc:
                        self._record(
                            {"type": "sync_refused", "a": a, "b": b, "reason": str(exc)}
                        )
        for node in self.nodes.values():
            assert verify_chain(node.chain).ok

    def _picture_for(self, node_id: str) -> list[EntityTrack]:
        return build_picture(
            self.nodes[node_id].chain,
            self.sources,
            self.scenario.config,
            keyring=self.keyrings[node_id],
        )

    # -- event handlers ------------------------------------------------------

    def _resolve_ref(self, params: dict[str, Any]) -> str | None:
        ref = params.get("ref")
        if ref is None:
            return params.get("referenced_hash")
        if ref in self.named_digests:
            return self.named_digests[ref]
        if len(str(ref)) == 64:
            return str(ref)
        raise ScenarioError(f"unknown message reference {ref!r}")

    def _handle_send_message(self, params: dict[str, Any]) -> None:
        spec = dict(params["message"])
        source_id = params["source"]
        profile = self.sources.get(source_id)
        geometry = spec.get("geometry")
        if isinstance(geometry, (list, tuple)):
            geometry = GeoShape.of(*geometry)
        elif isinstance(geometry, dict):
            geometry = GeoShape.of(
                geometry["latitude"], geometry["longitude"], geometry.get("radius_m", 0.0)
            )
        referenced = self._resolve_ref(spec)
        message = make_message(
            originator_id=source_id,
            category=spec["category"],
            subject=spec.get("subject", spec.get("subject_code", 1)),
            timestamp=self._clock(),
            reference_indicator=spec.get("reference_indicator", "New"),
            referenced_hash=referenced,
            duration=spec.get("duration"),
            geometry=geometry,
            payload_text=spec.get("payload_text"),
        )

        signer = self.source_keys[source_id]
        if profile.civilian:
            pseudonym = pseudonym_for(source_id, self.seed)
            message = anonymize(
                message, self.scenario.config.epsilon, self.rng, pseudonym
            )
            if pseudonym not in self.pseudonym_keys:
                keypair = derive_keypair(f"pseudonym:{pseudonym}", self.seed)
                self.pseudonym_keys[pseudonym] = keypair
                self.registry.register(pseudonym, keypair.public_key)
                self.sources.add(
                    SourceProfile(
                        pseudonym,
                        attributes={
                            "organisation": "anonymous",
                            "report_latitude": message.geometry.latitude,
                            "report_longitude": message.geometry.longitude,
                            "report_hour": message.timestamp.hour,
                        },
                        civilian=True,
                    )
                )
            signer = self.pseudonym_keys[pseudonym]
            self._record({"type": "anonymized", "pseudonym": pseudonym})

        group = params.get("group")
        envelope = seal(
            message,
            signer,
            group_id=group,
            keyring=self.group_keyring if group else None,
        )
        if "name" in params:
            self.named_digests[params["name"]] = envelope.digest
        self._flood(params["node"], envelope)

    def _handle_set_link(self, params: dict[str, Any]) -> None:
        a, b, up = params["a"], params["b"], bool(params["up"])
        self.nodes[a].set_link(b, up)
        self.nodes[b].set_link(a, up)
        self._record({"type": "link", "a": a, "b": b, "up": up})
        if up:
            # Telecommunications restored: ledgers re-synchronize on their own.
            self._resync_all()

    def _append_evidence(self, node_id: str, conflict, location) -> str:
        reference = conflict.related_digest
        message = make_message(
            originator_id=node_id,
            category="F",
            subject=1,
            timestamp=self._clock(),
            reference_indicator="Acknowledge" if reference else "New",
            referenced_hash=reference,
            geometry=GeoShape.of(location[0], location[1], 0.0),
            payload_text=f"conflict:{conflict.code} {conflict.reason}",
        )
        envelope = seal(message, self.nodes[node_id].keypair)
        self._flood(node_id, envelope)
        return envelope.digest

    def _handle_inject_detections(self, params: dict[str, Any]) -> None:
        node_id = params["node"]
        classifier = require_verified(
            ScriptedClassifier.from_frame_dicts(params["frames"])
        )
        detections = classifier.all_detections()
        machine = assess_protection(detections, self.gate_config)
        self.last_percept[node_id] = machine
        location = tuple(float(c) for c in params["location"])
        self._record(
            {
                "type": "perception",
                "node": node_id,
                "location": list(location),
                **machine.to_json_dict(),
            }
        )
        picture = self._picture_for(node_id)
        result = cross_check(machine, detections, picture, location, self.cross_config)
        for conflict in result.conflicts:
            evidence_digest = self._append_evidence(node_id, conflict, location)
            self._record(
                {
                    "type": "conflict",
                    "node": node_id,
                    "evidence_digest": evidence_digest,
                    "review_mode": result.review_mode,
                    **conflict.to_json_dict(),
                }
            )
        if "operator" in params:
            self._resolve_engagement(node_id, params["truth"], params["operator"], machine)

    def _resolve_engagement(
        self,
        node_id: str,
        truth: str,
        operator: str,
        machine: PerceptionState | str,
    ) -> None:
        case = resolve_engagement(truth, operator_state(operator), machine)
        self._record({"type": "engagement", "node": node_id, **case.to_json_dict()})

    def _handle_operator_input(self, params: dict[str, Any]) -> None:
        node_id = params["node"]
        machine = params.get("machine")
        if machine is None:
            if node_id not in self.last_percept:
                raise ScenarioError(
                    f"operator_input at node {node_id!r} with no machine percept yet"
                )
            machine = self.last_percept[node_id]
        self._resolve_engagement(node_id, params["truth"], params["operator"], machine)

    def _handle_feedback(self, params: dict[str, Any]) -> None:
        outcome = Outcome(params["outcome"])
        updated = self.sources.apply_feedback(params["source"], outcome)
        self._record(
            {
                "type": "feedback",
                "source": params["source"],
                "outcome": outcome.value,
                "trust": updated.trust,
            }
        )

    def _handle_query(self, params: dict[str, Any]) -> None:
        node_id = params["node"]
        what = params["what"]
        if what == "picture":
            picture = self._picture_for(node_id)
            self._record(
                {
                    "type": "picture",
                    "node": node_id,
                    "tracks": [t.to_json_dict() for t in picture],
                }
            )
        elif what == "routes":
            picture = self._picture_for(node_id)
            assessment = assess_routes(
                self.scenario.routes, picture, self.scenario.config
            )
            self.route_assessment = assessment
            self._record(
                {
                    "type": "route_assessment",
                    "node": node_id,
                    **assessment.to_json_dict(),
                }
            )
        elif what == "decision":
            picture = self._picture_for(node_id)
            track = self._find_track(picture, params)
            risks = (
                float(params.get("risk_of_inaction", 1.0)),
                float(params.get("risk_of_action", 1.0)),
            )
            decision = decision_support(
                track.opinion, *risks, u_max=self.scenario.config.u_max
            )
            self._record(
                {
                    "type": "decision",
                    "node": node_id,
                    "track_id": track.track_id,
                    "decision": decision.value,
                    "expectation": track.opinion.expectation,
                    "uncertainty": track.opinion.u,
                    "threshold": evidence_threshold(*risks),
                }
            )
        elif what == "audit":
            digest = self._resolve_ref(params)
            if digest is None:
                raise ScenarioError("audit query needs a ref or referenced_hash")
            try:
                events = audit_trail(self.nodes[node_id].chain, digest)
                payload = [e.to_json_dict() for e in events]
            except UnknownDigest:
                payload = []
            self._record({"type": "audit", "node": node_id, "digest": digest, "events": payload})
        else:
            raise ScenarioError(f"unknown query {what!r}")

    @staticmethod
    def _find_track(picture: list[EntityTrack], params: dict[str, Any]) -> EntityTrack:
        track_id = params.get("track_id")
        kind = params.get("kind")
        for track in picture:
            if track_id is not None and track.track_id == track_id:
                return track
            if track_id is None and (kind is None or track.kind.value == kind):
                return track
        raise ScenarioError(f"no track matches {params!r}")

    # -- run -----------------------------------------------------------------

    _HANDLERS = {
        "send_message": _handle_send_message,
        "set_link": _handle_set_link,
        "inject_detections": _handle_inject_detections,
        "operator_input": _handle_operator_input,
        "feedback": _handle_feedback,
        "query": _handle_query,
    }

    def run(self) -> RunResult:
        self.log.append(
            {
                "type": "run_header",
                "name": self.scenario.name,
                "seed": self.seed,
                "scenario": self.scenario.raw,
            }
        )
        for index, event in enumerate(self.scenario.timeline):
            self.now = event.at
            try:
                self._HANDLERS[event.type](self, event.params)
            except PauseError as exc:
                if isinstance(exc, ScenarioError) and exc.event_index is None:
                    exc.event_index = index
                raise
        report_node = self.scenario.report_node or self.scenario.nodes[0].node_id
        picture = self._picture_for(report_node)
        result = RunResult(
            scenario=self.scenario,
            seed=self.seed,
            log=self.log,
            nodes=self.nodes,
            report_node=report_node,
            picture=picture,
            route_assessment=self.route_assessment,
        )
        result.assertion_results = [
            self._evaluate_assertion(a, result) for a in self.scenario.assertions
        ]
        for outcome in result.assertion_results:
            self.log.append({"type": "assertion", **outcome.to_json_dict()})
        return result

    # -- assertions ------------------------------------------------------------

    def _evaluate_assertion(
        self, assertion: dict[str, Any], result: RunResult
    ) -> AssertionResult:
        kind = assertion["type"]
        picture = result.picture

        if kind == "track_count":
            tracks = [
                t
                for t in picture
                if assertion.get("kind") is None or t.kind.value == assertion["kind"]
            ]
            ok = len(tracks) == int(assertion["count"])
            return AssertionResult(assertion, ok, f"found {len(tracks)} tracks")

        if kind == "track_exists":
            matches = [
                t
                for t in picture
                if (assertion.get("kind") is None or t.kind.value == assertion["kind"])
                and (assertion.get("subject") is None or t.subject == assertion["subject"])
            ]
            return AssertionResult(assertion, bool(matches), f"found {len(matches)}")

        if kind == "chosen_route":
            if self.route_assessment is None:
                return AssertionResult(assertion, False, "no route assessment was run")
            chosen = self.route_assessment.chosen
            return AssertionResult(
                assertion, chosen == assertion["route_id"], f"chose {chosen}"
            )

        if kind == "conflict_raised":
            codes = [r["code"] for r in self.log.records("conflict")]
            ok = assertion["code"] in codes
            return AssertionResult(assertion, ok, f"raised {sorted(set(codes))}")

        if kind == "evidence_in_ledger":
            chain = result.nodes[result.report_node].chain
            found: dict[str, bool] = {}
            for code in assertion["codes"]:
                prefix = f"conflict:{code}"
                match = None
                for entry in logical_messages(chain):
                    if entry.envelope.is_encrypted:
                        continue
                    message = entry.envelope.message
                    if message.payload_text and message.payload_text.startswith(prefix):
                        match = entry.envelope.digest
                        break
                if match is None:
                    found[code] = False
                    continue
                trail = audit_trail(chain, match)
                found[code] = any(e.event == "receipt" for e in trail)
            return AssertionResult(assertion, all(found.values()), f"evidence: {found}")

        if kind == "duress_flagged":
            flagged = [t.track_id for t in picture if t.status.value == "UnderDuress"]
            return AssertionResult(assertion, bool(flagged), f"duress tracks: {flagged}")

        if kind == "chains_converged":
            blobs = {chain_bytes(n.chain) for n in result.nodes.values()}
            return AssertionResult(
                assertion, len(blobs) == 1, f"{len(blobs)} distinct chains"
            )

        if kind == "no_engaged_outcome":
            engaged = [
                r for r in self.log.records("engagement") if r.get("engaged")
            ]
            return AssertionResult(assertion, not engaged, f"{len(engaged)} engaged")

        if kind == "machine_protected":
            percepts = self.log.records("perception")
            ok = bool(percepts) and percepts[-1]["assessment"] == "Protected"
            return AssertionResult(
                assertion,
                ok,
                percepts[-1]["assessment"] if percepts else "no percepts",
            )

        if kind == "tracks_traceable":
            chain = result.nodes[result.report_node].chain
            digests = {e.envelope.digest for b in chain for e in b.entries}
            missing = [
                d for t in picture for d in t.contributing if d not in digests
            ]
            rebuilt = build_picture(
                chain,
                self.sources,
                self.scenario.config,
                keyring=self.keyrings[result.report_node],
            )
            identical = [t.to_json_dict() for t in rebuilt] == [
                t.to_json_dict() for t in picture
            ]
            ok = not missing and identical
            return AssertionResult(
                assertion, ok, f"missing={missing}, rebuild_identical={identical}"
            )

        raise ScenarioError(f"unknown assertion type {kind!r}")


def run(scenario: Scenario, seed: int | None = None) -> RunResult:
    return ScenarioEngine(scenario, seed=seed).run()


def replay(events_jsonl: bytes | str) -> tuple[bool, str]:
    """Re-run the embedded scenario and compare logs byte for byte."""
    records = EventLog.parse_jsonl(events_jsonl)
    if not records or records[0].get("type") != "run_header":
        raise ScenarioError("event log has no run_header record")
    header = records[0]
    scenario = Scenario.from_json_dict(header["scenario"])
    result = run(scenario, seed=header["seed"])
    fresh = result.log.to_jsonl()
    original = (
        events_jsonl if isinstance(events_jsonl, bytes) else events_jsonl.encode("utf-8")
    )
    if fresh == original:
        return True, "replay reproduced the event log byte-identically"
    fresh_lines = fresh.decode("utf-8").splitlines()
    original_lines = original.decode("utf-8").splitlines()
    for i, (a, b) in enumerate(zip(original_lines, fresh_lines)):
        if a != b:
            return False, f"first divergence at record {i}"
    return False, f"length mismatch: {len(original_lines)} vs {len(fresh_lines)} records"


def render_report(result: RunResult) -> str:
    lines = [
        f"# Scenario report: {result.scenario.name}",
        "",
        f"* seed: {result.seed}",
        f"* report node: {result.report_node}",
        f"* events: {len(result.log)}",
        f"* assertions: {'PASS' if result.ok else 'FAIL'}",
        "",
        "## Tracks",
        "",
        "| track | kind | subject | E | u | status |",
        "|-------|------|---------|---|---|--------|",
    ]
    for track in result.picture:
        lines.append(
            f"| {track.track_id} | {track.kind.value} | {track.subject} "
            f"| {track.opinion.expectation:.3f} | {track.opinion.u:.3f} "
            f"| {track.status.value} |"
        )
    if result.route_assessment is not None:
        lines += ["", "## Route assessment", ""]
        for route_id in sorted(result.route_assessment.scores):
            score = result.route_assessment.scores[route_id]
            marker = " (chosen)" if route_id == result.route_assessment.chosen else ""
            lines.append(f"* route {route_id}: risk {score:.6f}{marker}")
    conflicts = result.log.records("conflict")
    if conflicts:
        lines += ["", "## Conflicts", ""]
        for record in conflicts:
            lines.append(f"* {record['code']}: {record['reason']}")
    engagements = result.log.records("engagement")
    if engagements:
        lines += ["", "## Engagements", ""]
        for record in engagements:
            lines.append(
                f"* truth={record['truth']} operator={record['operator']['assessment']} "
                f"machine={record['machine']['assessment']} -> {record['state']} "
                f"({record['consequence']})"
            )
    lines += ["", "## Assertions", ""]
    for outcome in result.assertion_results:
        status = "PASS" if outcome.ok else "FAIL"
        lines.append(f"* {status}: {outcome.assertion} ({outcome.detail})")
    return "\n".join(lines) + "\n"
