"""Scenario files: schema, validation, and bundled vignettes.

A scenario is JSON: nodes with roles, source profiles, link schedule, a
time-ordered event timeline, candidate routes, and end-of-run assertions.
Virtual time is integer ticks; all randomness flows from the single seed.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

from pause.errors import ScenarioError
from pause.picture.routes import RouteOption
from pause.picture.tracks import PictureConfig
from pause.trust.profiles import SourceProfile


class NodeRole(enum.Enum):
    MILITARY = "Military"
    HUMANITARIAN = "Humanitarian"
    CIVILIAN_RELAY = "CivilianRelay"
    ICRC = "ICRC"
    OBSERVER = "Observer"


#: Event types and the fields each requires.
_EVENT_REQUIRED: dict[str, tuple[str, ...]] = {
    "send_message": ("node", "source", "message"),
    "set_link": ("a", "b", "up"),
    "inject_detections": ("node", "frames", "location"),
    "operator_input": ("node", "truth", "operator"),
    "feedback": ("source", "outcome"),
    "query": ("node", "what"),
}

_ASSERTION_TYPES = {
    "track_count",
    "chosen_route",
    "conflict_raised",
    "evidence_in_ledger",
    "duress_flagged",
    "chains_converged",
    "no_engaged_outcome",
    "machine_protected",
    "track_exists",
    "tracks_traceable",
}


@dataclass(frozen=True)
class ScenarioNode:
    node_id: str
    role: NodeRole


@dataclass(frozen=True)
class TimelineEvent:
    at: int
    type: str
    params: dict[str, Any] = field(default_factory=dict)


@dataclass
class Scenario:
    name: str
    seed: int
    nodes: list[ScenarioNode]
    sources: list[SourceProfile]
    links: list[tuple[str, str, bool]]  # (a, b, initially up)
    routes: list[RouteOption]
    timeline: list[TimelineEvent]
    assertions: list[dict[str, Any]]
    config: PictureConfig
    block_size: int = 8
    report_node: str | None = None
    groups: dict[str, list[str]] = field(default_factory=dict)  # group -> member nodes
    raw: dict[str, Any] = field(default_factory=dict)

    def validate(self) -> None:
        node_ids = {n.node_id for n in self.nodes}
        if len(node_ids) != len(self.nodes):
            raise ScenarioError("duplicate node ids")
        source_ids = {s.source_id for s in self.sources}
        if self.report_node is not None and self.report_node not in node_ids:
            raise ScenarioError(f"report_node {self.report_node!r} is not a declared node")
        for a, b, _ in self.links:
            for end in (a, b):
                if end not in node_ids:
                    raise ScenarioError(f"link endpoint {end!r} is not a declared node")
        for group, members in self.groups.items():
            for member in members:
                if member not in node_ids:
                    raise ScenarioError(f"group {group!r} member {member!r} is not a node")
        last_at = None
        for index, event in enumerate(self.timeline):
            if event.type not in _EVENT_REQUIRED:
                raise ScenarioError(f"unknown event type {event.type!r}", event_index=index)
            if last_at is not None and event.at < last_at:
                raise ScenarioError(
                    f"timeline not time-ordered at tick {event.at}", event_index=index
                )
            last_at = event.at
            missing = [k for k in _EVENT_REQUIRED[event.type] if k not in event.params]
            if missing:
                raise ScenarioError(
                    f"{event.type} missing fields {missing}", event_index=index
                )
            for key in ("node", "a", "b"):
                value = event.params.get(key)
                if value is not None and value not in node_ids:
                    raise ScenarioError(
                        f"{event.type} references unknown node {value!r}",
                        event_index=index,
                    )
            if event.type in ("send_message", "feedback"):
                source = event.params.get("source")
                if source not in source_ids:
                    raise ScenarioError(
                        f"{event.type} references unknown source {source!r}",
                        event_index=index,
                    )
            group = event.params.get("group")
            if group is not None and group not in self.groups:
                raise ScenarioError(
                    f"send_message references unknown group {group!r}", event_index=index
                )
        for index, assertion in enumerate(self.assertions):
            if assertion.get("type") not in _ASSERTION_TYPES:
                raise ScenarioError(
                    f"unknown assertion type {assertion.get('type')!r} (assertion {index})"
                )

    @classmethod
    def from_json_dict(cls, data: dict[str, Any]) -> "Scenario":
        config_fields = dict(data.get("config", {}))
        block_size = int(config_fields.pop("block_size", 8))
        report_node = config_fields.pop("report_node", None)
        picture_config = PictureConfig(**config_fields)
        scenario = cls(
            name=str(data.get("name", "unnamed")),
            seed=int(data.get("seed", 0)),
            nodes=[
                ScenarioNode(node_id=n["id"], role=NodeRole(n.get("role", "Observer")))
                for n in data.get("nodes", [])
            ],
            sources=[SourceProfile.from_json_dict(s) for s in data.get("sources", [])],
            links=[
                (l["a"], l["b"], bool(l.get("up", True)))
                for l in data.get("links", [])
            ],
            routes=[RouteOption.from_json_dict(r) for r in data.get("routes", [])],
            timeline=[
                TimelineEvent(
                    at=int(e["at"]),
                    type=str(e["type"]),
                    params={k: v for k, v in e.items() if k not in ("at", "type")},
                )
                for e in data.get("timeline", [])
            ],
            assertions=list(data.get("assertions", [])),
            config=picture_config,
            block_size=block_size,
            report_node=report_node,
            groups={g: list(m) for g, m in data.get("groups", {}).items()},
            raw=data,
        )
        scenario.validate()
        return scenario

    @classmethod
    def load(cls, path: str | Path) -> "Scenario":
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"not valid JSON: {exc}") from None
        return cls.from_json_dict(data)


BUNDLED_NAMES = ("case1_mapping", "case2_routes", "case3_misinfo", "surrender_beacon")


def bundled(name: str) -> Scenario:
    if name not in BUNDLED_NAMES:
        raise ScenarioError(f"no bundled scenario {name!r}; have {BUNDLED_NAMES}")
    text = resources.files("pause.scenario").joinpath(f"bundled/{name}.json").read_text()
    return Scenario.from_json_dict(json.loads(text))
