"""Deterministic scenario engine and bundled vignettes."""

from pause.scenario.engine import (
    EPOCH,
    AssertionResult,
    RunResult,
    ScenarioEngine,
    render_report,
    replay,
    run,
)
from pause.scenario.events import EventLog
from pause.scenario.model import BUNDLED_NAMES, NodeRole, Scenario, ScenarioNode, bundled

__all__ = [
    "BUNDLED_NAMES",
    "EPOCH",
    "AssertionResult",
    "EventLog",
    "NodeRole",
    "RunResult",
    "Scenario",
    "ScenarioEngine",
    "ScenarioNode",
    "bundled",
    "render_report",
    "replay",
    "run",
]
