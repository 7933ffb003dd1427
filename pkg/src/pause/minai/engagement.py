"""Engagement outcome resolution.

The machine is a safety net, never a trigger: engagement proceeds only when
operator AND machine both assess NotProtected. The (truth, operator,
machine) outcome space ships as a machine-readable table in
``data/engagement_states.csv`` and is reproduced verbatim here.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from importlib import resources
from typing import Any

from pause.minai.detections import (
    Perceiver,
    PerceptionState,
    ProtectionStatus,
    operator_state,
)

PROTECTED = ProtectionStatus.PROTECTED
NOT_PROTECTED = ProtectionStatus.NOT_PROTECTED


def _load_table() -> dict[tuple[ProtectionStatus, ...], tuple[str, str]]:
    table: dict[tuple[ProtectionStatus, ...], tuple[str, str]] = {}
    with resources.files("pause.minai").joinpath("data/engagement_states.csv").open() as fh:
        for row in csv.DictReader(fh):
            key = (
                ProtectionStatus.parse(row["truth"]),
                ProtectionStatus.parse(row["operator"]),
                ProtectionStatus.parse(row["machine"]),
            )
            table[key] = (row["state"], row["consequence"])
    if len(table) != 8:
        raise RuntimeError(f"engagement table must have 8 rows, found {len(table)}")
    return table


OUTCOME_TABLE = _load_table()


@dataclass(frozen=True)
class EngagementCase:
    """One resolved engagement: all three perspectives plus the outcome."""

    truth: ProtectionStatus
    operator: PerceptionState
    machine: PerceptionState
    state: str
    consequence: str
    engaged: bool

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "truth": self.truth.value,
            "operator": self.operator.to_json_dict(),
            "machine": self.machine.to_json_dict(),
            "state": self.state,
            "consequence": self.consequence,
            "engaged": self.engaged,
        }


def resolve_engagement(
    truth: ProtectionStatus | str,
    operator: PerceptionState | ProtectionStatus | str,
    machine: PerceptionState | ProtectionStatus | str,
) -> EngagementCase:
    """Look up the outcome row for (truth, operator, machine)."""
    truth_status = ProtectionStatus.parse(truth)
    if not isinstance(operator, PerceptionState):
        operator = operator_state(operator)
    if not isinstance(machine, PerceptionState):
        machine = PerceptionState(
            Perceiver.MACHINE,
            ProtectionStatus.parse(machine),
            ("machine assessment",),
        )
    state, consequence = OUTCOME_TABLE[
        (truth_status, operator.assessment, machine.assessment)
    ]
    engaged = (
        operator.assessment is NOT_PROTECTED and machine.assessment is NOT_PROTECTED
    )
    return EngagementCase(
        truth=truth_status,
        operator=operator,
        machine=machine,
        state=state,
        consequence=consequence,
        engaged=engaged,
    )
