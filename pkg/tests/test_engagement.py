"""Engagement outcome table: exact reproduction and the safety-net property."""

from __future__ import annotations

import csv
import itertools
from importlib import resources

import pytest

from pause.minai import (
    NOT_PROTECTED,
    OUTCOME_TABLE,
    PROTECTED,
    ProtectionStatus,
    resolve_engagement,
)


def _table_rows():
    with resources.files("pause.minai").joinpath("data/engagement_states.csv").open() as fh:
        return list(csv.DictReader(fh))


def test_machine_veto_row():
    case = resolve_engagement(PROTECTED, NOT_PROTECTED, PROTECTED)
    assert case.state == "Correct protection"
    assert case.consequence == "Protection achieved as machine prohibits engagement"
    assert not case.engaged


def test_unprotected_row():
    case = resolve_engagement(NOT_PROTECTED, NOT_PROTECTED, NOT_PROTECTED)
    assert case.state == "Unprotected"
    assert case.consequence == "Military objective achieved within IHL/ILAC-boundaries"
    assert case.engaged


def test_protection_fail_row():
    case = resolve_engagement(PROTECTED, NOT_PROTECTED, NOT_PROTECTED)
    assert case.state == "Protection fail"
    assert case.consequence == "Protection failure"
    assert case.engaged  # both perceived no protection; the tragedy case


def test_all_eight_rows_reproduced_exactly():
    rows = _table_rows()
    assert len(rows) == 8
    for row in rows:
        case = resolve_engagement(row["truth"], row["operator"], row["machine"])
        assert case.state == row["state"]
        assert case.consequence == row["consequence"]


def test_table_total_and_bijective_onto_rows():
    combos = list(itertools.product(ProtectionStatus, repeat=3))
    assert len(combos) == 8
    seen = set()
    for truth, operator, machine in combos:
        case = resolve_engagement(truth, operator, machine)
        seen.add((case.state, case.consequence))
        assert (truth, operator, machine) in OUTCOME_TABLE
    assert len(seen) == 8  # every input triple lands on its own row


def test_safety_net_machine_protected_never_engages():
    for truth, operator in itertools.product(ProtectionStatus, repeat=2):
        case = resolve_engagement(truth, operator, PROTECTED)
        assert not case.engaged
        assert "prohibits engagement" in case.consequence or case.state == "Correct protection" or case.state == "False protection"


def test_engagement_requires_both_to_clear():
    for truth in ProtectionStatus:
        assert resolve_engagement(truth, PROTECTED, NOT_PROTECTED).engaged is False
        assert resolve_engagement(truth, NOT_PROTECTED, PROTECTED).engaged is False
        assert resolve_engagement(truth, NOT_PROTECTED, NOT_PROTECTED).engaged is True


def test_string_inputs_accepted():
    case = resolve_engagement("Protected", "Not protected", "Protected")
    assert case.consequence == "Protection achieved as machine prohibits engagement"


def test_human_veto_row_keeps_trailing_period():
    # The committed table's wording is authoritative, punctuation included.
    case = resolve_engagement(PROTECTED, PROTECTED, NOT_PROTECTED)
    assert case.consequence == "Protection achieved as human prohibits machine to engage."
