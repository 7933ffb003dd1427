"""Shared fixtures, strategies, and the acceptance summary hook."""

from __future__ import annotations

import json
from datetime import datetime, timedelta, timezone
from pathlib import Path

import pytest
from hypothesis import strategies as st

from pause.wf import (
    SUBJECT_CODES,
    GeoShape,
    KeyPair,
    KeyRegistry,
    MessageCategory,
    RefIndicator,
    WfMessage,
    derive_keypair,
)
from pause.wf.messages import DURESS_CATEGORIES, PAYLOAD_CATEGORIES

FIXTURES_DIR = Path(__file__).resolve().parent.parent / "fixtures" / "messages"

EPOCH = datetime(2030, 1, 1, tzinfo=timezone.utc)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Print one PASS/FAIL line per acceptance criterion."""
    try:
        from tests.test_acceptance import CRITERIA
    except ImportError:
        return
    reports = []
    for status in ("passed", "failed", "error"):
        reports.extend(terminalreporter.stats.get(status, []))
    lines = []
    for key in sorted(CRITERIA):
        for report in reports:
            test_name = report.nodeid.split("::")[-1]
            if "test_acceptance" in report.nodeid and test_name.startswith(key):
                verdict = "PASS" if report.passed else "FAIL"
                lines.append(f"{verdict}  {CRITERIA[key]}")
                break
    if lines:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


def load_fixture(name: str) -> dict:
    return json.loads((FIXTURES_DIR / f"{name}.json").read_text())


def all_fixture_names() -> list[str]:
    return sorted(p.stem for p in FIXTURES_DIR.glob("*.json"))


@pytest.fixture
def registry() -> KeyRegistry:
    return KeyRegistry()


def register_keypair(registry: KeyRegistry, originator: str, seed: int = 7) -> KeyPair:
    keypair = derive_keypair(originator, seed)
    registry.register(originator, keypair.public_key)
    return keypair


def ticking_clock(start: datetime = EPOCH, step_s: int = 1):
    """A deterministic clock that advances by ``step_s`` per call."""
    state = {"now": start}

    def clock() -> datetime:
        current = state["now"]
        state["now"] = current + timedelta(seconds=step_s)
        return current

    return clock


# ---------------------------------------------------------------------------
# Hypothesis strategies
# ---------------------------------------------------------------------------

_identifier = st.text(
    alphabet=st.characters(min_codepoint=0x21, max_codepoint=0x7E),
    min_size=1,
    max_size=16,
)

_payload = st.text(
    alphabet=st.characters(blacklist_characters="\x1f", blacklist_categories=("Cs",)),
    min_size=1,
    max_size=60,
)

_hex_digest = st.text(alphabet="0123456789abcdef", min_size=64, max_size=64)

_timestamps = st.datetimes(
    min_value=datetime(2020, 1, 1),
    max_value=datetime(2039, 12, 31),
    timezones=st.just(timezone.utc),
).map(lambda dt: dt.replace(microsecond=0))

_geometries = st.one_of(
    st.none(),
    st.builds(
        GeoShape.of,
        latitude=st.floats(min_value=-90, max_value=90, allow_nan=False),
        longitude=st.floats(min_value=-180, max_value=180, allow_nan=False),
        radius_m=st.floats(min_value=0, max_value=50_000, allow_nan=False),
    ),
)


@st.composite
def wf_messages(draw) -> WfMessage:
    """Any valid message, all categories and reference kinds."""
    category = draw(st.sampled_from(list(MessageCategory)))
    legal_indicators = [
        RefIndicator.NEW,
        RefIndicator.UPDATE,
        RefIndicator.CANCEL,
        RefIndicator.ACKNOWLEDGE,
    ]
    if category in DURESS_CATEGORIES:
        legal_indicators.append(RefIndicator.DURESS)
    indicator = draw(st.sampled_from(legal_indicators))
    message = WfMessage(
        version=draw(st.integers(min_value=1, max_value=99)),
        originator_id=draw(_identifier),
        category=category,
        subject_code=draw(st.sampled_from(sorted(SUBJECT_CODES[category]))),
        reference_indicator=indicator,
        referenced_hash=None if indicator is RefIndicator.NEW else draw(_hex_digest),
        timestamp=draw(_timestamps),
        duration=draw(st.one_of(st.none(), st.integers(min_value=0, max_value=10**6))),
        geometry=draw(_geometries),
        payload_text=draw(_payload) if category in PAYLOAD_CATEGORIES else None,
    )
    message.validate()
    return message


@st.composite
def opinions(draw, min_u: float = 0.0, max_u: float = 1.0, base_rate: float | None = None):
    """Valid opinions: draw (b, d) from the simplex, u is the remainder."""
    from pause.trust import Opinion

    b = draw(st.floats(min_value=0.0, max_value=1.0, allow_nan=False))
    d = draw(st.floats(min_value=0.0, max_value=1.0 - b, allow_nan=False))
    u = max(0.0, 1.0 - b - d)
    if not min_u <= u <= max_u:
        # Rescale b+d so that u lands inside the requested band.
        target_u = draw(st.floats(min_value=min_u, max_value=max_u, allow_nan=False))
        scale = (1.0 - target_u) / (b + d) if (b + d) > 0 else 0.0
        b, d, u = b * scale, d * scale, target_u
        d = max(0.0, 1.0 - b - u)
    a = draw(st.floats(min_value=0.0, max_value=1.0, allow_nan=False)) if base_rate is None else base_rate
    return Opinion(b=b, d=d, u=u, a=a)
