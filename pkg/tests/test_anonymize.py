"""Anonymization: pseudonymity, seeded determinism, and noise calibration."""

from __future__ import annotations

import random

import pytest

from pause.errors import DomainError, MissingGeometry
from pause.picture import anonymize, haversine_km, laplace_sample, pseudonym_for
from pause.wf import GeoShape, make_message
from tests.conftest import EPOCH


def _civilian_message(lat=47.1, lon=37.5):
    return make_message(
        originator_id="civ-7",
        category="S",
        subject="personal_beacon",
        timestamp=EPOCH.replace(hour=13, minute=22, second=41),
        geometry=GeoShape.of(lat, lon, 25),
    )


def test_identity_time_and_geometry_change_nothing_else():
    message = _civilian_message()
    blurred = anonymize(message, epsilon=1.0, rng=random.Random(1), pseudonym="anon-x")
    assert blurred.originator_id == "anon-x"
    assert blurred.category == message.category
    assert blurred.subject_code == message.subject_code
    assert blurred.reference_indicator == message.reference_indicator
    assert blurred.timestamp.minute == 0 and blurred.timestamp.second == 0
    assert blurred.timestamp.hour == 13
    assert blurred.geometry != message.geometry


def test_same_seed_same_output():
    message = _civilian_message()
    first = anonymize(message, 1.0, random.Random(42), "anon-x")
    second = anonymize(message, 1.0, random.Random(42), "anon-x")
    assert first == second


def test_requires_geometry_and_positive_epsilon():
    no_geo = make_message(
        originator_id="civ-7",
        category="F",
        subject=1,
        timestamp=EPOCH,
        payload_text="hello",
    )
    with pytest.raises(MissingGeometry):
        anonymize(no_geo, 1.0, random.Random(0), "anon-x")
    with pytest.raises(DomainError):
        anonymize(_civilian_message(), 0.0, random.Random(0), "anon-x")


def test_huge_epsilon_vanishing_perturbation():
    rng = random.Random(7)
    message = _civilian_message()
    for _ in range(1000):
        blurred = anonymize(message, 1e6, rng, "anon-x")
        displacement_km = haversine_km(
            (message.geometry.latitude, message.geometry.longitude),
            (blurred.geometry.latitude, blurred.geometry.longitude),
        )
        # Quantization alone is ~1e-5 deg ~ 1.5 m worst case; stay under 2 m.
        assert displacement_km < 0.002


def test_laplace_mean_absolute_displacement_matches_analytic():
    rng = random.Random(2027)
    epsilon = 1.0
    draws = 10_000
    total = sum(abs(laplace_sample(rng, 1.0 / epsilon)) for _ in range(draws))
    assert total / draws == pytest.approx(1.0 / epsilon, rel=0.1)


def test_pseudonyms_stable_per_scenario_unlinkable_across():
    assert pseudonym_for("civ-7", 42) == pseudonym_for("civ-7", 42)
    assert pseudonym_for("civ-7", 42) != pseudonym_for("civ-7", 43)
    assert pseudonym_for("civ-7", 42).startswith("anon-")
