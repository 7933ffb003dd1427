"""Acceptance gate: one test per criterion, at the stated tolerances and
time budgets. A summary line per criterion prints at the end of the run
(hook in conftest)."""

from __future__ import annotations

import itertools
import json
import random
import time
from datetime import timedelta

import pytest

from pause.ledger import (
    build_chain,
    chain_bytes,
    load_chain,
    save_chain,
    sync,
    verify_chain_dir,
)
from pause.minai import OUTCOME_TABLE, ProtectionStatus, resolve_engagement
from pause.picture import anonymize, build_picture
from pause.picture.geo import KM_PER_DEG_LAT, km_to_deg_lon
from pause.scenario import bundled, run
from pause.trust import (
    DiversityModel,
    Opinion,
    Report,
    SourceProfile,
    discount,
    fuse_averaging,
    fuse_cumulative,
    fuse_hypothesis,
)
from pause.wf import (
    SUBJECT_CODES,
    GeoShape,
    KeyRegistry,
    MessageCategory,
    WfMessage,
    decode,
    digest,
    encode,
    make_message,
)
from tests.conftest import EPOCH
from tests.test_ledger import make_node, sealed_message
from tests.test_routes import _oracle_risk

TOL = 1e-9

CRITERIA = {
    "test_c01": "1. engagement outcome table reproduced exactly (8/8 rows)",
    "test_c02": "2. safety net: machine=Protected never yields an engaged outcome",
    "test_c03": "3. codec round-trip + digest determinism over 10^4 messages",
    "test_c04": "4. tamper evidence: 500+ single-byte chain mutations all detected",
    "test_c05": "5. partition convergence: exhaustive 3-node + 100 seeded 5-node",
    "test_c06": "6. collusion resistance: duplicates count once, diversity compounds",
    "test_c07": "7. fusion algebra properties over 10^4 randomized cases",
    "test_c08": "8. resupply vignette chooses route B; oracle agrees to 1e-9",
    "test_c09": "9. misinformation vignette raises C1+C3 with ledgered evidence",
    "test_c10": "10. mapping vignette picture rebuilds byte-identically from chain",
    "test_c11": "11. anonymization noise calibrated and seed-deterministic",
}


class Budget:
    def __init__(self, seconds: float):
        self.seconds = seconds
        self.start = time.perf_counter()

    def check(self):
        elapsed = time.perf_counter() - self.start
        assert elapsed < self.seconds, f"budget {self.seconds}s exceeded: {elapsed:.2f}s"


# -- criterion 1 ---------------------------------------------------------------


def test_c01_engagement_table_exact():
    budget = Budget(1.0)
    expected = {
        ("Protected", "Protected", "Protected"): ("Correct protection", "Protection achieved"),
        ("Protected", "Protected", "NotProtected"): (
            "Correct protection",
            "Protection achieved as human prohibits machine to engage.",
        ),
        ("Protected", "NotProtected", "Protected"): (
            "Correct protection",
            "Protection achieved as machine prohibits engagement",
        ),
        ("Protected", "NotProtected", "NotProtected"): ("Protection fail", "Protection failure"),
        ("NotProtected", "Protected", "Protected"): (
            "False protection",
            "Military objective not achieved",
        ),
        ("NotProtected", "Protected", "NotProtected"): (
            "False protection",
            "Military objective not achieved as human prohibits machine to engage",
        ),
        ("NotProtected", "NotProtected", "Protected"): (
            "False protection",
            "Military objective not achieved as machine prohibits engagement",
        ),
        ("NotProtected", "NotProtected", "NotProtected"): (
            "Unprotected",
            "Military objective achieved within IHL/ILAC-boundaries",
        ),
    }
    assert len(OUTCOME_TABLE) == 8
    for (truth, operator, machine), (state, consequence) in expected.items():
        case = resolve_engagement(truth, operator, machine)
        assert case.state == state, (truth, operator, machine)
        assert case.consequence == consequence, (truth, operator, machine)
    budget.check()


# -- criterion 2 ---------------------------------------------------------------


def test_c02_safety_net_exhaustive():
    budget = Budget(1.0)
    for truth, operator in itertools.product(ProtectionStatus, repeat=2):
        case = resolve_engagement(truth, operator, ProtectionStatus.PROTECTED)
        assert case.engaged is False, (truth, operator)
    budget.check()


# -- criterion 3 ---------------------------------------------------------------


def _random_message(rng: random.Random) -> WfMessage:
    category = rng.choice(list(MessageCategory))
    payload = None
    if category in (MessageCategory.RESOURCE_MESSAGE, MessageCategory.FREE_TEXT):
        payload = "p" + "".join(rng.choice("abcdef ghij") for _ in range(rng.randrange(0, 30)))
    geometry = None
    if rng.random() < 0.8:
        geometry = GeoShape.of(
            rng.uniform(-90, 90), rng.uniform(-180, 180), rng.uniform(0, 10_000)
        )
    return make_message(
        originator_id=f"src-{rng.randrange(1000)}",
        category=category,
        subject=rng.choice(sorted(SUBJECT_CODES[category])),
        timestamp=EPOCH + timedelta(seconds=rng.randrange(10**8)),
        version=rng.randrange(1, 99),
        duration=None if rng.random() < 0.5 else rng.randrange(0, 10**6),
        geometry=geometry,
        payload_text=payload,
    )


def test_c03_round_trip_and_digest_determinism():
    budget = Budget(10.0)
    rng = random.Random(30_001)
    import dataclasses

    failures = 0
    for _ in range(10_000):
        message = _random_message(rng)
        if decode(encode(message)) != message:
            failures += 1
    assert failures == 0

    # Single-field mutations always move the digest.
    for _ in range(400):
        message = _random_message(rng)
        base = digest(message)
        mutants = [
            dataclasses.replace(message, version=message.version + 1),
            dataclasses.replace(message, originator_id=message.originator_id + "x"),
            dataclasses.replace(
                message, timestamp=message.timestamp + timedelta(seconds=1)
            ),
            dataclasses.replace(
                message, duration=1 if message.duration is None else message.duration + 1
            ),
            dataclasses.replace(
                message,
                geometry=GeoShape.of(1.0, 2.0, 3.0)
                if message.geometry is None
                else GeoShape.of(
                    -message.geometry.latitude * 0.9 + 1.0,
                    message.geometry.longitude,
                    message.geometry.radius_m,
                ),
            ),
        ]
        if message.payload_text is not None:
            mutants.append(
                dataclasses.replace(message, payload_text=message.payload_text + "!")
            )
        for mutant in mutants:
            mutant.validate()
            assert digest(mutant) != base
        # Determinism: an identical copy hashes identically.
        assert digest(dataclasses.replace(message)) == base
    budget.check()


# -- criterion 4 ---------------------------------------------------------------


def test_c04_tamper_evidence_byte_level(tmp_path, registry):
    budget = Budget(10.0)
    node = make_node("n1", registry, block_size=8)
    for i in range(80):
        node.append(sealed_message(registry, i))
    chain = node.chain
    assert len(chain) == 10
    chain_dir = tmp_path / "chain"
    save_chain(chain, chain_dir)
    assert verify_chain_dir(chain_dir).ok

    files = {
        int(p.stem): bytearray(p.read_bytes()) for p in sorted(chain_dir.glob("*.json"))
    }
    rng = random.Random(40_004)
    detected = 0
    trials = 520
    for _ in range(trials):
        height = rng.randrange(10)
        original = bytes(files[height])
        position = rng.randrange(len(original))
        replacement = rng.randrange(256)
        while replacement == original[position]:
            replacement = rng.randrange(256)
        mutated = bytearray(original)
        mutated[position] = replacement
        path = chain_dir / f"{height:08d}.json"
        path.write_bytes(bytes(mutated))
        report = verify_chain_dir(chain_dir)
        assert not report.ok, f"mutation at block {height} byte {position} undetected"
        assert report.broken_at == height, (
            f"mutation at block {height} byte {position} "
            f"reported at {report.broken_at}"
        )
        detected += 1
        path.write_bytes(original)
    assert detected == trials
    assert verify_chain_dir(chain_dir).ok
    budget.check()


# -- criterion 5 ---------------------------------------------------------------


def _partitions_of_three():
    return [
        ({"na", "nb", "nc"},),
        ({"na", "nb"}, {"nc"}),
        ({"na", "nc"}, {"nb"}),
        ({"nb", "nc"}, {"na"}),
        ({"na"}, {"nb"}, {"nc"}),
    ]


def test_c05_partition_convergence(registry):
    budget = Budget(60.0)
    node_ids = ["na", "nb", "nc"]
    pairs = [("na", "nb"), ("na", "nc"), ("nb", "nc")]
    finals_per_partition = []
    for partition in _partitions_of_three():
        finals = set()
        for order in itertools.permutations(pairs):
            nodes = {nid: make_node(nid, registry) for nid in node_ids}
            # Writes land inside each isolated component.
            for k, component in enumerate(partition):
                for nid in sorted(component):
                    for i in range(2):
                        nodes[nid].append(
                            sealed_message(
                                registry, k * 100 + i, originator=f"src-{nid}"
                            )
                        )
            for a, b in order:  # telecommunications re-established pairwise
                sync(nodes[a], nodes[b])
            blobs = {chain_bytes(n.chain) for n in nodes.values()}
            assert len(blobs) == 1, f"{partition} healed in order {order} diverged"
            finals.add(blobs.pop())
        assert len(finals) == 1, f"{partition}: final chain depends on heal order"
        finals_per_partition.append(finals.pop())

    rng = random.Random(50_005)
    five = [f"n{k}" for k in range(5)]
    for schedule in range(100):
        nodes = {nid: make_node(nid, registry) for nid in five}
        for _ in range(rng.randrange(4, 16)):
            writer = rng.choice(five)
            nodes[writer].append(
                sealed_message(registry, rng.randrange(10**6), originator="src-a")
            )
            if rng.random() < 0.35:
                a, b = rng.sample(five, 2)
                sync(nodes[a], nodes[b])
        heal_pairs = list(itertools.combinations(five, 2))
        rng.shuffle(heal_pairs)
        for a, b in heal_pairs:
            sync(nodes[a], nodes[b])
        # One more deterministic pass guarantees full propagation.
        for a, b in itertools.combinations(five, 2):
            sync(nodes[a], nodes[b])
        assert len({chain_bytes(n.chain) for n in nodes.values()}) == 1, (
            f"schedule {schedule} diverged"
        )
    budget.check()


# -- criterion 6 ---------------------------------------------------------------


def _random_opinion(rng: random.Random) -> Opinion:
    b = rng.uniform(0.0, 0.93)
    d = rng.uniform(0.0, 0.93 - b)
    if b + d < 0.05:  # keep some committed mass so duplication has signal
        b += 0.05
    u = 1.0 - b - d
    return Opinion(b, d, u, 0.5)


def test_c06_collusion_resistance():
    budget = Budget(10.0)
    rng = random.Random(60_006)
    counts = (2, 5, 20)
    for case in range(1000):
        opinion = _random_opinion(rng)
        trust_r = rng.randrange(0, 9)
        profiles = {
            f"s{i}": SourceProfile(f"s{i}", confirmed=trust_r, refuted=1)
            for i in range(max(counts))
        }
        baseline = fuse_hypothesis(
            [Report("s0", "h", opinion, "d0")],
            profiles,
            DiversityModel(clusters=(("s0",),), similarity_threshold=0.9),
        )
        for n in counts:
            # n look-alike sources in ONE cluster: counts exactly once.
            one_cluster = DiversityModel(
                clusters=(tuple(sorted(f"s{i}" for i in range(n))),),
                similarity_threshold=0.9,
            )
            reports = [Report(f"s{i}", "h", opinion, f"d{i}") for i in range(n)]
            colluding = fuse_hypothesis(reports, profiles, one_cluster)
            assert abs(colluding.b - baseline.b) <= TOL, case
            assert abs(colluding.d - baseline.d) <= TOL, case
            assert abs(colluding.u - baseline.u) <= TOL, case
        # The same n reports spread over n distinct clusters: u strictly drops.
        last_u = baseline.u
        for n in counts:
            diverse = DiversityModel(
                clusters=tuple((f"s{i}",) for i in range(n)),
                similarity_threshold=0.9,
            )
            reports = [Report(f"s{i}", "h", opinion, f"d{i}") for i in range(n)]
            fused = fuse_hypothesis(reports, profiles, diverse)
            assert fused.u < last_u, f"case {case}, n={n}: {fused.u} !< {last_u}"
            last_u = fused.u
    budget.check()


# -- criterion 7 ---------------------------------------------------------------


def test_c07_fusion_algebra_randomized():
    budget = Budget(10.0)
    rng = random.Random(70_007)

    def random_opinion(base=0.5):
        b = rng.uniform(0.0, 1.0)
        d = rng.uniform(0.0, 1.0 - b)
        return Opinion(b, d, 1.0 - b - d, base)

    for _ in range(10_000):
        x = random_opinion()
        raw_y = random_opinion()
        y = Opinion(raw_y.b, raw_y.d, raw_y.u, x.a)
        t = rng.random()

        # Closure under every operator.
        for result in (discount(x, t), fuse_cumulative(x, y), fuse_averaging(x, y)):
            assert abs(result.b + result.d + result.u - 1.0) <= TOL
            assert -TOL <= result.b <= 1 + TOL
            assert -TOL <= result.d <= 1 + TOL
            assert -TOL <= result.u <= 1 + TOL

        # Discount limits.
        identity = discount(x, 1.0)
        assert abs(identity.b - x.b) <= TOL and abs(identity.u - x.u) <= TOL
        vacuous = discount(x, 0.0)
        assert vacuous.b <= TOL and vacuous.d <= TOL and abs(vacuous.u - 1.0) <= TOL

        # Cumulative fusion: vacuous identity and commutativity.
        with_identity = fuse_cumulative(x, Opinion.vacuous(x.a))
        assert abs(with_identity.b - x.b) <= TOL
        assert abs(with_identity.d - x.d) <= TOL
        assert abs(with_identity.u - x.u) <= TOL
        xy, yx = fuse_cumulative(x, y), fuse_cumulative(y, x)
        assert abs(xy.b - yx.b) <= TOL
        assert abs(xy.d - yx.d) <= TOL
        assert abs(xy.u - yx.u) <= TOL

        # Averaging fusion idempotence.
        doubled = fuse_averaging(x, x)
        assert abs(doubled.b - x.b) <= TOL
        assert abs(doubled.d - x.d) <= TOL
        assert abs(doubled.u - x.u) <= TOL
    budget.check()


# -- criterion 8 ---------------------------------------------------------------


def test_c08_resupply_route_choice_with_oracle():
    budget = Budget(5.0)
    result = run(bundled("case2_routes"))
    assert result.ok
    assessment = result.route_assessment
    assert assessment.chosen == "B"
    oracle = _oracle_risk(
        result.scenario.routes,
        [t for t in result.picture if t.kind.value == "Threat"],
        result.scenario.config,
    )
    for route_id, score in assessment.scores.items():
        assert score == pytest.approx(oracle[route_id], abs=TOL)
    budget.check()


# -- criterion 9 ---------------------------------------------------------------


def test_c09_misinformation_conflicts_ledgered():
    budget = Budget(5.0)
    result = run(bundled("case3_misinfo"))
    assert result.ok
    codes = {r["code"] for r in result.log.records("conflict")}
    assert {"C1", "C3"} <= codes
    # Both evidence entries are receipted ledger entries with audit trails.
    from pause.ledger import audit_trail
    from pause.ledger.entries import logical_messages

    chain = result.nodes[result.report_node].chain
    for code in ("C1", "C3"):
        matches = [
            e
            for e in logical_messages(chain)
            if not e.envelope.is_encrypted
            and e.envelope.message.payload_text is not None
            and e.envelope.message.payload_text.startswith(f"conflict:{code}")
        ]
        assert matches, f"no ledgered evidence for {code}"
        trail = audit_trail(chain, matches[0].envelope.digest)
        assert any(event.event == "receipt" for event in trail)
    budget.check()


# -- criterion 10 --------------------------------------------------------------


def test_c10_mapping_traceability(tmp_path):
    budget = Budget(5.0)
    result = run(bundled("case1_mapping"))
    assert result.ok
    engine_tracks = [t.to_json_dict() for t in result.picture]

    chain_dir = tmp_path / "chain"
    save_chain(result.nodes[result.report_node].chain, chain_dir)
    raw_chain = load_chain(chain_dir)

    from pause.scenario.engine import ScenarioEngine

    engine = ScenarioEngine(result.scenario, seed=result.seed)
    engine.run()
    rebuilt = build_picture(
        raw_chain,
        engine.sources,
        result.scenario.config,
        keyring=engine.keyrings[result.report_node],
    )
    rebuilt_tracks = [t.to_json_dict() for t in rebuilt]
    assert json.dumps(rebuilt_tracks, sort_keys=True) == json.dumps(
        engine_tracks, sort_keys=True
    )
    digests = {e.envelope.digest for b in raw_chain for e in b.entries}
    for track in result.picture:
        assert set(track.contributing) <= digests
    budget.check()


# -- criterion 11 --------------------------------------------------------------


def test_c11_anonymization_calibration():
    budget = Budget(10.0)
    epsilon = 1.0
    message = make_message(
        originator_id="civ-1",
        category="S",
        subject=1,
        timestamp=EPOCH.replace(hour=9, minute=30),
        geometry=GeoShape.of(47.1, 37.5, 10),
    )
    rng = random.Random(110_011)
    lat_km, lon_km = [], []
    for _ in range(10_000):
        blurred = anonymize(message, epsilon, rng, "anon-x")
        lat_km.append(
            abs(blurred.geometry.latitude - message.geometry.latitude) * KM_PER_DEG_LAT
        )
        lon_km.append(
            abs(blurred.geometry.longitude - message.geometry.longitude)
            / km_to_deg_lon(1.0, message.geometry.latitude)
        )
    analytic = 1.0 / epsilon
    for series in (lat_km, lon_km):
        mean = sum(series) / len(series)
        assert abs(mean - analytic) <= 0.1 * analytic, mean

    # Determinism under a fixed seed.
    first = anonymize(message, epsilon, random.Random(9), "anon-x")
    second = anonymize(message, epsilon, random.Random(9), "anon-x")
    assert first == second
    budget.check()
