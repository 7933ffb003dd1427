"""Record a real API session as fixtures for the console's fidelity tests.

Runs the node service in-process, drives a small session (messages, what-if
round trip, trust feedback, engagement, detections), and saves the exact
response payloads under frontend/tests/fixtures/.
"""

from __future__ import annotations

import json
from pathlib import Path

from fastapi.testclient import TestClient

from pause.service import NodeServiceConfig, create_app
from pause.trust import SourceProfile, SourceRegistry
from pause.wf import codec, derive_keypair, from_json_dict

OUT = Path(__file__).resolve().parent.parent / "frontend" / "tests" / "fixtures"
OUT.mkdir(parents=True, exist_ok=True)


def message_dict(category, subject_code, lat, lon, second, originator="icrc-1"):
    return {
        "version": 1,
        "originator_id": originator,
        "category": category,
        "subject_code": subject_code,
        "reference_indicator": "New",
        "referenced_hash": None,
        "timestamp": f"2030-01-01T00:00:{second:02d}Z",
        "duration": None,
        "geometry": {"latitude": lat, "longitude": lon, "radius_m": 200.0},
        "payload_text": None,
    }


def signed(message, keypair):
    digest = codec.digest(from_json_dict(message))
    return {"message": message, "signature": keypair.sign(digest.encode()).hex()}


def save(name, payload):
    (OUT / name).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    print(f"recorded {name}")


def main():
    sources = SourceRegistry(
        [
            SourceProfile("icrc-1", attributes={"organisation": "icrc"}, confirmed=8),
            SourceProfile("mil-obs", attributes={"organisation": "mil-a"}, confirmed=6, refuted=2),
        ]
    )
    sources_path = OUT / "_sources.json"
    sources.save(sources_path)
    config = NodeServiceConfig(
        node_id="fixture-node", sources_file=str(sources_path), demo_key_seed=7
    )
    app = create_app(config)
    client = TestClient(
        app, headers={"X-Client-Id": "console-fixture", "X-Client-Role": "Humanitarian"}
    )
    icrc = derive_keypair("source:icrc-1", 7)
    mil = derive_keypair("source:mil-obs", 7)

    service = app.state.service
    subscriber = service.bus.subscribe()

    hospital = message_dict("P", 1, 47.1, 37.5, 0)
    accepted = client.post("/messages", json=signed(hospital, icrc)).json()
    save("message_accepted.json", accepted)
    client.post("/messages", json=signed(message_dict("D", 4, 47.1, 37.6, 1, "mil-obs"), mil))
    client.post("/messages", json=signed(message_dict("S", 1, 47.05, 37.45, 2), icrc))

    save("picture.json", client.get("/picture").json())
    save("audit.json", client.get(f"/audit/{accepted['digest']}").json())
    save("blocks.json", client.get("/ledger/blocks").json())

    routes_before = [
        {"route_id": "A", "polyline": [[47.0, 37.6], [47.2, 37.6]]},
        {"route_id": "B", "polyline": [[47.0, 37.9], [47.2, 37.9]]},
    ]
    save("whatif_before.json", client.post("/whatif/route", json={"routes": routes_before}).json())
    # The operator drags route B west, toward the threat: risk must change.
    routes_after = [
        {"route_id": "A", "polyline": [[47.0, 37.6], [47.2, 37.6]]},
        {"route_id": "B", "polyline": [[47.0, 37.62], [47.2, 37.62]]},
    ]
    save("whatif_after.json", client.post("/whatif/route", json={"routes": routes_after}).json())
    save("routes_before.json", routes_before)
    save("routes_after.json", routes_after)

    save("trust.json", client.post("/trust/mil-obs", json={"outcome": "Confirmed"}).json())
    save(
        "engagement.json",
        client.post(
            "/engagements",
            json={"truth": "Protected", "operator": "NotProtected", "machine": "Protected"},
        ).json(),
    )
    save(
        "detections.json",
        client.post(
            "/detections",
            json={
                "frames": [
                    {
                        "frame_id": 0,
                        "detections": [
                            {"label": "tent", "box": [0.2, 0.2, 0.8, 0.8], "confidence": 0.95}
                        ],
                    }
                ],
                "location": [47.1, 37.5],
            },
        ).json(),
    )

    events = []
    while not subscriber.queue.empty():
        events.append(subscriber.queue.get_nowait())
    save("events.json", events)
    sources_path.unlink()


if __name__ == "__main__":
    main()
