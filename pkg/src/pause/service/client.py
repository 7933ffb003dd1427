"""Thin HTTP client for the node service; the CLI's client subcommands and
peer-to-peer sync both go through this."""

from __future__ import annotations

import json
from typing import Any

import httpx

from pause.wf import KeyPair, codec, from_json_dict


class NodeClient:
    def __init__(
        self,
        base_url: str,
        client_id: str = "cli",
        role: str = "Humanitarian",
        transport: httpx.BaseTransport | None = None,
        timeout: float = 10.0,
    ):
        self._client = httpx.Client(
            base_url=base_url,
            headers={"X-Client-Id": client_id, "X-Client-Role": role},
            transport=transport,
            timeout=timeout,
        )

    def close(self) -> None:
        self._client.close()

    def info(self) -> dict[str, Any]:
        return self._raise_for_problem(self._client.get("/"))

    def submit(
        self, message: dict[str, Any], signature: str | None = None,
        signing_key: KeyPair | None = None,
    ) -> dict[str, Any]:
        if signature is None and signing_key is not None:
            digest = codec.digest(from_json_dict(message))
            signature = signing_key.sign(digest.encode("ascii")).hex()
        response = self._client.post(
            "/messages", json={"message": message, "signature": signature}
        )
        return self._raise_for_problem(response)

    def picture(self) -> dict[str, Any]:
        return self._raise_for_problem(self._client.get("/picture"))

    def blocks(self, from_height: int = 0) -> dict[str, Any]:
        return self._raise_for_problem(
            self._client.get("/ledger/blocks", params={"from_height": from_height})
        )

    def audit(self, digest: str) -> dict[str, Any]:
        return self._raise_for_problem(self._client.get(f"/audit/{digest}"))

    def what_if(self, routes: list[dict[str, Any]]) -> dict[str, Any]:
        return self._raise_for_problem(
            self._client.post("/whatif/route", json={"routes": routes})
        )

    def trust(self, source_id: str, outcome: str) -> dict[str, Any]:
        return self._raise_for_problem(
            self._client.post(f"/trust/{source_id}", json={"outcome": outcome})
        )

    def engagement(self, truth: str, operator: str, machine: str) -> dict[str, Any]:
        return self._raise_for_problem(
            self._client.post(
                "/engagements",
                json={"truth": truth, "operator": operator, "machine": machine},
            )
        )

    def detections(
        self,
        frames: list[dict[str, Any]],
        location: tuple[float, float],
        operator: str | None = None,
        truth: str | None = None,
    ) -> dict[str, Any]:
        return self._raise_for_problem(
            self._client.post(
                "/detections",
                json={
                    "frames": frames,
                    "location": list(location),
                    "operator": operator,
                    "truth": truth,
                },
            )
        )

    def sync_with(self, peer_url: str) -> dict[str, Any]:
        """Push our chain to a peer, absorb theirs; both converge."""
        own = self.blocks()["blocks"]
        info = self.info()
        with httpx.Client(base_url=peer_url, timeout=30.0) as peer:
            response = peer.post(
                "/sync", json={"node_id": info["node_id"], "blocks": own}
            )
            payload = self._raise_for_problem(response)
        response = self._client.post(
            "/sync", json={"node_id": payload["node_id"], "blocks": payload["blocks"]}
        )
        return self._raise_for_problem(response)

    def events(self, max_events: int = 10) -> list[dict[str, Any]]:
        collected: list[dict[str, Any]] = []
        with self._client.stream(
            "GET", "/events", params={"max_events": max_events}
        ) as response:
            for line in response.iter_lines():
                if line.startswith("data: "):
                    collected.append(json.loads(line[len("data: "):]))
                    if len(collected) >= max_events:
                        break
        return collected

    @staticmethod
    def _raise_for_problem(response: httpx.Response) -> dict[str, Any]:
        if response.status_code >= 400:
            try:
                problem = response.json()
            except json.JSONDecodeError:
                problem = {"code": "http_error", "detail": response.text}
            raise NodeClientError(
                response.status_code, problem.get("code", "error"), problem.get("detail", "")
            )
        return response.json()


class NodeClientError(Exception):
    def __init__(self, status: int, code: str, detail: str):
        super().__init__(f"{status} {code}: {detail}")
        self.status = status
        self.code = code
        self.detail = detail
