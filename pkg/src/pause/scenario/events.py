"""Deterministic event log: the run's complete, replayable record."""

from __future__ import annotations

import json
from typing import Any, Iterable


def _canonical_line(record: dict[str, Any]) -> str:
    return json.dumps(record, sort_keys=True, separators=(",", ":"))


class EventLog:
    """Append-only list of JSON records; identical runs serialize identically."""

    def __init__(self):
        self._records: list[dict[str, Any]] = []

    def append(self, record: dict[str, Any]) -> dict[str, Any]:
        record = {"seq": len(self._records), **record}
        self._records.append(record)
        return record

    def records(self, event_type: str | None = None) -> list[dict[str, Any]]:
        if event_type is None:
            return list(self._records)
        return [r for r in self._records if r.get("type") == event_type]

    def __len__(self) -> int:
        return len(self._records)

    def to_jsonl(self) -> bytes:
        return "".join(_canonical_line(r) + "\n" for r in self._records).encode("utf-8")

    @staticmethod
    def parse_jsonl(data: bytes | str) -> list[dict[str, Any]]:
        if isinstance(data, bytes):
            data = data.decode("utf-8")
        return [json.loads(line) for line in data.splitlines() if line.strip()]


def filter_events(records: Iterable[dict[str, Any]], event_type: str) -> list[dict[str, Any]]:
    return [r for r in records if r.get("type") == event_type]
