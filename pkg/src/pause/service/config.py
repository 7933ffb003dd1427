"""Node service configuration: JSON file plus PAUSE_* environment overrides."""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Any

from pydantic import BaseModel, Field


class PeerConfig(BaseModel):
    node_id: str
    url: str


class NodeServiceConfig(BaseModel):
    node_id: str = "node-1"
    listen_host: str = "127.0.0.1"
    listen_port: int = 8470
    key_seed: str = "dev-only-node-key"
    sources_file: str | None = None
    registry_file: str | None = None  # originator_id -> public key hex
    demo_key_seed: int | None = None  # derive keys for all sources (demo mode)
    peers: list[PeerConfig] = Field(default_factory=list)
    epsilon: float = 1.0
    merge_radius_m: float = 500.0
    lambda_km: float = 2.0
    u_max: float = 0.4
    similarity_threshold: float = 0.8
    block_size: int = 8
    anonymize_seed: int = 0
    event_queue_size: int = 256
    group_keys: dict[str, str] = Field(default_factory=dict)  # group -> 32-byte hex

    @classmethod
    def load(cls, path: str | Path | None = None) -> "NodeServiceConfig":
        data: dict[str, Any] = {}
        if path is not None:
            data = json.loads(Path(path).read_text())
        return cls(**{**data, **_env_overrides()})


_ENV_FIELDS = {
    "PAUSE_NODE_ID": ("node_id", str),
    "PAUSE_LISTEN_HOST": ("listen_host", str),
    "PAUSE_LISTEN_PORT": ("listen_port", int),
    "PAUSE_KEY_SEED": ("key_seed", str),
    "PAUSE_SOURCES_FILE": ("sources_file", str),
    "PAUSE_REGISTRY_FILE": ("registry_file", str),
    "PAUSE_EPSILON": ("epsilon", float),
    "PAUSE_MERGE_RADIUS_M": ("merge_radius_m", float),
    "PAUSE_LAMBDA_KM": ("lambda_km", float),
    "PAUSE_U_MAX": ("u_max", float),
    "PAUSE_BLOCK_SIZE": ("block_size", int),
    "PAUSE_ANONYMIZE_SEED": ("anonymize_seed", int),
}


def _env_overrides() -> dict[str, Any]:
    overrides: dict[str, Any] = {}
    for env_name, (field, cast) in _ENV_FIELDS.items():
        raw = os.environ.get(env_name)
        if raw is not None:
            overrides[field] = cast(raw)
    return overrides
