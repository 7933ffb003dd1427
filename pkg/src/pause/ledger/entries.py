"""Ledger entries, blocks, and the canonical chain layout.

An entry is a receipted envelope: the receiving node signs (digest,
received_at) so information receipt cannot be repudiated. The entry id is a
hash over every byte of the entry (envelope content, signatures, node,
time), which makes any single-byte mutation of a committed entry detectable
from the hash chain alone.

A chain is a pure function of its entry set: entries are totally ordered by
(message timestamp, envelope digest, receiving node, receipt time, entry id)
and re-batched into fixed-size blocks. Block boundaries therefore carry no
meaning, and two nodes holding the same entries hold byte-identical chains.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from datetime import datetime
from typing import Any, Iterable

from pause.errors import MalformedBytes
from pause.wf.codec import format_timestamp, parse_timestamp
from pause.wf.crypto import Envelope, KeyPair

GENESIS_HASH = "0" * 64
DEFAULT_BLOCK_SIZE = 8


def _sha256_json(payload: Any) -> str:
    return hashlib.sha256(
        json.dumps(payload, sort_keys=True, separators=(",", ":")).encode("utf-8")
    ).hexdigest()


def receipt_payload(digest: str, received_at_iso: str) -> bytes:
    return f"{digest}|{received_at_iso}".encode("ascii")


@dataclass(frozen=True)
class LedgerEntry:
    """A receipted envelope anchored to one node at one instant."""

    envelope: Envelope
    node_id: str
    received_at: datetime
    receipt_signature: bytes
    entry_id: str

    @property
    def received_at_iso(self) -> str:
        return format_timestamp(self.received_at)

    def sort_key(self) -> tuple[str, str, str, str, str]:
        return (
            self.envelope.timestamp,
            self.envelope.digest,
            self.node_id,
            self.received_at_iso,
            self.entry_id,
        )

    def core_dict(self) -> dict[str, Any]:
        """Everything the entry id covers (all fields but the id itself)."""
        return {
            "envelope": self.envelope.to_json_dict(),
            "node_id": self.node_id,
            "received_at": self.received_at_iso,
            "receipt_signature": self.receipt_signature.hex(),
        }

    def computed_id(self) -> str:
        return _sha256_json(self.core_dict())

    def to_json_dict(self) -> dict[str, Any]:
        return {**self.core_dict(), "entry_id": self.entry_id}

    @classmethod
    def from_json_dict(cls, data: dict[str, Any]) -> "LedgerEntry":
        try:
            return cls(
                envelope=Envelope.from_json_dict(data["envelope"]),
                node_id=data["node_id"],
                received_at=parse_timestamp(data["received_at"]),
                receipt_signature=bytes.fromhex(data["receipt_signature"]),
                entry_id=data["entry_id"],
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedBytes(f"bad ledger entry object: {exc}") from None


def make_entry(
    envelope: Envelope,
    node_id: str,
    received_at: datetime,
    node_key: KeyPair,
) -> LedgerEntry:
    received_iso = format_timestamp(received_at)
    signature = node_key.sign(receipt_payload(envelope.digest, received_iso))
    entry = LedgerEntry(
        envelope=envelope,
        node_id=node_id,
        received_at=parse_timestamp(received_iso),
        receipt_signature=signature,
        entry_id="",
    )
    return LedgerEntry(
        envelope=entry.envelope,
        node_id=entry.node_id,
        received_at=entry.received_at,
        receipt_signature=entry.receipt_signature,
        entry_id=entry.computed_id(),
    )


@dataclass(frozen=True)
class Block:
    """A batch of entries chained to its predecessor by hash."""

    height: int
    prev_hash: str
    entries: tuple[LedgerEntry, ...]
    block_hash: str

    def computed_hash(self) -> str:
        return block_hash_over(self.height, self.prev_hash, [e.entry_id for e in self.entries])

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "height": self.height,
            "prev_hash": self.prev_hash,
            "block_hash": self.block_hash,
            "entries": [entry.to_json_dict() for entry in self.entries],
        }

    @classmethod
    def from_json_dict(cls, data: dict[str, Any]) -> "Block":
        try:
            return cls(
                height=int(data["height"]),
                prev_hash=data["prev_hash"],
                entries=tuple(
                    LedgerEntry.from_json_dict(e) for e in data["entries"]
                ),
                block_hash=data["block_hash"],
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedBytes(f"bad block object: {exc}") from None


def block_hash_over(height: int, prev_hash: str, entry_ids: list[str]) -> str:
    return _sha256_json([height, prev_hash, entry_ids])


def build_chain(
    entries: Iterable[LedgerEntry], block_size: int = DEFAULT_BLOCK_SIZE
) -> list[Block]:
    """Batch the canonical total order of ``entries`` into a hash chain."""
    ordered = sorted(entries, key=LedgerEntry.sort_key)
    chain: list[Block] = []
    prev_hash = GENESIS_HASH
    for height, start in enumerate(range(0, len(ordered), block_size)):
        batch = tuple(ordered[start : start + block_size])
        block = Block(
            height=height,
            prev_hash=prev_hash,
            entries=batch,
            block_hash=block_hash_over(height, prev_hash, [e.entry_id for e in batch]),
        )
        chain.append(block)
        prev_hash = block.block_hash
    return chain


def chain_entries(chain: Iterable[Block]) -> list[LedgerEntry]:
    """All entries in ledger order."""
    return [entry for block in chain for entry in block.entries]


def logical_messages(chain: Iterable[Block]) -> list[LedgerEntry]:
    """Read-path dedup: the first receipt of each distinct message digest."""
    seen: set[str] = set()
    unique: list[LedgerEntry] = []
    for entry in chain_entries(chain):
        if entry.envelope.digest not in seen:
            seen.add(entry.envelope.digest)
            unique.append(entry)
    return unique


def chain_bytes(chain: Iterable[Block]) -> bytes:
    """Deterministic serialization of a whole chain, for equality checks."""
    return json.dumps(
        [block.to_json_dict() for block in chain],
        sort_keys=True,
        separators=(",", ":"),
    ).encode("utf-8")
