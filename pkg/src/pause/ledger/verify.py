"""Chain verification, receipt verification, and audit trails.

``verify_chain`` is purely structural (hashes and linkage recompute from
content), so it needs no keys and detects any byte-level mutation of a
committed chain. Signature checks live in ``verify_receipts`` because a
forger who recomputes hashes forward still cannot re-sign receipts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

from pause.errors import UnknownDigest
from pause.ledger.entries import GENESIS_HASH, Block, chain_entries
from pause.wf.codec import digest_bytes
from pause.wf.crypto import KeyRegistry
from pause.wf.references import RefIndicator


@dataclass(frozen=True)
class ChainReport:
    ok: bool
    broken_at: int | None = None
    reason: str | None = None


def verify_chain(chain: Sequence[Block]) -> ChainReport:
    """Recompute every hash and linkage; report the first violation."""
    prev_hash = GENESIS_HASH
    for position, block in enumerate(chain):
        if block.height != position:
            return ChainReport(
                ok=False,
                broken_at=position,
                reason=f"height {block.height} at position {position}; heights must be dense from 0",
            )
        if block.prev_hash != prev_hash:
            return ChainReport(
                ok=False,
                broken_at=position,
                reason="prev_hash does not match predecessor's block hash",
            )
        for entry in block.entries:
            if entry.computed_id() != entry.entry_id:
                return ChainReport(
                    ok=False,
                    broken_at=position,
                    reason=f"entry {entry.entry_id[:12]} does not recompute; contents were altered",
                )
            if not entry.envelope.is_encrypted and (
                digest_bytes(entry.envelope.canonical_bytes) != entry.envelope.digest
            ):
                return ChainReport(
                    ok=False,
                    broken_at=position,
                    reason="envelope digest does not match canonical bytes",
                )
        if block.computed_hash() != block.block_hash:
            return ChainReport(
                ok=False, broken_at=position, reason="block hash does not recompute"
            )
        prev_hash = block.block_hash
    return ChainReport(ok=True)


@dataclass(frozen=True)
class ReceiptReport:
    ok: bool
    failures: tuple[tuple[int, str, str], ...] = ()  # (height, entry_id, reason)


def verify_receipts(
    chain: Sequence[Block],
    node_registry: KeyRegistry,
    originator_registry: KeyRegistry | None = None,
) -> ReceiptReport:
    """Every receipt must verify under its node's key; originator signatures
    are checked too when an originator registry is supplied."""
    from pause.ledger.entries import receipt_payload

    failures: list[tuple[int, str, str]] = []
    for block in chain:
        for entry in block.entries:
            payload = receipt_payload(entry.envelope.digest, entry.received_at_iso)
            if not node_registry.verify(entry.node_id, entry.receipt_signature, payload):
                failures.append(
                    (block.height, entry.entry_id, f"receipt by {entry.node_id} does not verify")
                )
            if originator_registry is not None and not originator_registry.verify(
                entry.envelope.originator_id,
                entry.envelope.signature,
                entry.envelope.digest.encode("ascii"),
            ):
                failures.append(
                    (
                        block.height,
                        entry.entry_id,
                        f"originator signature by {entry.envelope.originator_id} does not verify",
                    )
                )
    return ReceiptReport(ok=not failures, failures=tuple(failures))


@dataclass(frozen=True)
class AuditEvent:
    """One signed event touching a message: a receipt or a reference."""

    event: str
    actor: str
    time: str
    signature: str
    digest: str  # digest of the entry's message (the referrer for references)

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "event": self.event,
            "actor": self.actor,
            "time": self.time,
            "signature": self.signature,
            "digest": self.digest,
        }


_REFERENCE_EVENTS = {
    RefIndicator.UPDATE: "update",
    RefIndicator.CANCEL: "cancel",
    RefIndicator.ACKNOWLEDGE: "acknowledge",
    RefIndicator.DURESS: "duress",
}


def audit_trail(chain: Sequence[Block], digest: str) -> list[AuditEvent]:
    """All receipts and references touching ``digest``, in ledger order.

    Receipts are per entry (every receiving node); reference events are per
    logical message, emitted at its first receipt.
    """
    events: list[AuditEvent] = []
    seen_references: set[str] = set()
    for entry in chain_entries(chain):
        if entry.envelope.digest == digest:
            events.append(
                AuditEvent(
                    event="receipt",
                    actor=entry.node_id,
                    time=entry.received_at_iso,
                    signature=entry.receipt_signature.hex(),
                    digest=entry.envelope.digest,
                )
            )
        if entry.envelope.is_encrypted or entry.envelope.digest in seen_references:
            continue
        message = entry.envelope.message
        if message.referenced_hash == digest:
            seen_references.add(entry.envelope.digest)
            events.append(
                AuditEvent(
                    event=_REFERENCE_EVENTS[message.reference_indicator],
                    actor=message.originator_id,
                    time=entry.envelope.timestamp,
                    signature=entry.envelope.signature.hex(),
                    digest=entry.envelope.digest,
                )
            )
    if not events:
        raise UnknownDigest(f"digest {digest[:12]}... does not appear in this chain")
    return events
