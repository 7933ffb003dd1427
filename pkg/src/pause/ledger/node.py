"""A ledger node: single-writer appends, link state, and peer sync.

There is no coordinator anywhere in this module: a merge is a union of
receipted entries followed by the deterministic canonical re-batching, which
makes it commutative, associative, and idempotent. When telecommunications
come back, any sequence of pairwise syncs converges every connected node to
one identical chain.
"""

from __future__ import annotations

import threading
from datetime import datetime, timezone
from typing import Callable, Iterable

from pause.errors import InvalidPeerChain, RejectedSignature
from pause.ledger.entries import (
    DEFAULT_BLOCK_SIZE,
    Block,
    LedgerEntry,
    build_chain,
    make_entry,
)
from pause.ledger.verify import verify_chain
from pause.wf.crypto import Envelope, KeyPair, KeyRegistry, verify


def _utc_now() -> datetime:
    return datetime.now(timezone.utc).replace(microsecond=0)


class LedgerNode:
    """One participant's append-only ledger plus its view of the links."""

    def __init__(
        self,
        node_id: str,
        keypair: KeyPair,
        originator_registry: KeyRegistry,
        clock: Callable[[], datetime] = _utc_now,
        block_size: int = DEFAULT_BLOCK_SIZE,
    ):
        self.node_id = node_id
        self.keypair = keypair
        self.originator_registry = originator_registry
        self.clock = clock
        self.block_size = block_size
        self.connectivity: dict[str, bool] = {}
        self.quarantined: set[str] = set()
        self.incidents: list[str] = []
        self._entries: dict[str, LedgerEntry] = {}
        self._chain: list[Block] | None = None
        self._write_lock = threading.Lock()

    # -- link state ------------------------------------------------------

    def set_link(self, peer_id: str, up: bool) -> None:
        self.connectivity[peer_id] = up

    def link_up(self, peer_id: str) -> bool:
        return self.connectivity.get(peer_id, False) and peer_id not in self.quarantined

    @property
    def peer_set(self) -> set[str]:
        return set(self.connectivity)

    # -- reads -----------------------------------------------------------

    @property
    def chain(self) -> list[Block]:
        if self._chain is None:
            self._chain = build_chain(self._entries.values(), self.block_size)
        return self._chain

    @property
    def entry_count(self) -> int:
        return len(self._entries)

    def entries(self) -> list[LedgerEntry]:
        return sorted(self._entries.values(), key=LedgerEntry.sort_key)

    # -- writes ----------------------------------------------------------

    def append(self, envelope: Envelope) -> LedgerEntry:
        """Receipt and commit an envelope; duplicates get fresh receipts."""
        report = verify(envelope, self.originator_registry)
        if not report.signature_ok:
            raise RejectedSignature(
                f"envelope from {envelope.originator_id!r} failed signature verification"
            )
        with self._write_lock:
            entry = make_entry(envelope, self.node_id, self.clock(), self.keypair)
            self._entries[entry.entry_id] = entry
            self._chain = None
            return entry

    def absorb_entries(self, entries: Iterable[LedgerEntry]) -> int:
        """Install already-receipted foreign entries (sync path)."""
        added = 0
        with self._write_lock:
            for entry in entries:
                if entry.computed_id() != entry.entry_id:
                    raise InvalidPeerChain(
                        f"foreign entry {entry.entry_id[:12]} does not recompute"
                    )
                if entry.entry_id not in self._entries:
                    self._entries[entry.entry_id] = entry
                    added += 1
            if added:
                self._chain = None
        return added


def sync(node_a: LedgerNode, node_b: LedgerNode) -> list[Block]:
    """Merge two nodes' ledgers; both end up holding the identical chain.

    Either side presenting a chain that fails verification is quarantined by
    the other and the merge is refused.
    """
    for receiver, sender in ((node_a, node_b), (node_b, node_a)):
        report = verify_chain(sender.chain)
        if not report.ok:
            receiver.quarantined.add(sender.node_id)
            receiver.incidents.append(
                f"peer {sender.node_id} offered an invalid chain "
                f"(broken at {report.broken_at}: {report.reason}); quarantined"
            )
            raise InvalidPeerChain(
                f"{sender.node_id} failed chain verification at height {report.broken_at}"
            )
    node_a.absorb_entries(node_b.entries())
    node_b.absorb_entries(node_a.entries())
    return node_a.chain
