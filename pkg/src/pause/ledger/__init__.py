"""Append-only hash-chained ledger with receipts, sync, and audit trails."""

from pause.ledger.entries import (
    DEFAULT_BLOCK_SIZE,
    GENESIS_HASH,
    Block,
    LedgerEntry,
    build_chain,
    chain_bytes,
    chain_entries,
    logical_messages,
    make_entry,
)
from pause.ledger.node import LedgerNode, sync
from pause.ledger.store import load_chain, save_chain, verify_chain_dir
from pause.ledger.verify import (
    AuditEvent,
    ChainReport,
    ReceiptReport,
    audit_trail,
    verify_chain,
    verify_receipts,
)

__all__ = [
    "DEFAULT_BLOCK_SIZE",
    "GENESIS_HASH",
    "AuditEvent",
    "Block",
    "ChainReport",
    "LedgerEntry",
    "LedgerNode",
    "ReceiptReport",
    "audit_trail",
    "build_chain",
    "chain_bytes",
    "chain_entries",
    "load_chain",
    "logical_messages",
    "make_entry",
    "save_chain",
    "sync",
    "verify_chain",
    "verify_chain_dir",
    "verify_receipts",
]
