"""Reference-chain semantics: update, cancel, acknowledge, duress.

Messages reference earlier ones by digest. Walking a ledger-ordered message
sequence yields each chain's effective state, last writer wins. A duress
reference flags the chain's current head without cancelling it; dangling
references are reported, never fatal.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from pause.wf import codec
from pause.wf.messages import RefIndicator, WfMessage


class StateKind(enum.Enum):
    ACTIVE = "Active"
    UPDATED = "Updated"
    CANCELLED = "Cancelled"
    UNDER_DURESS = "UnderDuress"


@dataclass(frozen=True)
class EffectiveState:
    status: StateKind
    updated_by: str | None = None


@dataclass
class ReferenceReport:
    """Effective state per entity message, plus unresolved references.

    ``states`` is keyed by message digest; control messages (cancel,
    acknowledge, duress) carry no state of their own. ``dangling`` lists
    (referrer digest, missing referenced digest) pairs.
    """

    states: dict[str, EffectiveState] = field(default_factory=dict)
    dangling: list[tuple[str, str]] = field(default_factory=list)

    def head_digests(self) -> list[str]:
        """Digests whose chain is still standing (active or under duress)."""
        return [
            digest
            for digest, state in self.states.items()
            if state.status in (StateKind.ACTIVE, StateKind.UNDER_DURESS)
        ]


def resolve_references(
    messages: Sequence[WfMessage] | Iterable[tuple[str, WfMessage]],
) -> ReferenceReport:
    """Fold a ledger-ordered message sequence into per-chain effective states.

    Accepts plain messages (digests are computed) or (digest, message) pairs
    when the caller already has them.

    Entities are registered first, then references fold in ledger order.
    Sender timestamps are untrusted (anonymized ones are truncated to the
    hour), so a reference may legitimately sort before its referent; it still
    resolves as long as the referent is in the ledger at all. Dangling means
    the referent is nowhere in the sequence.
    """
    report = ReferenceReport()
    chain_next: dict[str, str] = {}
    pairs: list[tuple[str, WfMessage]] = [
        (codec.digest(item), item) if isinstance(item, WfMessage) else item
        for item in messages
    ]

    for digest, message in pairs:
        if message.reference_indicator in (RefIndicator.NEW, RefIndicator.UPDATE):
            report.states.setdefault(digest, EffectiveState(StateKind.ACTIVE))

    def head_of(digest: str) -> str:
        while digest in chain_next:
            digest = chain_next[digest]
        return digest

    for digest, message in pairs:
        indicator = message.reference_indicator
        if indicator is RefIndicator.NEW:
            continue
        ref = message.referenced_hash
        if ref not in report.states:
            report.dangling.append((digest, ref))
            continue
        if indicator is RefIndicator.UPDATE:
            report.states[ref] = EffectiveState(StateKind.UPDATED, updated_by=digest)
            chain_next[ref] = digest
        elif indicator is RefIndicator.CANCEL:
            report.states[ref] = EffectiveState(StateKind.CANCELLED)
        elif indicator is RefIndicator.DURESS:
            head = head_of(ref)
            if report.states[head].status is not StateKind.CANCELLED:
                report.states[head] = EffectiveState(StateKind.UNDER_DURESS)
        # Acknowledge: recorded in the audit trail, no state change.

    return report
