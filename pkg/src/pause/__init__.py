"""PAUSE: trusted humanitarian signaling over a replicated ledger.

Subpackages:
    wf        message model, canonical codec, signatures, reference chains
    ledger    append-only hash-chained per-node ledger with receipts and sync
    trust     subjective-logic opinions, diversity clustering, fusion pipeline
    picture   fused operational picture, anonymization, decisions, route risk
    minai     protective perception rules, engagement outcomes, cross-checking
    scenario  deterministic scenario engine and bundled vignettes
    service   HTTP node service (FastAPI) and thin client
"""

__version__ = "0.1.0"
