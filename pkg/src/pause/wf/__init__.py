"""Message model, canonical codec, signatures, and reference semantics."""

from pause.wf.codec import decode, digest, digest_bytes, encode, from_json_dict, to_json_dict
from pause.wf.crypto import (
    Envelope,
    GroupKeyring,
    KeyPair,
    KeyRegistry,
    VerificationReport,
    derive_keypair,
    open_envelope,
    seal,
    verify,
)
from pause.wf.messages import (
    SUBJECT_CODES,
    GeoShape,
    MessageCategory,
    RefIndicator,
    WfMessage,
    make_message,
    subject_code_for,
    subject_label,
)
from pause.wf.references import (
    EffectiveState,
    ReferenceReport,
    StateKind,
    resolve_references,
)

__all__ = [
    "SUBJECT_CODES",
    "EffectiveState",
    "Envelope",
    "GeoShape",
    "GroupKeyring",
    "KeyPair",
    "KeyRegistry",
    "MessageCategory",
    "RefIndicator",
    "ReferenceReport",
    "StateKind",
    "VerificationReport",
    "WfMessage",
    "decode",
    "derive_keypair",
    "digest",
    "digest_bytes",
    "encode",
    "from_json_dict",
    "make_message",
    "open_envelope",
    "resolve_references",
    "seal",
    "subject_code_for",
    "subject_label",
    "to_json_dict",
    "verify",
]
