"""Signature envelope, key registry, and trusted-subgroup encryption.

Originators sign the SHA-256 digest of a message's canonical bytes with
Ed25519. Content may additionally be encrypted for a trusted subgroup with
AES-256-GCM under a pre-shared group key; the digest is always computed over
the plaintext canonical bytes, so receipts can reference messages the
receipting party cannot read.
"""

from __future__ import annotations

import base64
import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from cryptography.exceptions import InvalidSignature, InvalidTag
from cryptography.hazmat.primitives.asymmetric.ed25519 import (
    Ed25519PrivateKey,
    Ed25519PublicKey,
)
from cryptography.hazmat.primitives.ciphers.aead import AESGCM
from cryptography.hazmat.primitives.serialization import (
    Encoding,
    PublicFormat,
)

from pause.errors import MalformedBytes, OpaqueCiphertext, UnknownKey
from pause.wf import codec
from pause.wf.messages import WfMessage

_NONCE_LEN = 12


class KeyPair:
    """An originator's Ed25519 identity key."""

    def __init__(self, private_key: Ed25519PrivateKey):
        self._private = private_key

    @classmethod
    def generate(cls) -> "KeyPair":
        return cls(Ed25519PrivateKey.generate())

    @classmethod
    def from_seed(cls, seed: bytes) -> "KeyPair":
        """Deterministic keypair from 32 seed bytes (shorter seeds are hashed)."""
        if len(seed) != 32:
            seed = hashlib.sha256(seed).digest()
        return cls(Ed25519PrivateKey.from_private_bytes(seed))

    def sign(self, data: bytes) -> bytes:
        return self._private.sign(data)

    @property
    def public_key(self) -> Ed25519PublicKey:
        return self._private.public_key()

    @property
    def public_hex(self) -> str:
        return self.public_key.public_bytes(Encoding.Raw, PublicFormat.Raw).hex()


def derive_keypair(label: str, seed: int | str) -> KeyPair:
    """Stable per-scenario identity key for ``label`` under ``seed``."""
    return KeyPair.from_seed(hashlib.sha256(f"{seed}:{label}".encode("utf-8")).digest())


class KeyRegistry:
    """Maps originator ids to registered public keys."""

    def __init__(self, keys: dict[str, str] | None = None):
        self._keys: dict[str, Ed25519PublicKey] = {}
        for originator, pub_hex in (keys or {}).items():
            self.register(originator, pub_hex)

    def register(self, originator_id: str, public_key: Ed25519PublicKey | str) -> None:
        if isinstance(public_key, str):
            public_key = Ed25519PublicKey.from_public_bytes(bytes.fromhex(public_key))
        self._keys[originator_id] = public_key

    def knows(self, originator_id: str) -> bool:
        return originator_id in self._keys

    def get(self, originator_id: str) -> Ed25519PublicKey:
        try:
            return self._keys[originator_id]
        except KeyError:
            raise UnknownKey(f"no registered key for {originator_id!r}") from None

    def verify(self, originator_id: str, signature: bytes, data: bytes) -> bool:
        if not self.knows(originator_id):
            return False
        try:
            self._keys[originator_id].verify(signature, data)
            return True
        except InvalidSignature:
            return False

    def to_dict(self) -> dict[str, str]:
        return {
            originator: key.public_bytes(Encoding.Raw, PublicFormat.Raw).hex()
            for originator, key in sorted(self._keys.items())
        }

    @classmethod
    def load(cls, path: str | Path) -> "KeyRegistry":
        return cls(json.loads(Path(path).read_text()))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True))


class GroupKeyring:
    """Pre-shared AES-256 keys for trusted subgroups."""

    def __init__(self, keys: dict[str, bytes] | None = None):
        self._keys = dict(keys or {})

    def add(self, group_id: str, key: bytes) -> None:
        if len(key) != 32:
            raise UnknownKey(f"group key for {group_id!r} must be 32 bytes")
        self._keys[group_id] = key

    def has(self, group_id: str) -> bool:
        return group_id in self._keys

    def get(self, group_id: str) -> bytes:
        try:
            return self._keys[group_id]
        except KeyError:
            raise UnknownKey(f"not a member of group {group_id!r}") from None

    @classmethod
    def derive(cls, group_ids: list[str], seed: int | str) -> "GroupKeyring":
        return cls(
            {
                gid: hashlib.sha256(f"{seed}:group:{gid}".encode("utf-8")).digest()
                for gid in group_ids
            }
        )


@dataclass(frozen=True)
class Envelope:
    """A sealed message: content, its digest, and the originator's signature.

    ``canonical_bytes`` holds the plaintext canonical encoding, or, when
    ``encryption_group`` is set, nonce + AES-GCM ciphertext of it. ``digest``
    is always over the plaintext. ``timestamp`` repeats the message's claimed
    UTC instant in the clear: the ledger needs it to order envelopes it
    cannot read.
    """

    originator_id: str
    canonical_bytes: bytes
    digest: str
    signature: bytes
    timestamp: str
    encryption_group: str | None = None

    @property
    def is_encrypted(self) -> bool:
        return self.encryption_group is not None

    @property
    def message(self) -> WfMessage:
        """Decode the plaintext content; fails on encrypted envelopes."""
        if self.is_encrypted:
            raise OpaqueCiphertext(
                f"content is encrypted for group {self.encryption_group!r}"
            )
        return codec.decode(self.canonical_bytes)

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "originator_id": self.originator_id,
            "canonical_bytes": base64.b64encode(self.canonical_bytes).decode("ascii"),
            "digest": self.digest,
            "signature": self.signature.hex(),
            "timestamp": self.timestamp,
            "encryption_group": self.encryption_group,
        }

    @classmethod
    def from_json_dict(cls, data: dict[str, Any]) -> "Envelope":
        try:
            return cls(
                originator_id=data["originator_id"],
                canonical_bytes=base64.b64decode(data["canonical_bytes"]),
                digest=data["digest"],
                signature=bytes.fromhex(data["signature"]),
                timestamp=data["timestamp"],
                encryption_group=data.get("encryption_group"),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedBytes(f"bad envelope object: {exc}") from None


@dataclass(frozen=True)
class VerificationReport:
    """Three independent checks; this is a report, not an exception."""

    signature_ok: bool
    digest_ok: bool
    originator_known: bool

    @property
    def all_ok(self) -> bool:
        return self.signature_ok and self.digest_ok and self.originator_known


def _group_nonce(digest: str, group_id: str) -> bytes:
    # Unique per plaintext: the digest already commits to the content.
    return hashlib.sha256(f"{digest}:{group_id}".encode("utf-8")).digest()[:_NONCE_LEN]


def seal(
    message: WfMessage,
    signing_key: KeyPair,
    group_id: str | None = None,
    keyring: GroupKeyring | None = None,
) -> Envelope:
    """Sign a message; optionally encrypt its content for a trusted subgroup."""
    plaintext = codec.encode(message)
    digest = codec.digest_bytes(plaintext)
    signature = signing_key.sign(digest.encode("ascii"))
    content = plaintext
    if group_id is not None:
        if keyring is None or not keyring.has(group_id):
            raise UnknownKey(f"no key material for group {group_id!r}")
        nonce = _group_nonce(digest, group_id)
        cipher = AESGCM(keyring.get(group_id))
        content = nonce + cipher.encrypt(nonce, plaintext, digest.encode("ascii"))
    return Envelope(
        originator_id=message.originator_id,
        canonical_bytes=content,
        digest=digest,
        signature=signature,
        timestamp=codec.format_timestamp(message.timestamp),
        encryption_group=group_id,
    )


def open_envelope(envelope: Envelope, keyring: GroupKeyring | None = None) -> WfMessage:
    """Recover the message, decrypting subgroup content when the key is held."""
    if not envelope.is_encrypted:
        return envelope.message
    if keyring is None or not keyring.has(envelope.encryption_group):
        raise OpaqueCiphertext(
            f"content is encrypted for group {envelope.encryption_group!r}"
        )
    raw = envelope.canonical_bytes
    if len(raw) <= _NONCE_LEN:
        raise MalformedBytes("ciphertext too short")
    cipher = AESGCM(keyring.get(envelope.encryption_group))
    try:
        plaintext = cipher.decrypt(
            raw[:_NONCE_LEN], raw[_NONCE_LEN:], envelope.digest.encode("ascii")
        )
    except InvalidTag:
        raise MalformedBytes("ciphertext failed authentication") from None
    if codec.digest_bytes(plaintext) != envelope.digest:
        raise MalformedBytes("decrypted content does not match envelope digest")
    return codec.decode(plaintext)


def verify(
    envelope: Envelope,
    registry: KeyRegistry,
    keyring: GroupKeyring | None = None,
) -> VerificationReport:
    """Check signature, digest, and originator registration; never raises.

    For encrypted envelopes without the group key the digest cannot be
    recomputed; it is reported as ok because the signature already binds it
    and AES-GCM authenticates the ciphertext for anyone who can open it.
    """
    originator_known = registry.knows(envelope.originator_id)
    signature_ok = registry.verify(
        envelope.originator_id, envelope.signature, envelope.digest.encode("ascii")
    )
    if not envelope.is_encrypted:
        digest_ok = codec.digest_bytes(envelope.canonical_bytes) == envelope.digest
    elif keyring is not None and keyring.has(envelope.encryption_group):
        try:
            open_envelope(envelope, keyring)
            digest_ok = True
        except (MalformedBytes, OpaqueCiphertext):
            digest_ok = False
    else:
        digest_ok = True
    return VerificationReport(
        signature_ok=signature_ok,
        digest_ok=digest_ok,
        originator_known=originator_known,
    )
