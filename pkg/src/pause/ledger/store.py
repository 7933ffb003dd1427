"""Chain persistence: one JSON file per block, named by zero-padded height.

Block files are written in one canonical JSON form and must load back in it
byte for byte: representational slack (whitespace, base64 tail bits, hex
case) would otherwise let single-byte file mutations hide from the hash
checks.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Sequence

from pause.errors import MalformedBytes
from pause.ledger.entries import Block
from pause.ledger.verify import ChainReport, verify_chain

_WIDTH = 8


def block_filename(height: int) -> str:
    return f"{height:0{_WIDTH}d}.json"


def _canonical_text(block: Block) -> str:
    return json.dumps(block.to_json_dict(), indent=2, sort_keys=True)


def save_chain(chain: Sequence[Block], directory: str | Path) -> None:
    path = Path(directory)
    path.mkdir(parents=True, exist_ok=True)
    for stale in path.glob("*.json"):
        stale.unlink()
    for block in chain:
        (path / block_filename(block.height)).write_text(_canonical_text(block))


def load_chain(directory: str | Path, strict: bool = True) -> list[Block]:
    path = Path(directory)
    if not path.is_dir():
        raise MalformedBytes(f"{directory} is not a chain directory")
    blocks: list[Block] = []
    for block_file in sorted(path.glob("*.json")):
        text = block_file.read_text()
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MalformedBytes(f"{block_file.name}: {exc}") from None
        block = Block.from_json_dict(data)
        if strict and _canonical_text(block) != text:
            raise MalformedBytes(f"{block_file.name}: not in canonical block form")
        blocks.append(block)
    return blocks


def verify_chain_dir(directory: str | Path) -> ChainReport:
    """Whole-directory verification: parse strictly, then verify_chain.

    A file that cannot be parsed (or is non-canonical) reports the height
    encoded in its name, so byte-level mutations land on the right block.
    """
    path = Path(directory)
    if not path.is_dir():
        return ChainReport(ok=False, broken_at=None, reason="not a directory")
    blocks: list[Block] = []
    for block_file in sorted(path.glob("*.json")):
        try:
            height = int(block_file.stem)
        except ValueError:
            return ChainReport(
                ok=False, broken_at=None, reason=f"{block_file.name}: bad filename"
            )
        try:
            text = block_file.read_bytes().decode("utf-8")
            data = json.loads(text)
            block = Block.from_json_dict(data)
        except (MalformedBytes, json.JSONDecodeError, UnicodeDecodeError) as exc:
            return ChainReport(ok=False, broken_at=height, reason=str(exc))
        if _canonical_text(block) != text:
            return ChainReport(
                ok=False, broken_at=height, reason="not in canonical block form"
            )
        blocks.append(block)
    return verify_chain(blocks)
