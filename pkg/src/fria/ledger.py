"""Append-only accountability ledger with a SHA-256 hash chain.

Every state-changing operation on a case writes exactly one entry. Entries
are never edited or removed; verification replays the chain and reports the
first sequence number where it breaks.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Optional

from .core import FriaError, _require_mapping

GENESIS_HASH = "0" * 64

LEDGER_ACTIONS = (
    "matrix-choice",
    "rating-set",
    "round-computed",
    "measure-applied",
    "exclusion-accepted",
    "diff-run",
    "status-change",
    "review-recorded",
    "reuse-linked",
)


def canonical_json(value) -> str:
    """Stable serialization used for hashing: sorted keys, no whitespace."""
    return json.dumps(value, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def payload_hash(payload: dict) -> str:
    return hashlib.sha256(canonical_json(payload).encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class LedgerEntry:
    sequence_number: int
    timestamp: str
    actor: str
    action: str
    summary: str
    payload: dict
    content_hash: str
    prev_hash: str

    def to_dict(self) -> dict:
        return {
            "sequence_number": self.sequence_number,
            "timestamp": self.timestamp,
            "actor": self.actor,
            "action": self.action,
            "summary": self.summary,
            "payload": self.payload,
            "content_hash": self.content_hash,
            "prev_hash": self.prev_hash,
        }

    @staticmethod
    def from_dict(d: dict) -> "LedgerEntry":
        _require_mapping(d, "ledger entry")
        for key in ("sequence_number", "timestamp", "actor", "action", "payload",
                    "content_hash", "prev_hash"):
            if key not in d:
                raise FriaError("malformed-document", f"ledger entry is missing {key!r}")
        return LedgerEntry(
            sequence_number=int(d["sequence_number"]),
            timestamp=str(d["timestamp"]),
            actor=str(d["actor"]),
            action=str(d["action"]),
            summary=str(d.get("summary", "")),
            payload=d["payload"],
            content_hash=str(d["content_hash"]),
            prev_hash=str(d["prev_hash"]),
        )


def entry_hash(entry: LedgerEntry) -> str:
    """Hash over the whole entry; the next entry's prev_hash must equal this."""
    return hashlib.sha256(canonical_json(entry.to_dict()).encode("utf-8")).hexdigest()


@dataclass
class Ledger:
    """In-memory chain. Append is the only mutation."""

    entries: list[LedgerEntry] = field(default_factory=list)

    @property
    def head_hash(self) -> str:
        return entry_hash(self.entries[-1]) if self.entries else GENESIS_HASH

    def __len__(self) -> int:
        return len(self.entries)

    def append(self, entry: LedgerEntry) -> LedgerEntry:
        if entry.action not in LEDGER_ACTIONS:
            raise FriaError(
                "malformed-document",
                f"unknown ledger action {entry.action!r}",
            )
        if entry.sequence_number != len(self.entries):
            raise FriaError(
                "chain-mismatch",
                f"expected sequence number {len(self.entries)}, got {entry.sequence_number}",
            )
        if entry.prev_hash != self.head_hash:
            raise FriaError(
                "chain-mismatch",
                f"entry {entry.sequence_number} does not chain to the current head",
            )
        if entry.content_hash != payload_hash(entry.payload):
            raise FriaError(
                "chain-mismatch",
                f"entry {entry.sequence_number} content hash does not match its payload",
            )
        self.entries.append(entry)
        return entry

    def record(
        self, action: str, actor: str, summary: str, payload: dict, timestamp: str
    ) -> LedgerEntry:
        """Build a correctly chained entry and append it."""
        entry = LedgerEntry(
            sequence_number=len(self.entries),
            timestamp=timestamp,
            actor=actor,
            action=action,
            summary=summary,
            payload=payload,
            content_hash=payload_hash(payload),
            prev_hash=self.head_hash,
        )
        return self.append(entry)

    def verify(self) -> dict:
        """Replay the chain; never raises, reports the first break instead."""
        prev = GENESIS_HASH
        for i, entry in enumerate(self.entries):
            if entry.sequence_number != i:
                return _broken(i, f"sequence number {entry.sequence_number} where {i} expected")
            if entry.action not in LEDGER_ACTIONS:
                return _broken(i, f"unknown action {entry.action!r}")
            if entry.prev_hash != prev:
                return _broken(i, "prev_hash does not match the preceding entry")
            if entry.content_hash != payload_hash(entry.payload):
                return _broken(i, "content hash does not match the payload")
            prev = entry_hash(entry)
        return {"ok": True, "length": len(self.entries), "head_hash": prev, "first_break": None, "reason": None}

    def to_jsonl(self) -> str:
        return "".join(canonical_json(e.to_dict()) + "\n" for e in self.entries)

    @staticmethod
    def from_jsonl(text: str) -> "Ledger":
        ledger = Ledger()
        for line_no, line in enumerate(text.splitlines()):
            if not line.strip():
                continue
            try:
                doc = json.loads(line)
            except json.JSONDecodeError as exc:
                raise FriaError(
                    "malformed-document", f"ledger line {line_no} is not valid JSON: {exc}"
                ) from None
            # Entries load even if the chain is broken; verify() is the judge.
            ledger.entries.append(LedgerEntry.from_dict(doc))
        return ledger


def _broken(seq: int, reason: str) -> dict:
    return {"ok": False, "length": None, "head_hash": None, "first_break": seq, "reason": reason}


class FileBackedLedger(Ledger):
    """Ledger that writes each appended entry through to a JSONL file."""

    def __init__(self, path: Path):
        super().__init__()
        self.path = Path(path)
        if self.path.exists():
            loaded = Ledger.from_jsonl(self.path.read_text("utf-8"))
            self.entries = loaded.entries

    def append(self, entry: LedgerEntry) -> LedgerEntry:
        super().append(entry)
        with open(self.path, "a", encoding="utf-8") as f:
            f.write(canonical_json(entry.to_dict()) + "\n")
            f.flush()
        return entry
