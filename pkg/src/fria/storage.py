"""File persistence: case documents, ledgers, matrix sets, catalogs, question packs.

Case files are canonical JSON written atomically (temp file in the same
directory, then rename), so a crashed write never leaves a half-document.
Each case keeps its ledger in a sibling newline-delimited-JSON file.
"""

from __future__ import annotations

import json
import os
import tempfile
import threading
from pathlib import Path
from typing import Iterator, Optional

from .core import FriaError, RightsCatalog, load_rights_catalog
from .ledger import FileBackedLedger, Ledger
from .lifecycle import AssessmentCase
from .matrix import MatrixSet


def dump_case_json(case: AssessmentCase) -> str:
    """Canonical on-disk form: sorted keys, two-space indent, trailing newline."""
    return json.dumps(case.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def write_atomic(path: Path, text: str) -> None:
    path = Path(path)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            f.write(text)
            f.flush()
            os.fsync(f.fileno())
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise


def _load_json(path: Path, what: str) -> dict:
    path = Path(path)
    if not path.exists():
        raise FriaError("io-error", f"{what} file not found: {path}")
    try:
        text = path.read_text("utf-8")
    except OSError as exc:
        raise FriaError("io-error", f"cannot read {what} file {path}: {exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FriaError(
            "malformed-document", f"{what} file {path} is not valid JSON: {exc}"
        ) from None


def load_case(path: Path) -> AssessmentCase:
    return AssessmentCase.from_dict(_load_json(path, "case"))


def save_case(case: AssessmentCase, path: Path, *, bump_version: bool = True) -> None:
    if bump_version:
        case.version += 1
    write_atomic(Path(path), dump_case_json(case))


def ledger_path_for(case_path: Path, case: AssessmentCase) -> Path:
    ref = case.ledger_ref or f"{case.case_id}.ledger.jsonl"
    return Path(case_path).parent / ref


def open_ledger(case_path: Path, case: AssessmentCase) -> FileBackedLedger:
    return FileBackedLedger(ledger_path_for(case_path, case))


def load_matrix_set_file(path: Path) -> MatrixSet:
    return MatrixSet.from_dict(_load_json(path, "matrix set"))


def load_catalog_file(path: Path) -> RightsCatalog:
    return load_rights_catalog(_load_json(path, "rights catalog"))


def load_question_pack(path: Path) -> dict:
    doc = _load_json(path, "question pack")
    if not isinstance(doc.get("pack_id"), str) or not isinstance(doc.get("prompts"), list):
        raise FriaError(
            "malformed-document",
            f"question pack {path} needs a pack_id and a prompts list",
        )
    return doc


class CaseStore:
    """Directory of case files with per-case write serialization.

    Any number of readers may load snapshots concurrently; writers take the
    case's lock so each case has one writer at a time.
    """

    def __init__(self, directory: Path):
        self.directory = Path(directory)
        if not self.directory.is_dir():
            raise FriaError("io-error", f"case directory not found: {self.directory}")
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def _lock_for(self, case_id: str) -> threading.Lock:
        with self._locks_guard:
            if case_id not in self._locks:
                self._locks[case_id] = threading.Lock()
            return self._locks[case_id]

    def case_paths(self) -> Iterator[Path]:
        for path in sorted(self.directory.glob("*.json")):
            if path.name.endswith(".ledger.jsonl"):
                continue
            yield path

    def list_cases(self) -> list[dict]:
        """Summaries of every loadable case file; unloadable ones are skipped."""
        summaries = []
        for path in self.case_paths():
            try:
                case = load_case(path)
            except FriaError:
                continue
            summaries.append(
                {
                    "case_id": case.case_id,
                    "title": case.title,
                    "status": case.status.value,
                    "version": case.version,
                    "rights": len(case.right_assessments),
                    "file": path.name,
                }
            )
        return summaries

    def find(self, case_id: str) -> tuple[AssessmentCase, Path]:
        for path in self.case_paths():
            try:
                case = load_case(path)
            except FriaError:
                continue
            if case.case_id == case_id:
                return case, path
        raise FriaError("unknown-case", f"no case {case_id!r} in {self.directory}")

    def write_lock(self, case_id: str) -> threading.Lock:
        return self._lock_for(case_id)

    def save(self, case: AssessmentCase, path: Path) -> None:
        save_case(case, path)

    def ledger(self, case: AssessmentCase, path: Path) -> FileBackedLedger:
        return open_ledger(path, case)

    def read_ledger(self, case: AssessmentCase, path: Path) -> Ledger:
        ledger_path = ledger_path_for(path, case)
        if not ledger_path.exists():
            return Ledger()
        return Ledger.from_jsonl(ledger_path.read_text("utf-8"))
