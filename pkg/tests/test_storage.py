"""Atomic persistence, case store, loaders."""

import json
import threading

import pytest

from fria.core import FriaError
from fria.lifecycle import compute_case_round
from fria.storage import (
    CaseStore,
    dump_case_json,
    ledger_path_for,
    load_case,
    load_matrix_set_file,
    load_question_pack,
    open_ledger,
    save_case,
    write_atomic,
)

from conftest import DATA_DIR, T0, make_case


class TestAtomicWrite:
    def test_writes_and_replaces(self, tmp_path):
        target = tmp_path / "out.json"
        write_atomic(target, "first\n")
        write_atomic(target, "second\n")
        assert target.read_text() == "second\n"
        # no temp files left behind
        assert list(tmp_path.iterdir()) == [target]

    def test_failure_leaves_no_temp(self, tmp_path, monkeypatch):
        target = tmp_path / "out.json"
        write_atomic(target, "keep\n")

        def explode(src, dst):
            raise OSError("disk says no")

        import fria.storage as storage

        monkeypatch.setattr(storage.os, "replace", explode)
        with pytest.raises(OSError):
            write_atomic(target, "lost\n")
        monkeypatch.undo()
        assert target.read_text() == "keep\n"
        assert list(tmp_path.iterdir()) == [target]


class TestCaseFiles:
    def test_save_load_round_trip(self, tmp_path, case):
        path = tmp_path / "case.json"
        save_case(case, path, bump_version=False)
        clone = load_case(path)
        assert dump_case_json(clone) == dump_case_json(case)

    def test_save_bumps_version(self, tmp_path, case):
        path = tmp_path / "case.json"
        save_case(case, path)
        assert load_case(path).version == 2

    def test_pretty_and_sorted(self, tmp_path, case):
        path = tmp_path / "case.json"
        save_case(case, path, bump_version=False)
        text = path.read_text()
        assert text.endswith("\n")
        doc = json.loads(text)
        assert list(doc) == sorted(doc)

    def test_missing_file(self, tmp_path):
        with pytest.raises(FriaError) as ei:
            load_case(tmp_path / "ghost.json")
        assert ei.value.code == "io-error"

    def test_malformed_file(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(FriaError) as ei:
            load_case(path)
        assert ei.value.code == "malformed-document"

    def test_committed_fixture_loads(self, case_path):
        case = load_case(case_path)
        assert case.case_id == "fria-2026-0042"
        assert len(case.right_assessments) == 2


class TestLedgerPaths:
    def test_sibling_ledger(self, tmp_path, case):
        path = tmp_path / "case.json"
        assert ledger_path_for(path, case) == tmp_path / "fria-2026-0042.ledger.jsonl"

    def test_open_ledger_writes_sibling(self, tmp_path, case):
        path = tmp_path / "case.json"
        ledger = open_ledger(path, case)
        ledger.record("matrix-choice", "assessor", "default", {"set_id": "d"}, T0)
        assert (tmp_path / "fria-2026-0042.ledger.jsonl").exists()


class TestLoaders:
    def test_matrix_set_file(self):
        from pathlib import Path

        path = Path(__file__).parents[1] / "src" / "fria" / "data" / "default_matrix_set.json"
        s = load_matrix_set_file(path)
        assert s.set_id == "default-4x4-max"

    def test_question_pack(self):
        pack = load_question_pack(DATA_DIR / "pack_social_benefits.json")
        assert pack["pack_id"] == "social-benefits-1"
        assert len(pack["prompts"]) == 4

    def test_question_pack_shape_enforced(self, tmp_path):
        bad = tmp_path / "pack.json"
        bad.write_text('{"pack_id": "x"}', encoding="utf-8")
        with pytest.raises(FriaError) as ei:
            load_question_pack(bad)
        assert ei.value.code == "malformed-document"


class TestCaseStore:
    def make_store(self, tmp_path, n=2):
        for i in range(n):
            case = make_case(f"fria-2026-{i:04d}")
            save_case(case, tmp_path / f"case-{i}.json", bump_version=False)
        return CaseStore(tmp_path)

    def test_missing_directory(self, tmp_path):
        with pytest.raises(FriaError) as ei:
            CaseStore(tmp_path / "nowhere")
        assert ei.value.code == "io-error"

    def test_list_cases(self, tmp_path):
        store = self.make_store(tmp_path)
        listed = store.list_cases()
        assert [c["case_id"] for c in listed] == ["fria-2026-0000", "fria-2026-0001"]

    def test_list_skips_unloadable(self, tmp_path):
        store = self.make_store(tmp_path)
        (tmp_path / "junk.json").write_text("{", encoding="utf-8")
        assert len(store.list_cases()) == 2

    def test_find(self, tmp_path):
        store = self.make_store(tmp_path)
        case, path = store.find("fria-2026-0001")
        assert case.case_id == "fria-2026-0001"
        assert path.name == "case-1.json"

    def test_find_unknown(self, tmp_path):
        store = self.make_store(tmp_path)
        with pytest.raises(FriaError) as ei:
            store.find("fria-2099-0000")
        assert ei.value.code == "unknown-case"

    def test_ledger_files_not_listed_as_cases(self, tmp_path):
        store = self.make_store(tmp_path, n=1)
        case, path = store.find("fria-2026-0000")
        ledger = store.ledger(case, path)
        compute_case_round(case, ledger=ledger, now=T0)
        store.save(case, path)
        assert len(store.list_cases()) == 1

    def test_write_lock_is_per_case(self, tmp_path):
        store = self.make_store(tmp_path)
        a = store.write_lock("fria-2026-0000")
        b = store.write_lock("fria-2026-0001")
        assert a is not b
        assert store.write_lock("fria-2026-0000") is a

    def test_lock_serialises_writers(self, tmp_path):
        store = self.make_store(tmp_path, n=1)
        order = []

        def writer(tag):
            with store.write_lock("fria-2026-0000"):
                order.append(f"{tag}-in")
                order.append(f"{tag}-out")

        threads = [threading.Thread(target=writer, args=(t,)) for t in "ab"]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        # never interleaved: each -in is immediately followed by its -out
        assert order in (["a-in", "a-out", "b-in", "b-out"],
                         ["b-in", "b-out", "a-in", "a-out"])

    def test_read_ledger_empty_when_missing(self, tmp_path):
        store = self.make_store(tmp_path, n=1)
        case, path = store.find("fria-2026-0000")
        assert store.read_ledger(case, path).entries == []
