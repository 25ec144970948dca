"""Loopback JSON/HTTP service backing the workbench UI.

Thin wiring over the engine: every route loads a fresh case snapshot, runs
the corresponding operation, and returns its result. Writes take the case's
lock (one writer per case); reads run concurrently. Stdlib HTTP only: a
desk-scale tool has no business pulling in a web framework.
"""

from __future__ import annotations

import json
import re
import sys
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Optional

from .core import FriaError, VariableRating
from .ledger import canonical_json
from .lifecycle import (
    AssessmentCase,
    CaseStatus,
    compute_case_round,
    mark_assessed,
    set_rating,
    simulate_whatif,
    validate_case,
)
from .reporting import radial_graph_data, render_report
from .storage import CaseStore

_STATUS_BY_CODE = {
    "unknown-case": 404,
    "io-error": 404,
    "version-conflict": 409,
    "chain-mismatch": 409,
    "blocked-rights-present": 409,
    "case-not-assessed": 409,
    "not-yet-assessed": 409,
    "round-exists": 409,
}

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".mjs": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".json": "application/json; charset=utf-8",
    ".svg": "image/svg+xml",
    ".map": "application/json; charset=utf-8",
    ".png": "image/png",
    ".ico": "image/x-icon",
}

_CASE_ROUTE = re.compile(
    r"^/cases/(?P<case_id>[^/]+)(?P<rest>/validate|/rounds|/whatif|/report|/radial|/ledger/verify)?$"
)


class WorkbenchHandler(BaseHTTPRequestHandler):
    server_version = "fria-workbench/0.1"
    store: CaseStore  # injected by make_server
    ui_dir: Optional[Path] = None

    # --- plumbing -----------------------------------------------------------

    def log_message(self, fmt, *args):  # route logs to stderr, not stdout
        sys.stderr.write("%s - %s\n" % (self.address_string(), fmt % args))

    def _cors(self):
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")

    def _respond(self, status: int, body: bytes, content_type: str):
        self.send_response(status)
        self._cors()
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _json(self, doc, status: int = 200):
        self._respond(status, (canonical_json(doc) + "\n").encode("utf-8"),
                      "application/json; charset=utf-8")

    def _error(self, exc: FriaError):
        status = _STATUS_BY_CODE.get(exc.code, 400)
        self._json(exc.to_dict(), status)

    def _body(self) -> dict:
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length) if length else b""
        if not raw:
            return {}
        try:
            doc = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise FriaError("malformed-document", f"request body is not valid JSON: {exc}")
        if not isinstance(doc, dict):
            raise FriaError("malformed-document", "request body must be a JSON object")
        return doc

    def _query(self) -> dict[str, str]:
        _, _, query = self.path.partition("?")
        params: dict[str, str] = {}
        for pair in query.split("&"):
            if not pair:
                continue
            key, _, value = pair.partition("=")
            params[key] = value
        return params

    # --- routing ------------------------------------------------------------

    def do_OPTIONS(self):
        self.send_response(204)
        self._cors()
        self.send_header("Content-Length", "0")
        self.end_headers()

    def do_GET(self):
        try:
            self._route("GET")
        except FriaError as exc:
            self._error(exc)
        except Exception as exc:  # noqa: BLE001 - last-resort 500
            self._json({"code": "internal-error", "message": str(exc), "paths": []}, 500)

    def do_POST(self):
        try:
            self._route("POST")
        except FriaError as exc:
            self._error(exc)
        except Exception as exc:  # noqa: BLE001
            self._json({"code": "internal-error", "message": str(exc), "paths": []}, 500)

    def _route(self, method: str):
        path = self.path.partition("?")[0]
        if path == "/cases" and method == "GET":
            self._json({"cases": self.store.list_cases()})
            return
        match = _CASE_ROUTE.match(path)
        if match:
            case_id = match.group("case_id")
            rest = match.group("rest") or ""
            handler = {
                ("GET", ""): self._get_case,
                ("POST", "/validate"): self._post_validate,
                ("POST", "/rounds"): self._post_rounds,
                ("POST", "/whatif"): self._post_whatif,
                ("GET", "/report"): self._get_report,
                ("GET", "/radial"): self._get_radial,
                ("GET", "/ledger/verify"): self._get_ledger_verify,
            }.get((method, rest))
            if handler is None:
                raise FriaError("malformed-document", f"unsupported route {method} {path}")
            handler(case_id)
            return
        if method == "GET" and self.ui_dir is not None:
            self._serve_static(path)
            return
        raise FriaError("unknown-case", f"no such route: {method} {path}")

    # --- case routes ----------------------------------------------------------

    def _get_case(self, case_id: str):
        case, _ = self.store.find(case_id)
        self._json(case.to_dict())

    def _post_validate(self, case_id: str):
        case, _ = self.store.find(case_id)
        self._json(validate_case(case).to_dict())

    def _post_rounds(self, case_id: str):
        body = self._body()
        actor = str(body.get("actor", "workbench"))
        now = body.get("now")
        if now is not None and not isinstance(now, str):
            raise FriaError("malformed-document", "now must be an ISO-8601 string")
        with self.store.write_lock(case_id):
            case, path = self.store.find(case_id)
            expected = body.get("expected_version")
            if expected is not None and expected != case.version:
                raise FriaError(
                    "version-conflict",
                    f"case is at version {case.version}, request expected {expected}",
                )
            ledger = self.store.ledger(case, path)
            self._apply_ratings(case, body, ledger, actor, now)
            measure_ids = body.get("measure_ids") or []
            if not isinstance(measure_ids, list):
                raise FriaError("malformed-document", "measure_ids must be a list")
            reevaluate = body.get("reevaluate")
            if reevaluate is None:
                # Bare POST /rounds means "compute the next round": round 0
                # where missing, otherwise a fresh reevaluation.
                has_unassessed = any(not ra.rounds for ra in case.right_assessments)
                reevaluate = not has_unassessed and not measure_ids
            summary = compute_case_round(
                case,
                measure_ids=[str(m) for m in measure_ids],
                reevaluate=bool(reevaluate),
                ledger=ledger,
                actor=actor,
                now=now,
            )
            if (
                body.get("finalize")
                and not summary["errors"]
                and not summary["blocked_rights"]
                and case.status is not CaseStatus.ASSESSED
            ):
                mark_assessed(case, ledger=ledger, actor=actor, now=now)
                summary["status"] = case.status.value
            self.store.save(case, path)
            summary["version"] = case.version
        self._json(summary)

    def _apply_ratings(
        self, case: AssessmentCase, body: dict, ledger, actor: str, now: Optional[str]
    ):
        ratings = body.get("ratings") or {}
        if not isinstance(ratings, dict):
            raise FriaError("malformed-document", "ratings must map right ids to ratings")
        for right_id, per_variable in ratings.items():
            if not isinstance(per_variable, dict):
                raise FriaError(
                    "malformed-document", f"ratings for {right_id!r} must be an object"
                )
            for variable, raw in per_variable.items():
                if isinstance(raw, dict) and "variable" not in raw:
                    raw = {**raw, "variable": variable}
                rating = VariableRating.from_dict(raw)
                set_rating(case, right_id, rating, ledger=ledger, actor=actor, now=now)

    def _post_whatif(self, case_id: str):
        body = self._body()
        case, _ = self.store.find(case_id)
        result = simulate_whatif(
            case,
            measure_ids=[str(m) for m in body.get("measure_ids") or []],
            reductions=body.get("reductions") or {},
            rating_overrides=body.get("rating_overrides") or {},
        )
        self._json(result)

    def _get_report(self, case_id: str):
        params = self._query()
        fmt = params.get("format", "markdown")
        case, path = self.store.find(case_id)
        ledger = self.store.read_ledger(case, path)
        document = render_report(case, fmt=fmt, ledger=ledger)
        if fmt == "json":
            self._respond(200, document.encode("utf-8"), "application/json; charset=utf-8")
        else:
            self._respond(200, document.encode("utf-8"), "text/markdown; charset=utf-8")

    def _get_radial(self, case_id: str):
        params = self._query()
        rounds = None
        if "rounds" in params and params["rounds"]:
            try:
                rounds = [int(r) for r in params["rounds"].split(",")]
            except ValueError:
                raise FriaError(
                    "malformed-document", f"rounds must be integers, got {params['rounds']!r}"
                ) from None
        case, _ = self.store.find(case_id)
        self._json(radial_graph_data(case, rounds))

    def _get_ledger_verify(self, case_id: str):
        case, path = self.store.find(case_id)
        ledger = self.store.read_ledger(case, path)
        self._json(ledger.verify())

    # --- static UI ------------------------------------------------------------

    def _serve_static(self, path: str):
        assert self.ui_dir is not None
        relative = path.lstrip("/") or "index.html"
        target = (self.ui_dir / relative).resolve()
        root = self.ui_dir.resolve()
        if root not in target.parents and target != root:
            raise FriaError("unknown-case", "path escapes the UI directory")
        if target.is_dir():
            target = target / "index.html"
        if not target.is_file():
            raise FriaError("unknown-case", f"no such file: {path}")
        content_type = _CONTENT_TYPES.get(target.suffix, "application/octet-stream")
        self._respond(200, target.read_bytes(), content_type)


class WorkbenchServer(ThreadingHTTPServer):
    # finish in-flight requests (and their ledger appends) before closing
    daemon_threads = False
    allow_reuse_address = True


def make_server(
    case_dir: Path, host: str = "127.0.0.1", port: int = 0, ui_dir: Optional[Path] = None
) -> WorkbenchServer:
    store = CaseStore(Path(case_dir))

    class BoundHandler(WorkbenchHandler):
        pass

    BoundHandler.store = store
    BoundHandler.ui_dir = Path(ui_dir) if ui_dir else None
    return WorkbenchServer((host, port), BoundHandler)


def serve(
    case_dir: Path, host: str = "127.0.0.1", port: int = 8765, ui_dir: Optional[Path] = None
) -> None:
    server = make_server(case_dir, host, port, ui_dir)
    bound_host, bound_port = server.server_address[:2]
    print(f"fria workbench serving on http://{bound_host}:{bound_port}/", file=sys.stderr)
    if ui_dir:
        print(f"serving UI from {ui_dir}", file=sys.stderr)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        print("shutting down", file=sys.stderr)
    finally:
        server.server_close()
