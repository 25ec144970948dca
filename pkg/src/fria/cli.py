"""Command-line surface: validate, assess, whatif, diff, report, serve.

Exit codes: 0 success, 1 validation findings (including blocked rights from
assess: blocked is a result, not a crash), 2 usage error, 3 I/O or schema
error. Machine output goes to stdout, diagnostics to stderr; every
subcommand takes --json.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

from .core import FriaError, ValidationReport, parse_rank
from .ledger import canonical_json
from .lifecycle import (
    AssessmentCase,
    CaseStatus,
    compute_case_round,
    diff_assessments,
    mark_assessed,
    simulate_whatif,
    validate_case,
)
from .matrix import CombinationMatrix, MatrixSet, validate_matrix, validate_matrix_set
from .reporting import notification_export, render_report
from .scoping import ScopingRecord, validate_scoping
from .storage import (
    dump_case_json,
    load_case,
    load_question_pack,
    open_ledger,
    save_case,
)

EXIT_OK = 0
EXIT_FINDINGS = 1
EXIT_USAGE = 2
EXIT_IO = 3

# FriaError codes that mean the document could not be used at all.
_SCHEMA_ERROR_CODES = {
    "io-error",
    "malformed-document",
    "unknown-rank",
    "duplicate-id",
    "severity-target-forbidden",
    "unknown-case",
}


def _print_json(doc) -> None:
    print(json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False))


def _print_findings(report: ValidationReport, stream=sys.stderr) -> None:
    for f in report.findings:
        location = f" [{f.path}]" if f.path else ""
        print(f"{f.severity.upper()} {f.code}: {f.message}{location}", file=stream)


def _fail(message: str, code: int) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


# ---------------------------------------------------------------------------
# validate
# ---------------------------------------------------------------------------


def _detect_and_validate(path: Path) -> tuple[str, ValidationReport]:
    """Figure out what kind of document a file is and validate accordingly."""
    try:
        text = path.read_text("utf-8")
    except OSError as exc:
        raise FriaError("io-error", f"cannot read {path}: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FriaError("malformed-document", f"{path} is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise FriaError("malformed-document", f"{path} is not a JSON object")

    if "case_id" in doc and "schema_version" in doc:
        case = AssessmentCase.from_dict(doc)
        return "case", validate_case(case)
    if "matrices" in doc:
        matrix_set = MatrixSet.from_dict(doc)
        return "matrix-set", validate_matrix_set(matrix_set)
    if "cells" in doc:
        matrix = CombinationMatrix.from_dict(doc)
        return "matrix", validate_matrix(matrix)
    if "affected_groups" in doc or "deployer_process_description" in doc:
        scoping = ScopingRecord.from_dict(doc)
        return "scoping", validate_scoping(scoping)
    raise FriaError(
        "malformed-document",
        f"{path} is not a recognized document (case, matrix set, matrix or scoping)",
    )


def cmd_validate(args: argparse.Namespace) -> int:
    results = []
    fatal = False
    for raw in args.paths:
        path = Path(raw)
        try:
            kind, report = _detect_and_validate(path)
            results.append(
                {"path": str(path), "kind": kind, "fatal": None, **report.to_dict()}
            )
        except FriaError as exc:
            fatal = True
            results.append(
                {
                    "path": str(path),
                    "kind": "unreadable",
                    "fatal": exc.to_dict(),
                    "ok": False,
                    "findings": [],
                }
            )
    errors = sum(len([f for f in r["findings"] if f["severity"] == "error"]) for r in results)
    warnings = sum(
        len([f for f in r["findings"] if f["severity"] == "warning"]) for r in results
    )
    summary = {"files": results, "errors": errors, "warnings": warnings, "ok": not fatal and errors == 0}
    if args.json:
        _print_json(summary)
    else:
        for r in results:
            if r["fatal"]:
                print(f"{r['path']}: unreadable: {r['fatal']['message']}", file=sys.stderr)
                continue
            for f in r["findings"]:
                location = f" [{f['path']}]" if f["path"] else ""
                print(
                    f"{r['path']}: {f['severity'].upper()} {f['code']}: {f['message']}{location}",
                    file=sys.stderr,
                )
        print(f"{errors} errors, {warnings} warnings in {len(results)} file(s)")
    if fatal:
        return EXIT_IO
    return EXIT_OK if errors == 0 else EXIT_FINDINGS


# ---------------------------------------------------------------------------
# assess
# ---------------------------------------------------------------------------


def _summary_table(summary: dict) -> str:
    headers = ["right", "likelihood", "severity", "risk", "acceptability"]
    rows = [headers]
    for row in summary["rights"]:
        if not row.get("assessed"):
            rows.append([row["right_id"], "-", "-", "-", "not assessed"])
            continue
        rows.append(
            [
                row["right_id"],
                f"{row['likelihood']['label']} ({row['likelihood']['rank']})",
                f"{row['severity']['label']} ({row['severity']['rank']})",
                f"{row['risk']['label']} ({row['risk']['rank']})",
                row["acceptability"],
            ]
        )
    widths = [max(len(r[i]) for r in rows) for i in range(len(headers))]
    lines = []
    for i, row in enumerate(rows):
        lines.append("  ".join(cell.ljust(widths[j]) for j, cell in enumerate(row)).rstrip())
        if i == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines)


def cmd_assess(args: argparse.Namespace) -> int:
    path = Path(args.case)
    try:
        case = load_case(path)
    except FriaError as exc:
        return _fail(exc.message, EXIT_IO)

    report = validate_case(case)
    if not report.ok:
        _print_findings(report)
        if args.json:
            _print_json(report.to_dict())
        else:
            print("case does not validate; nothing was computed", file=sys.stderr)
        return EXIT_FINDINGS

    measure_ids = _split_ids(args.measures)
    try:
        ledger = open_ledger(path, case)
        summary = compute_case_round(
            case,
            measure_ids=measure_ids,
            reevaluate=args.round,
            ledger=ledger,
            actor=args.actor,
            now=args.now,
        )
        if (
            args.finalize
            and not summary["errors"]
            and not summary["blocked_rights"]
            and case.status is not CaseStatus.ASSESSED
        ):
            mark_assessed(case, ledger=ledger, actor=args.actor, now=args.now)
            summary["status"] = case.status.value
        save_case(case, path)
    except FriaError as exc:
        if exc.code == "unknown-measure":
            return _fail(exc.message, EXIT_USAGE)
        if exc.code in _SCHEMA_ERROR_CODES:
            return _fail(exc.message, EXIT_IO)
        return _fail(exc.message, EXIT_FINDINGS)
    except OSError as exc:
        return _fail(f"cannot write {path}: {exc}", EXIT_IO)

    if args.json:
        _print_json(summary)
    else:
        print(_summary_table(summary))
        for err in summary["errors"]:
            print(f"error [{err['right_id']}] {err['code']}: {err['message']}", file=sys.stderr)
        if summary["blocked_rights"]:
            print(
                "blocked: " + ", ".join(summary["blocked_rights"]),
                file=sys.stderr,
            )
    if summary["errors"] or summary["blocked_rights"]:
        return EXIT_FINDINGS
    return EXIT_OK


def _split_ids(raw: str | None) -> list[str]:
    if not raw:
        return []
    return [part.strip() for part in raw.split(",") if part.strip()]


# ---------------------------------------------------------------------------
# whatif
# ---------------------------------------------------------------------------


def _parse_override(raw: str, *, want_int: bool) -> tuple[str, str, object]:
    """right:variable=value with value an integer (reduce) or rank (rating)."""
    head, sep, value = raw.partition("=")
    right_id, sep2, variable = head.rpartition(":")
    if not sep or not sep2 or not right_id or not variable or not value:
        raise FriaError(
            "malformed-document",
            f"override {raw!r} must look like right-id:variable=value",
        )
    if want_int:
        try:
            return right_id, variable, int(value)
        except ValueError:
            raise FriaError(
                "malformed-document", f"override {raw!r} needs an integer step count"
            ) from None
    return right_id, variable, value


def _whatif_table(result: dict) -> str:
    headers = ["right", "risk now", "risk if", "delta", "acceptability now", "acceptability if"]
    rows = [headers]
    for row in result["rights"]:
        rows.append(
            [
                row["right_id"],
                f"{row['current']['risk']['label']} ({row['current']['risk']['rank']})",
                f"{row['hypothetical']['risk']['label']} ({row['hypothetical']['risk']['rank']})",
                f"{row['risk_delta_steps']:+d}" if row["changed"] else "0",
                row["current"]["acceptability"],
                row["hypothetical"]["acceptability"],
            ]
        )
    widths = [max(len(r[i]) for r in rows) for i in range(len(headers))]
    lines = []
    for i, row in enumerate(rows):
        lines.append("  ".join(cell.ljust(widths[j]) for j, cell in enumerate(row)).rstrip())
        if i == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines)


def cmd_whatif(args: argparse.Namespace) -> int:
    path = Path(args.case)
    try:
        before = hashlib.sha256(path.read_bytes()).hexdigest()
        case = load_case(path)
    except (FriaError, OSError) as exc:
        message = exc.message if isinstance(exc, FriaError) else str(exc)
        return _fail(message, EXIT_IO)

    report = validate_case(case)
    if not report.ok:
        _print_findings(report)
        return EXIT_FINDINGS

    measure_ids = _split_ids(args.measures)
    reductions: dict[str, dict[str, int]] = {}
    rating_overrides: dict[str, dict[str, str]] = {}
    try:
        for raw in args.reduce or []:
            right_id, variable, steps = _parse_override(raw, want_int=True)
            reductions.setdefault(right_id, {})[variable] = steps
        for raw in args.rating or []:
            right_id, variable, value = _parse_override(raw, want_int=False)
            parse_rank(str(value))  # reject junk ranks as a usage error up front
            rating_overrides.setdefault(right_id, {})[variable] = str(value)
        if not measure_ids and not reductions and not rating_overrides:
            raise FriaError(
                "malformed-document",
                "nothing to explore: pass --measures, --reduce or --rating",
            )
        result = simulate_whatif(
            case,
            measure_ids=measure_ids,
            reductions=reductions,
            rating_overrides=rating_overrides,
        )
    except FriaError as exc:
        return _fail(exc.message, EXIT_USAGE)

    after = hashlib.sha256(path.read_bytes()).hexdigest()
    if before != after:  # pragma: no cover - purity guard
        return _fail("what-if must never touch the case file", EXIT_IO)

    if args.json:
        _print_json(result)
    else:
        print(_whatif_table(result))
    return EXIT_OK


# ---------------------------------------------------------------------------
# diff
# ---------------------------------------------------------------------------


def cmd_diff(args: argparse.Namespace) -> int:
    try:
        old = load_case(Path(args.old))
        new = load_case(Path(args.new))
    except FriaError as exc:
        return _fail(exc.message, EXIT_IO)
    try:
        ledger = None if args.no_ledger else open_ledger(Path(args.new), new)
        report = diff_assessments(old, new, ledger=ledger, actor=args.actor, now=args.now)
    except FriaError as exc:
        return _fail(exc.message, EXIT_IO)

    if args.json:
        _print_json(report)
    else:
        for change in report["changes"]:
            marker = "material" if change["material"] else "cosmetic"
            print(f"{change['kind']:>8}  {marker:>8}  {change['path']}")
        if report["update_required"]:
            print("update required: material changes present")
        else:
            print("no material change")
    return EXIT_FINDINGS if report["update_required"] else EXIT_OK


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------


def cmd_report(args: argparse.Namespace) -> int:
    path = Path(args.case)
    try:
        case = load_case(path)
    except FriaError as exc:
        return _fail(exc.message, EXIT_IO)

    if args.notify:
        try:
            doc = notification_export(case)
        except FriaError as exc:
            if exc.code in ("blocked-rights-present", "case-not-assessed", "not-yet-assessed"):
                return _fail(exc.message, EXIT_FINDINGS)
            return _fail(exc.message, EXIT_IO)
        output = canonical_json(doc) if not args.json else json.dumps(
            doc, indent=2, sort_keys=True, ensure_ascii=False
        )
        _write_output(output, args.out)
        return EXIT_OK

    packs = []
    try:
        for raw in args.question_pack or []:
            packs.append(load_question_pack(Path(raw)))
        ledger = open_ledger(path, case)
        document = render_report(case, fmt=args.format, ledger=ledger, question_packs=packs)
    except FriaError as exc:
        if exc.code == "not-yet-assessed":
            return _fail(exc.message, EXIT_FINDINGS)
        return _fail(exc.message, EXIT_IO)
    if args.json and args.format == "markdown":
        _write_output(json.dumps({"format": "markdown", "document": document},
                                 indent=2, sort_keys=True, ensure_ascii=False), args.out)
    else:
        _write_output(document.rstrip("\n"), args.out)
    return EXIT_OK


def _write_output(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text + "\n", "utf-8")
    else:
        print(text)


# ---------------------------------------------------------------------------
# serve
# ---------------------------------------------------------------------------


def cmd_serve(args: argparse.Namespace) -> int:
    from .server import serve  # imported lazily; most CLI runs never need it

    host, _, port_text = args.addr.rpartition(":")
    if not host or not port_text.isdigit():
        return _fail(f"--addr must look like 127.0.0.1:8765, got {args.addr!r}", EXIT_USAGE)
    try:
        serve(
            case_dir=Path(args.case_dir),
            host=host,
            port=int(port_text),
            ui_dir=Path(args.ui) if args.ui else None,
        )
    except FriaError as exc:
        return _fail(exc.message, EXIT_IO)
    except OSError as exc:
        return _fail(f"cannot bind {args.addr}: {exc}", EXIT_IO)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fria",
        description="Fundamental rights impact assessment workbench "
        "(EU AI Act, Article 27).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate case, matrix or scoping documents")
    p.add_argument("paths", nargs="+", metavar="PATH")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("assess", help="compute round 0 or apply measures as a new round")
    p.add_argument("case", metavar="CASE_FILE")
    p.add_argument("--measures", help="comma-separated measure ids to apply")
    p.add_argument(
        "--round",
        action="store_true",
        help="append a fresh reevaluation round for every right "
        "(picks up newly accepted exclusion factors)",
    )
    p.add_argument(
        "--finalize",
        action="store_true",
        help="mark the case assessed afterwards if every right passed the gate",
    )
    p.add_argument("--actor", default="cli")
    p.add_argument("--now", help="override the timestamp (ISO-8601), mainly for reproducibility")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_assess)

    p = sub.add_parser("whatif", help="explore hypotheticals; never writes anything")
    p.add_argument("case", metavar="CASE_FILE")
    p.add_argument("--measures", help="comma-separated existing measure ids (proposed allowed)")
    p.add_argument(
        "--reduce",
        action="append",
        metavar="RIGHT:VARIABLE=STEPS",
        help="ad-hoc reduction, probability or exposure only",
    )
    p.add_argument(
        "--rating",
        action="append",
        metavar="RIGHT:VARIABLE=RANK",
        help="re-rate any variable hypothetically",
    )
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_whatif)

    p = sub.add_parser("diff", help="compare two snapshots of the same case")
    p.add_argument("old", metavar="OLD_CASE_FILE")
    p.add_argument("new", metavar="NEW_CASE_FILE")
    p.add_argument("--no-ledger", action="store_true", help="do not record the diff run")
    p.add_argument("--actor", default="cli")
    p.add_argument("--now")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_diff)

    p = sub.add_parser("report", help="render the assessment report or the notification")
    p.add_argument("case", metavar="CASE_FILE")
    p.add_argument("--format", choices=("markdown", "json"), default="markdown")
    p.add_argument("--notify", action="store_true", help="market-surveillance notification JSON")
    p.add_argument("--question-pack", action="append", metavar="PACK_FILE")
    p.add_argument("--out", metavar="OUT_FILE")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("serve", help="serve the workbench protocol on loopback")
    p.add_argument("--addr", default="127.0.0.1:8765")
    p.add_argument("--case-dir", required=True)
    p.add_argument("--ui", help="directory of static workbench files to serve at /")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors already; normalize anything else
        return EXIT_USAGE if exc.code not in (0,) else 0
    try:
        return args.func(args)
    except FriaError as exc:  # uncaught domain errors are schema-level failures
        return _fail(exc.message, EXIT_IO)


if __name__ == "__main__":
    sys.exit(main())
