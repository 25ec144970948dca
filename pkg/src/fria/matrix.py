"""Combination matrices: configurable lookup tables over ordinal scales.

A combination matrix folds two ordinal inputs into one outcome by table
lookup. Nothing here is arithmetic: validity is completeness plus
monotonicity plus anchored corners, and evaluation is a dictionary access.
Matrices are data, loaded from documents; the engine never hard-codes a
cell.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from importlib import resources
from typing import Optional, Union

from .core import (
    FriaError,
    OrdinalRank,
    RANK_VALUES,
    ValidationReport,
    parse_rank,
    _require_mapping,
)


class MatrixProvenanceKind(str, Enum):
    DEFAULT = "default"
    CUSTOM = "custom"


@dataclass(frozen=True)
class MatrixProvenance:
    """Who designed the table and why; part of the accountability trail."""

    kind: MatrixProvenanceKind = MatrixProvenanceKind.CUSTOM
    author: str = ""
    rationale: str = ""

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "author": self.author, "rationale": self.rationale}

    @staticmethod
    def from_dict(d: Optional[dict]) -> "MatrixProvenance":
        if d is None:
            return MatrixProvenance()
        _require_mapping(d, "matrix provenance")
        kind_raw = d.get("kind", "custom")
        try:
            kind = MatrixProvenanceKind(kind_raw)
        except ValueError:
            raise FriaError(
                "malformed-document",
                f"matrix provenance kind must be 'default' or 'custom', got {kind_raw!r}",
            ) from None
        return MatrixProvenance(
            kind=kind, author=str(d.get("author", "")), rationale=str(d.get("rationale", ""))
        )


@dataclass(frozen=True)
class MatrixCellEntry:
    """One authored cell: position, its descriptive label and its outcome rank."""

    row: str
    col: str
    label: str
    outcome: OrdinalRank

    def to_dict(self) -> dict:
        return {"row": self.row, "col": self.col, "label": self.label, "outcome": self.outcome.value}


@dataclass(frozen=True)
class CellOutcome:
    """Result of a lookup: the cell's label verbatim plus its ordinal rank."""

    label: str
    rank: OrdinalRank

    def to_dict(self) -> dict:
        return {"label": self.label, "rank": self.rank.value}

    @staticmethod
    def from_dict(d: dict) -> "CellOutcome":
        _require_mapping(d, "cell outcome")
        return CellOutcome(label=str(d.get("label", "")), rank=parse_rank(d.get("rank")))


Level = Union[OrdinalRank, str]


def _level_key(level: Level) -> str:
    return level.value if isinstance(level, OrdinalRank) else str(level)


@dataclass(frozen=True)
class CombinationMatrix:
    name: str
    row_variable: str
    col_variable: str
    row_levels: tuple[str, ...]
    col_levels: tuple[str, ...]
    cells: tuple[MatrixCellEntry, ...]
    provenance: MatrixProvenance = MatrixProvenance()
    # lookup table built once; duplicates keep the last entry, which the
    # validator reports rather than silently accepting
    _lookup: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        lookup = {(c.row, c.col): c for c in self.cells}
        object.__setattr__(self, "_lookup", lookup)

    def cell(self, row: Level, col: Level) -> MatrixCellEntry:
        key = (_level_key(row), _level_key(col))
        entry = self._lookup.get(key)
        if entry is None:
            raise FriaError(
                "axis-out-of-range",
                f"matrix {self.name!r} has no cell at "
                f"(row={key[0]!r}, col={key[1]!r})",
            )
        return entry

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "row_variable": self.row_variable,
            "col_variable": self.col_variable,
            "row_levels": list(self.row_levels),
            "col_levels": list(self.col_levels),
            "cells": [c.to_dict() for c in self.cells],
            "provenance": self.provenance.to_dict(),
        }

    @staticmethod
    def from_dict(d: dict) -> "CombinationMatrix":
        _require_mapping(d, "matrix")
        for key in ("name", "row_variable", "col_variable", "row_levels", "col_levels", "cells"):
            if key not in d:
                raise FriaError("malformed-document", f"matrix document is missing {key!r}")
        rows = d["row_levels"]
        cols = d["col_levels"]
        if not isinstance(rows, list) or not isinstance(cols, list):
            raise FriaError("malformed-document", "matrix axis levels must be lists")
        raw_cells = d["cells"]
        if not isinstance(raw_cells, list):
            raise FriaError("malformed-document", "matrix cells must be a list")
        cells = []
        for i, raw in enumerate(raw_cells):
            _require_mapping(raw, f"cells[{i}]")
            if "row" not in raw or "col" not in raw:
                raise FriaError("malformed-document", f"cells[{i}] is missing row or col")
            cells.append(
                MatrixCellEntry(
                    row=str(raw["row"]),
                    col=str(raw["col"]),
                    label=str(raw.get("label", "")),
                    outcome=parse_rank(raw.get("outcome")),
                )
            )
        return CombinationMatrix(
            name=str(d["name"]),
            row_variable=str(d["row_variable"]),
            col_variable=str(d["col_variable"]),
            row_levels=tuple(str(r) for r in rows),
            col_levels=tuple(str(c) for c in cols),
            cells=tuple(cells),
            provenance=MatrixProvenance.from_dict(d.get("provenance")),
        )


def combine_cell(matrix: CombinationMatrix, row: Level, col: Level) -> CellOutcome:
    """Evaluate one combination: pure table lookup, label kept verbatim."""
    entry = matrix.cell(row, col)
    return CellOutcome(label=entry.label, rank=entry.outcome)


def _looks_numeric(label: str) -> bool:
    try:
        float(label.strip())
    except ValueError:
        return False
    return True


def validate_matrix(matrix: CombinationMatrix) -> ValidationReport:
    """Full structural check; reports every violation rather than the first.

    Valid means: sane axes, exactly one cell per (row, col) pair, descriptive
    non-numeric labels, outcomes that never decrease as either input grows,
    and anchored corners (both-minimum combines to low, both-maximum to
    very-high).
    """
    report = ValidationReport()
    name = matrix.name or "matrix"

    for axis, levels in (("row", matrix.row_levels), ("col", matrix.col_levels)):
        if len(levels) < 2:
            report.error(
                "matrix-axis-levels",
                f"{name}: {axis} axis needs at least two levels to express a scale",
                f"{axis}_levels",
            )
        if len(set(levels)) != len(levels):
            report.error(
                "matrix-axis-levels", f"{name}: {axis} axis repeats a level", f"{axis}_levels"
            )
        if any(not str(level).strip() for level in levels):
            report.error(
                "matrix-axis-levels", f"{name}: {axis} axis has an empty level", f"{axis}_levels"
            )
        # When an axis reuses the rank vocabulary, it must run in scale order:
        # a shuffled axis would silently invert monotonicity.
        if set(levels) == set(RANK_VALUES) and tuple(levels) != RANK_VALUES:
            report.error(
                "matrix-axis-order",
                f"{name}: {axis} axis uses the rank vocabulary out of scale order",
                f"{axis}_levels",
            )

    row_index = {level: i for i, level in enumerate(matrix.row_levels)}
    col_index = {level: i for i, level in enumerate(matrix.col_levels)}

    seen: dict[tuple[str, str], int] = {}
    for i, cell in enumerate(matrix.cells):
        path = f"cells[{i}]"
        if cell.row not in row_index:
            report.error(
                "matrix-unknown-level",
                f"{name}: cell references row level {cell.row!r} not on the row axis",
                path,
            )
        if cell.col not in col_index:
            report.error(
                "matrix-unknown-level",
                f"{name}: cell references col level {cell.col!r} not on the col axis",
                path,
            )
        key = (cell.row, cell.col)
        if key in seen:
            report.error(
                "matrix-duplicate-cell",
                f"{name}: cell ({cell.row}, {cell.col}) is defined more than once",
                path,
            )
        seen[key] = i
        if not cell.label.strip():
            report.error("matrix-empty-label", f"{name}: cell ({cell.row}, {cell.col}) has an empty label", path)
        elif _looks_numeric(cell.label):
            report.error(
                "matrix-numeric-label",
                f"{name}: cell ({cell.row}, {cell.col}) label {cell.label!r} is a bare "
                "number; labels must stay descriptive",
                path,
            )

    for row in matrix.row_levels:
        for col in matrix.col_levels:
            if (row, col) not in seen:
                report.error(
                    "matrix-incomplete",
                    f"{name}: no cell defined for (row={row!r}, col={col!r})",
                    "cells",
                )

    # Monotonicity and corners only make sense on a complete, well-addressed grid.
    grid_ok = not any(
        f.code in ("matrix-incomplete", "matrix-duplicate-cell", "matrix-unknown-level", "matrix-axis-levels")
        for f in report.errors
    )
    if grid_ok:
        lookup = {(c.row, c.col): c.outcome for c in matrix.cells}
        n_rows, n_cols = len(matrix.row_levels), len(matrix.col_levels)
        for i in range(n_rows):
            for j in range(n_cols):
                here = lookup[(matrix.row_levels[i], matrix.col_levels[j])]
                for i2 in range(i, n_rows):
                    for j2 in range(j, n_cols):
                        if i2 == i and j2 == j:
                            continue
                        there = lookup[(matrix.row_levels[i2], matrix.col_levels[j2])]
                        if there < here:
                            report.error(
                                "matrix-monotonicity",
                                f"{name}: outcome at (row={matrix.row_levels[i2]!r}, "
                                f"col={matrix.col_levels[j2]!r}) is {there.value!r}, below "
                                f"{here.value!r} at (row={matrix.row_levels[i]!r}, "
                                f"col={matrix.col_levels[j]!r}); outcomes may never "
                                "decrease as either input grows",
                                f"cells[{seen[(matrix.row_levels[i2], matrix.col_levels[j2])]}]",
                            )
        first = lookup[(matrix.row_levels[0], matrix.col_levels[0])]
        last = lookup[(matrix.row_levels[-1], matrix.col_levels[-1])]
        if first is not OrdinalRank.LOW:
            report.error(
                "matrix-corner-anchor",
                f"{name}: both-minimum corner must combine to low, got {first.value!r}",
                "cells",
            )
        if last is not OrdinalRank.VERY_HIGH:
            report.error(
                "matrix-corner-anchor",
                f"{name}: both-maximum corner must combine to very-high, got {last.value!r}",
                "cells",
            )
    return report


# ---------------------------------------------------------------------------
# Matrix sets
# ---------------------------------------------------------------------------

# Fixed wiring of the three tables: which variable feeds which axis.
SET_WIRING = {
    "likelihood": ("probability", "exposure"),
    "severity": ("effort", "gravity"),
    "risk": ("likelihood", "severity"),
}


@dataclass(frozen=True)
class MatrixSet:
    """The three tables a case assesses with, kept together and ledgered together."""

    set_id: str
    likelihood: CombinationMatrix
    severity: CombinationMatrix
    risk: CombinationMatrix
    rationale: str = ""

    def matrices(self) -> dict[str, CombinationMatrix]:
        return {"likelihood": self.likelihood, "severity": self.severity, "risk": self.risk}

    @property
    def is_default(self) -> bool:
        return all(
            m.provenance.kind is MatrixProvenanceKind.DEFAULT for m in self.matrices().values()
        )

    def to_dict(self) -> dict:
        return {
            "set_id": self.set_id,
            "rationale": self.rationale,
            "matrices": {role: m.to_dict() for role, m in self.matrices().items()},
        }

    @staticmethod
    def from_dict(d: dict) -> "MatrixSet":
        _require_mapping(d, "matrix set")
        raw = d.get("matrices")
        _require_mapping(raw, "matrix set matrices")
        for role in SET_WIRING:
            if role not in raw:
                raise FriaError("malformed-document", f"matrix set is missing the {role} matrix")
        return MatrixSet(
            set_id=str(d.get("set_id", "")),
            rationale=str(d.get("rationale", "")),
            likelihood=CombinationMatrix.from_dict(raw["likelihood"]),
            severity=CombinationMatrix.from_dict(raw["severity"]),
            risk=CombinationMatrix.from_dict(raw["risk"]),
        )


def validate_matrix_set(matrix_set: MatrixSet) -> ValidationReport:
    """Each matrix valid, the axes wired to the right variables, rank-vocabulary levels.

    Axis levels must be exactly the four-rank vocabulary because ratings and
    intermediate outcomes are expressed in it; a table with custom level names
    can still be validated standalone with validate_matrix.
    """
    report = ValidationReport()
    for role, matrix in matrix_set.matrices().items():
        report.extend(validate_matrix(matrix), prefix=f"matrices.{role}.")
        row_var, col_var = SET_WIRING[role]
        if matrix.row_variable != row_var or matrix.col_variable != col_var:
            report.error(
                "matrix-wiring",
                f"{role} matrix must combine row={row_var!r} with col={col_var!r}, "
                f"got row={matrix.row_variable!r}, col={matrix.col_variable!r}",
                f"matrices.{role}",
            )
        for axis, levels in (("row", matrix.row_levels), ("col", matrix.col_levels)):
            if tuple(levels) != RANK_VALUES:
                report.error(
                    "matrix-axis-vocabulary",
                    f"{role} matrix {axis} axis must use the four rank levels "
                    f"{', '.join(RANK_VALUES)} so ratings can feed it",
                    f"matrices.{role}.{axis}_levels",
                )
    return report


def require_valid_matrix_set(matrix_set: MatrixSet) -> None:
    report = validate_matrix_set(matrix_set)
    if not report.ok:
        first = report.errors[0]
        raise FriaError(
            "invalid-matrix-set",
            f"matrix set {matrix_set.set_id!r} fails validation: {first.message} "
            f"({len(report.errors)} error(s) in total)",
            [f.path for f in report.errors],
        )


def compute_likelihood(
    probability: OrdinalRank, exposure: OrdinalRank, matrix_set: MatrixSet
) -> CellOutcome:
    return combine_cell(matrix_set.likelihood, probability, exposure)


def compute_severity(
    gravity: OrdinalRank, effort: OrdinalRank, matrix_set: MatrixSet
) -> CellOutcome:
    # The severity table is laid out with effort on rows and gravity on columns.
    return combine_cell(matrix_set.severity, effort, gravity)


def compute_risk_index(
    likelihood: OrdinalRank, severity: OrdinalRank, matrix_set: MatrixSet
) -> CellOutcome:
    return combine_cell(matrix_set.risk, likelihood, severity)


@lru_cache(maxsize=1)
def default_matrix_set() -> MatrixSet:
    """The shipped 4x4 set; immutable, so the cached instance is shared."""
    text = resources.files("fria.data").joinpath("default_matrix_set.json").read_text("utf-8")
    return MatrixSet.from_dict(json.loads(text))
