"""Seeded generators for monotone matrices and broken single-cell mutants.

Shared between the matrix unit tests and the acceptance suite. Generation is
pure over a caller-supplied Random instance so runs stay reproducible.
"""

from __future__ import annotations

import random

from fria.core import RANK_ORDER, rank_display
from fria.matrix import CombinationMatrix, MatrixCellEntry

RANK_VALUES = [r.value for r in RANK_ORDER]
TOP = len(RANK_ORDER) - 1


def _label(pos: int, row: str, col: str) -> str:
    return f"{rank_display(RANK_ORDER[pos])} ({row} x {col})"


def make_monotone_matrix(rng: random.Random, name: str = "generated") -> CombinationMatrix:
    """Random 4x4 matrix that satisfies every validity rule by construction.

    Each cell is sampled at or above the running maximum of its upper and
    left neighbours, with the corners pinned to low and very-high.
    """
    n = len(RANK_ORDER)
    grid = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            floor = 0
            if i > 0:
                floor = max(floor, grid[i - 1][j])
            if j > 0:
                floor = max(floor, grid[i][j - 1])
            grid[i][j] = rng.randint(floor, TOP)
    grid[0][0] = 0
    grid[n - 1][n - 1] = TOP

    cells = []
    for i, row in enumerate(RANK_VALUES):
        for j, col in enumerate(RANK_VALUES):
            pos = grid[i][j]
            cells.append(
                MatrixCellEntry(
                    row=row,
                    col=col,
                    label=_label(pos, row, col),
                    outcome=RANK_ORDER[pos],
                )
            )
    return CombinationMatrix(
        name=name,
        row_variable="probability",
        col_variable="exposure",
        row_levels=tuple(RANK_VALUES),
        col_levels=tuple(RANK_VALUES),
        cells=tuple(cells),
    )


def make_mutant(rng: random.Random, base: CombinationMatrix) -> CombinationMatrix:
    """Clone ``base`` with one cell lowered below a neighbour it must dominate.

    The very-high corner guarantees at least one candidate cell exists.
    """
    n = len(base.row_levels)
    pos = {
        (c.row, c.col): RANK_ORDER.index(c.outcome) for c in base.cells
    }
    candidates = []
    for i in range(n):
        for j in range(n):
            floor = 0
            if i > 0:
                floor = max(floor, pos[(base.row_levels[i - 1], base.col_levels[j])])
            if j > 0:
                floor = max(floor, pos[(base.row_levels[i], base.col_levels[j - 1])])
            if floor > 0:
                candidates.append((i, j, floor))
    i, j, floor = rng.choice(candidates)
    broken_rank = RANK_ORDER[rng.randint(0, floor - 1)]
    target = (base.row_levels[i], base.col_levels[j])

    cells = []
    for c in base.cells:
        if (c.row, c.col) == target:
            cells.append(
                MatrixCellEntry(
                    row=c.row,
                    col=c.col,
                    label=_label(RANK_ORDER.index(broken_rank), c.row, c.col),
                    outcome=broken_rank,
                )
            )
        else:
            cells.append(c)
    return CombinationMatrix(
        name=f"{base.name}-mutant",
        row_variable=base.row_variable,
        col_variable=base.col_variable,
        row_levels=base.row_levels,
        col_levels=base.col_levels,
        cells=tuple(cells),
    )
