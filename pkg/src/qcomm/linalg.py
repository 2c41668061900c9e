"""Exact sparse linear algebra over the parameter-rational coefficient field.

Rows are sparse dicts mapping column index to a nonzero ParamScalar.  The
elimination is ordinary exact Gauss-Jordan: over a fraction field every
division is exact, so the fraction-free machinery needed over rings
degenerates to plain pivoting.  Pivots that depend on a parameter are allowed
(the generic branch) and recorded as genericity assumptions.
"""

from __future__ import annotations

from . import scalars
from .scalars import ONE, ParamScalar


class LinearSystemError(ValueError):
    pass


def _record_assumption(pivot: ParamScalar, assumptions: set):
    if not scalars.is_rational(pivot):
        for name in scalars.parameter_factors(pivot):
            assumptions.add(f"{name} != 0 (generic pivot)")


class RowReducer:
    """Incremental reduced row echelon form with column-order pivoting.

    Columns are pivoted in increasing index order, so callers control the
    preference (e.g. graded-lex greatest monomial first) by their column
    numbering.  Optionally carries a right-hand side per row.
    """

    def __init__(self):
        self.pivots: dict[int, dict] = {}
        self.rhs: dict[int, ParamScalar] = {}
        self.assumptions: set[str] = set()
        self.inconsistent: list[ParamScalar] = []

    def reduce_row(self, row: dict, rhs: ParamScalar = None):
        """Reduce a row against current pivots; returns the residual row."""
        row = dict(row)
        b = rhs if rhs is not None else scalars.ZERO
        for col in sorted(set(row) & set(self.pivots)):
            c = row.get(col)
            if not c:
                continue
            prow = self.pivots[col]
            for j, v in prow.items():
                _isub(row, j, c * v)
            b = b - c * self.rhs[col]
        return row, b

    def add_row(self, row: dict, rhs: ParamScalar = None) -> bool:
        """Insert a row; returns True if it increased the rank."""
        row, b = self.reduce_row(row, rhs)
        if not row:
            if b:
                self.inconsistent.append(b)
            return False
        lead = min(row)
        pivot = row[lead]
        _record_assumption(pivot, self.assumptions)
        inv = ONE / pivot
        row = {j: v * inv for j, v in row.items()}
        b = b * inv
        for col, prow in self.pivots.items():
            c = prow.get(lead)
            if c:
                for j, v in row.items():
                    _isub(prow, j, c * v)
                self.rhs[col] = self.rhs[col] - c * b
        self.pivots[lead] = row
        self.rhs[lead] = b
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def nullspace(self, ncols: int) -> list[dict]:
        """Basis of the homogeneous nullspace, one vector per free column."""
        basis = []
        for free in range(ncols):
            if free in self.pivots:
                continue
            vec = {free: ONE}
            for col, prow in self.pivots.items():
                c = prow.get(free)
                if c:
                    vec[col] = -c
            basis.append(vec)
        return basis

    def particular_solution(self) -> dict:
        """Solution with all free variables zero (ignores inconsistent rows)."""
        return {col: b for col, b in self.rhs.items() if b}

    @property
    def consistent(self) -> bool:
        return not self.inconsistent


def _isub(row: dict, key, value):
    old = row.get(key)
    if old is None:
        if value:
            row[key] = -value
    else:
        new = old - value
        if new:
            row[key] = new
        else:
            del row[key]


def nullspace(rows, ncols: int):
    """Nullspace basis of a sparse homogeneous system.

    Returns (basis, assumptions); basis vectors are sparse dicts with the
    pivot convention of RowReducer (free column carries coefficient 1).
    """
    red = RowReducer()
    for row in rows:
        if row:
            red.add_row(row)
    return red.nullspace(ncols), sorted(red.assumptions)


def solve(rows_with_rhs, ncols: int):
    """Solve a sparse inhomogeneous system exactly.

    ``rows_with_rhs`` iterates (row, rhs).  Returns a dict with the particular
    solution (free vars zero), the homogeneous nullspace, the consistency flag
    and recorded genericity assumptions.
    """
    red = RowReducer()
    for row, b in rows_with_rhs:
        if row or b:
            red.add_row(row, b)
    return {
        "solution": red.particular_solution(),
        "nullspace": red.nullspace(ncols),
        "consistent": red.consistent,
        "assumptions": sorted(red.assumptions),
        "rank": red.rank,
    }
