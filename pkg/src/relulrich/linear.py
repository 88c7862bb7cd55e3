"""Dense exact linear algebra over Q or Q(zeta_d).

Entries are any exact field elements supporting ``+ - * /`` and truthiness
(``Fraction`` or :class:`~relulrich.exactfield.CycloScalar`).  Elimination
pivots on the first nonzero entry, scanning left to right.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence


class DimensionMismatch(ValueError):
    pass


class NotInSpan(ValueError):
    """The vector is not in the row space."""


@dataclass(frozen=True)
class ExactMatrix:
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatch(
                f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Any]], cols: int | None = None) -> "ExactMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise DimensionMismatch(f"row of length {len(r)}, expected {cols}")
        return cls(len(rows), cols, tuple(x for r in rows for x in r))

    def row(self, i: int) -> list:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def to_rows(self) -> list[list]:
        return [self.row(i) for i in range(self.rows)]


@dataclass
class Subspace:
    """Row space of a matrix, kept as a reduced row-echelon basis.

    ``combos[k]`` (when tracked) expresses basis row k as a combination of the
    rows originally handed to :func:`rref`.
    """

    ambient_dim: int
    basis: list[list]
    pivots: list[int]
    zero: Any = 0
    combos: list[list] | None = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: Sequence) -> bool:
        try:
            solve_membership(self, v)
        except NotInSpan:
            return False
        return True


def _zero_like(rows):
    for r in rows:
        for x in r:
            return x - x
    return Fraction(0)


def _fieldify(rows):
    # plain ints would turn into floats under division
    return [[Fraction(x) if isinstance(x, int) else x for x in r] for r in rows]


def rref(m, *, track: bool = False, zero=None) -> tuple[Subspace, int]:
    """Reduced row-echelon form of the rows of ``m``.

    ``m`` is an :class:`ExactMatrix` or a list of rows.  With ``track=True``
    the returned subspace also records how each basis row arises from the
    input rows.
    """
    if isinstance(m, ExactMatrix):
        rows_in = m.to_rows()
        ncols = m.cols
    else:
        rows_in = [list(r) for r in m]
        ncols = len(rows_in[0]) if rows_in else 0
    rows_in = _fieldify(rows_in)
    if zero is None:
        zero = _zero_like(rows_in)
    one = zero + 1
    nrows = len(rows_in)
    rows = [list(r) for r in rows_in]
    combos = None
    if track:
        combos = [[one if i == j else zero for j in range(nrows)] for i in range(nrows)]

    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if rows[i][c]), None)
        if p is None:
            continue
        if p != r:
            rows[p], rows[r] = rows[r], rows[p]
            if track:
                combos[p], combos[r] = combos[r], combos[p]
        inv = one / rows[r][c]
        rows[r] = [x * inv if x else x for x in rows[r]]
        if track:
            combos[r] = [x * inv if x else x for x in combos[r]]
        pivot_row = rows[r]
        nz = [j for j in range(c, ncols) if pivot_row[j]]
        for i in range(nrows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                row_i = rows[i]
                for j in nz:
                    row_i[j] = row_i[j] - f * pivot_row[j]
                if track:
                    ci, cr = combos[i], combos[r]
                    for j in range(nrows):
                        if cr[j]:
                            ci[j] = ci[j] - f * cr[j]
        pivots.append(c)
        r += 1

    basis = rows[:r]
    space = Subspace(ncols, basis, pivots, zero, combos[:r] if track else None)
    return space, r


def rank(m) -> int:
    return rref(m)[1]


def solve_membership(s: Subspace, v: Sequence) -> list:
    """Coordinates of ``v`` in the stored basis; raises :class:`NotInSpan`."""
    if len(v) != s.ambient_dim:
        raise DimensionMismatch(f"vector of length {len(v)} in ambient dimension {s.ambient_dim}")
    residual = list(v)
    coords = []
    for row, p in zip(s.basis, s.pivots):
        c = residual[p]
        coords.append(c)
        if c:
            for j in range(p, s.ambient_dim):
                if row[j]:
                    residual[j] = residual[j] - c * row[j]
    if any(residual):
        raise NotInSpan("vector is not in the span")
    return coords


def combination_of_inputs(s: Subspace, v: Sequence) -> list:
    """Coefficients on the original input rows that reproduce ``v``."""
    if s.combos is None:
        raise ValueError("subspace was built without track=True")
    coords = solve_membership(s, v)
    n = len(s.combos[0]) if s.combos else 0
    out = [s.zero] * n
    for c, combo in zip(coords, s.combos):
        if c:
            for j, x in enumerate(combo):
                if x:
                    out[j] = out[j] + c * x
    return out


def complement_positions(s: Subspace) -> list[int]:
    """Coordinate positions that are not pivots; their unit vectors span a complement."""
    piv = set(s.pivots)
    return [j for j in range(s.ambient_dim) if j not in piv]


def determinant(rows: Sequence[Sequence[Any]]):
    """Determinant of a square matrix over an exact field by Gaussian elimination."""
    n = len(rows)
    a = _fieldify(rows)
    for r in a:
        if len(r) != n:
            raise DimensionMismatch("determinant of a non-square matrix")
    if n == 0:
        return 1
    zero = _zero_like(a)
    det = zero + 1
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c]), None)
        if p is None:
            return zero
        if p != c:
            a[p], a[c] = a[c], a[p]
            det = -det
        piv = a[c][c]
        det = det * piv
        inv = 1 / piv
        for i in range(c + 1, n):
            if a[i][c]:
                f = a[i][c] * inv
                for j in range(c, n):
                    if a[c][j]:
                        a[i][j] = a[i][j] - f * a[c][j]
    return det
