"""Exact rational linear algebra on sparse vectors.

Vectors are ``dict[int, Fraction]`` with no stored zeros.  Matrices
(:class:`LinMap`) keep their columns as such vectors, which is the natural
layout for the restriction and multiplication maps built elsewhere in the
package: each column is the image of one basis vector.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Rat = Fraction
Vector = dict  # dict[int, Fraction]


def rat(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def vec(entries: Iterable) -> Vector:
    """Sparse vector from a dense sequence."""
    return {i: rat(x) for i, x in enumerate(entries) if x != 0}


def dense(v: Vector, length: int) -> list[Fraction]:
    out = [Fraction(0)] * length
    for i, x in v.items():
        out[i] = x
    return out


def axpy(alpha: Fraction, x: Vector, y: Vector) -> None:
    """In place ``y += alpha * x``."""
    if not alpha:
        return
    for i, xi in x.items():
        s = y.get(i, 0) + alpha * xi
        if s:
            y[i] = s
        else:
            y.pop(i, None)


def scale(alpha: Fraction, x: Vector) -> Vector:
    if not alpha:
        return {}
    return {i: alpha * xi for i, xi in x.items()}


def shift(v: Vector, offset: int) -> Vector:
    return {i + offset: x for i, x in v.items()}


class LinMap:
    """A matrix over Q stored column-wise.

    ``columns[j]`` is the sparse image of the j-th source basis vector.
    Optional labels name rows and columns for reports.
    """

    __slots__ = ("nrows", "ncols", "columns", "row_labels", "col_labels")

    def __init__(self, nrows: int, ncols: int, columns: Sequence[Vector] | None = None,
                 row_labels=None, col_labels=None):
        if columns is None:
            columns = [{} for _ in range(ncols)]
        if len(columns) != ncols:
            raise ValueError(f"expected {ncols} columns, got {len(columns)}")
        for c in columns:
            for i in c:
                if not 0 <= i < nrows:
                    raise ValueError(f"row index {i} out of range for {nrows} rows")
        if row_labels is not None and len(row_labels) != nrows:
            raise ValueError("row labels do not match row count")
        if col_labels is not None and len(col_labels) != ncols:
            raise ValueError("column labels do not match column count")
        self.nrows = nrows
        self.ncols = ncols
        self.columns = list(columns)
        self.row_labels = row_labels
        self.col_labels = col_labels

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], ncols: int | None = None) -> "LinMap":
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        cols: list[Vector] = [{} for _ in range(ncols)]
        for i, row in enumerate(rows):
            if len(row) != ncols:
                raise ValueError("ragged rows")
            for j, x in enumerate(row):
                if x:
                    cols[j][i] = rat(x)
        return cls(len(rows), ncols, cols)

    @classmethod
    def identity(cls, n: int) -> "LinMap":
        return cls(n, n, [{j: Fraction(1)} for j in range(n)])

    def apply(self, v: Vector) -> Vector:
        out: Vector = {}
        for j, x in v.items():
            axpy(x, self.columns[j], out)
        return out

    def compose(self, inner: "LinMap") -> "LinMap":
        """Return ``self ∘ inner``."""
        if inner.nrows != self.ncols:
            raise ValueError(f"cannot compose {self.nrows}x{self.ncols} with "
                             f"{inner.nrows}x{inner.ncols}")
        return LinMap(self.nrows, inner.ncols, [self.apply(c) for c in inner.columns])

    def rows(self) -> list[Vector]:
        out: list[Vector] = [{} for _ in range(self.nrows)]
        for j, c in enumerate(self.columns):
            for i, x in c.items():
                out[i][j] = x
        return out

    def to_dense(self) -> list[list[Fraction]]:
        return [dense(r, self.ncols) for r in self.rows()]

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinMap):
            return NotImplemented
        return (self.nrows, self.ncols, self.columns) == (other.nrows, other.ncols, other.columns)

    def __repr__(self) -> str:
        return f"LinMap({self.nrows}x{self.ncols})"


class Echelon:
    """Incrementally maintained reduced row echelon basis of a subspace.

    Every stored row has its pivot (leftmost nonzero entry) equal to 1 and
    zeros in all other pivot columns, so after sorting by pivot the rows form
    the unique RREF of the span of everything added so far.
    """

    def __init__(self, vectors: Iterable[Vector] = ()):
        self.pivots: dict[int, Vector] = {}
        for v in vectors:
            self.add(v)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, v: Vector) -> Vector:
        """Residue of ``v`` modulo the span; independent of insertion order."""
        r = dict(v)
        hits = [p for p in r if p in self.pivots]
        for p in hits:
            c = r.get(p)
            if c:
                axpy(-c, self.pivots[p], r)
        return r

    def add(self, v: Vector) -> bool:
        """Add ``v`` to the span; return True iff the rank grew."""
        r = self.reduce(v)
        if not r:
            return False
        p = min(r)
        inv = 1 / r[p]
        r = {i: x * inv for i, x in r.items()}
        for row in self.pivots.values():
            c = row.get(p)
            if c:
                axpy(-c, r, row)
        self.pivots[p] = r
        return True

    def contains(self, v: Vector) -> bool:
        return not self.reduce(v)

    def sorted_rows(self) -> list[tuple[int, Vector]]:
        return sorted(self.pivots.items())


def rref(m: LinMap) -> tuple[int, list[int], list[list[Fraction]]]:
    """Reduced row echelon form with the leftmost-pivot rule.

    Returns ``(rank, pivot_columns, reduced_rows)``; zero rows are appended so
    the reduced matrix has the same shape as ``m``.
    """
    ech = Echelon(m.rows())
    rows = [dense(r, m.ncols) for _, r in ech.sorted_rows()]
    pivots = sorted(ech.pivots)
    rows += [[Fraction(0)] * m.ncols for _ in range(m.nrows - len(rows))]
    return len(pivots), pivots, rows


def kernel_basis(m: LinMap) -> list[Vector]:
    """Basis of the right kernel, one vector per free column.

    The vector for free column ``f`` has entry 1 at ``f`` and is supported on
    ``f`` plus pivot columns, so the basis is deterministic.
    """
    ech = Echelon(m.rows())
    return _kernel_from_echelon(ech, m.ncols)


def kernel_from_rows(rows: Iterable[Vector], ncols: int) -> list[Vector]:
    return _kernel_from_echelon(Echelon(rows), ncols)


def _kernel_from_echelon(ech: Echelon, ncols: int) -> list[Vector]:
    pivots = ech.pivots
    by_free: dict[int, Vector] = {}
    for p, row in pivots.items():
        for f, x in row.items():
            if f != p:
                by_free.setdefault(f, {})[p] = -x
    basis = []
    for f in range(ncols):
        if f in pivots:
            continue
        v = by_free.get(f, {})
        v[f] = Fraction(1)
        basis.append(dict(sorted(v.items())))
    return basis


def rank(vectors: Iterable[Vector]) -> int:
    return Echelon(vectors).rank


def image_dim(m: LinMap) -> int:
    return rank(m.columns)


def quotient_dim(big: Sequence[Vector], small: Sequence[Vector]) -> int:
    """dim span(big) - dim span(small), requiring span(small) ⊆ span(big)."""
    ech = Echelon(big)
    for v in small:
        if not ech.contains(v):
            raise ValueError("subspace is not contained in the ambient span")
    return ech.rank - rank(small)


def solve(m: LinMap, b: Vector) -> Vector | None:
    """Some solution x of ``m x = b``, or None when inconsistent."""
    # augment with b as the last column; its pivot means inconsistency
    rows = m.rows()
    for i, x in b.items():
        rows[i][m.ncols] = x
    ech = Echelon(rows)
    if m.ncols in ech.pivots:
        return None
    return {p: row[m.ncols] for p, row in ech.pivots.items() if m.ncols in row}


def rank_dense(rows: Sequence[Sequence]) -> int:
    return rank(vec(r) for r in rows)
