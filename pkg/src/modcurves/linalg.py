"""Exact linear algebra over the rationals.

Matrices are dense lists of :class:`fractions.Fraction`.  Elimination skips
zero entries, which keeps the sparse matrices produced by the rest of the
package cheap without a separate sparse representation.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "RatMatrix",
    "rref_rank",
    "rank",
    "kernel_basis",
    "kernel_with_free_columns",
    "invariant_subspace",
    "invariant_with_free_columns",
]


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class RatMatrix:
    """A dense ``rows x cols`` matrix of rationals."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data: Iterable[Sequence] = (), cols: int | None = None):
        rows = [[_frac(x) for x in row] for row in data]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for row in rows:
            if len(row) != cols:
                raise ValueError(f"row of length {len(row)} in matrix with {cols} columns")
        self._data = rows
        self.rows = len(rows)
        self.cols = cols

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMatrix":
        return cls([[0] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "RatMatrix":
        data = [[columns[j][i] for j in range(len(columns))] for i in range(rows)]
        return cls(data, cols=len(columns))

    def __getitem__(self, idx):
        i, j = idx
        return self._data[i][j]

    def row(self, i: int) -> list[Fraction]:
        return list(self._data[i])

    def column(self, j: int) -> list[Fraction]:
        return [row[j] for row in self._data]

    def tolist(self) -> list[list[Fraction]]:
        return [list(row) for row in self._data]

    def transpose(self) -> "RatMatrix":
        return RatMatrix([[self._data[i][j] for i in range(self.rows)] for j in range(self.cols)],
                         cols=self.rows)

    def vstack(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.cols:
            raise ValueError("column count mismatch")
        return RatMatrix(self._data + other._data, cols=self.cols)

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        out = []
        for row in self._data:
            acc = [Fraction(0)] * other.cols
            for k, a in enumerate(row):
                if a:
                    for j, b in enumerate(other._data[k]):
                        if b:
                            acc[j] += a * b
            out.append(acc)
        return RatMatrix(out, cols=other.cols)

    def apply(self, vec: Sequence) -> list[Fraction]:
        if len(vec) != self.cols:
            raise ValueError("shape mismatch")
        return [sum((a * v for a, v in zip(row, vec) if a and v), Fraction(0)) for row in self._data]

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return RatMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)],
                         cols=self.cols)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and self._data == other._data

    def __repr__(self) -> str:
        return f"RatMatrix({self.rows}x{self.cols})"


def _as_matrix(m) -> RatMatrix:
    return m if isinstance(m, RatMatrix) else RatMatrix(m)


def rref_rank(m) -> tuple[RatMatrix, int, tuple[int, ...]]:
    """Return ``(rref, rank, pivot_columns)``.

    Pivots are chosen as the first row (from the current pivot row down) with
    a nonzero entry in the leftmost remaining column, so the result is fully
    deterministic.
    """
    m = _as_matrix(m)
    a = m.tolist()
    nrows, ncols = m.rows, m.cols
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        prow = a[r]
        inv = 1 / prow[c]
        if inv != 1:
            for j in range(c, ncols):
                if prow[j]:
                    prow[j] *= inv
        nz = [j for j in range(c, ncols) if prow[j]]
        for i in range(nrows):
            if i == r:
                continue
            f = a[i][c]
            if f:
                row = a[i]
                for j in nz:
                    row[j] -= f * prow[j]
        pivots.append(c)
        r += 1
    return RatMatrix(a, cols=ncols), len(pivots), tuple(pivots)


def rank(m) -> int:
    return rref_rank(m)[1]


def kernel_with_free_columns(m) -> tuple[list[list[Fraction]], list[int]]:
    """Null space basis together with the free column each vector is attached to.

    The vector attached to free column ``f`` has a 1 in position ``f`` and 0 in
    every other free position, so coordinates of a kernel element in this
    basis are read off its free entries.
    """
    m = _as_matrix(m)
    red, rk, pivots = rref_rank(m)
    pivset = set(pivots)
    basis, free = [], []
    for f in range(m.cols):
        if f in pivset:
            continue
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -red[i, f]
        basis.append(v)
        free.append(f)
    return basis, free


def kernel_basis(m) -> list[list[Fraction]]:
    """Basis of the right null space (empty iff full column rank)."""
    return kernel_with_free_columns(m)[0]


def invariant_subspace(generators: Sequence, dim: int | None = None) -> list[list[Fraction]]:
    """Basis of the common fixed space of a family of square matrices.

    With no generators the whole space is returned; ``dim`` is then required.
    """
    return invariant_with_free_columns(generators, dim)[0]


def invariant_with_free_columns(generators: Sequence, dim: int | None = None):
    gens = [_as_matrix(g) for g in generators]
    if not gens:
        if dim is None:
            raise ValueError("dimension required for an empty generator list")
        return [[Fraction(int(i == j)) for j in range(dim)] for i in range(dim)], list(range(dim))
    n = gens[0].cols
    if dim is not None and dim != n:
        raise ValueError("size mismatch")
    for g in gens:
        if g.rows != n or g.cols != n:
            raise ValueError("generators must be square matrices of equal size")
    ident = RatMatrix.identity(n)
    stacked = gens[0] - ident
    for g in gens[1:]:
        stacked = stacked.vstack(g - ident)
    return kernel_with_free_columns(stacked)
