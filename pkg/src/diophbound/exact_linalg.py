"""Exact integer matrix algebra.

Everything here works on Python ints, so there is no overflow and no
rounding.  Matrices are immutable; the algorithms copy the entries into
nested lists, work in place on the copy and wrap the result again.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, NamedTuple, Optional, Sequence


class DimensionError(ValueError):
    """Matrix or vector shapes do not fit the requested operation."""


@dataclass(frozen=True)
class IntMatrix:
    """Dense row-major matrix of arbitrary-precision integers."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise DimensionError("negative matrix dimension")
        if len(self.entries) != self.rows * self.cols:
            raise DimensionError(
                f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix"
            )
        object.__setattr__(
            self, "entries", tuple(operator.index(e) for e in self.entries)
        )

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], cols: Optional[int] = None) -> "IntMatrix":
        """Build from nested sequences.  ``cols`` is only needed for 0-row matrices."""
        data = [list(r) for r in rows]
        if not data:
            return cls(0, cols or 0, ())
        width = len(data[0])
        if any(len(r) != width for r in data):
            raise DimensionError("ragged rows")
        if cols is not None and cols != width:
            raise DimensionError(f"expected {cols} columns, got {width}")
        return cls(len(data), width, tuple(e for r in data for e in r))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple[int, ...]:
        return self.entries[j::self.cols] if self.cols else ()

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix(
            self.cols, self.rows,
            tuple(self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)),
        )

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "IntMatrix":
        return IntMatrix(
            len(row_idx), len(col_idx),
            tuple(self.entries[i * self.cols + j] for i in row_idx for j in col_idx),
        )

    def augment(self, column: Sequence[int]) -> "IntMatrix":
        """Append ``column`` on the right."""
        if len(column) != self.rows:
            raise DimensionError("column length does not match row count")
        return IntMatrix.from_rows(
            (list(self.row(i)) + [column[i]] for i in range(self.rows)), cols=self.cols + 1
        )

    def dot(self, vector: Sequence[int]) -> tuple[int, ...]:
        """Matrix-vector product."""
        if len(vector) != self.cols:
            raise DimensionError(f"vector of length {len(vector)} for {self.cols} columns")
        return tuple(sum(a * x for a, x in zip(self.row(i), vector)) for i in range(self.rows))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if not isinstance(other, IntMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        ocols = [other.column(j) for j in range(other.cols)]
        return IntMatrix(
            self.rows, other.cols,
            tuple(sum(a * b for a, b in zip(self.row(i), c)) for i in range(self.rows) for c in ocols),
        )

    def __repr__(self) -> str:
        return f"IntMatrix({self.to_rows()!r})" if self.rows else f"IntMatrix(0x{self.cols})"


class HnfResult(NamedTuple):
    h: IntMatrix
    u: IntMatrix


class SnfResult(NamedTuple):
    u: IntMatrix
    s: IntMatrix
    v: IntMatrix


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``x*a + y*b == g == gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def determinant(m: IntMatrix) -> int:
    """Exact determinant by Bareiss fraction-free elimination."""
    if m.rows != m.cols:
        raise DimensionError(f"determinant of non-square {m.rows}x{m.cols} matrix")
    n = m.rows
    if n == 0:
        return 1
    a = m.to_rows()
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        rk = a[k]
        for i in range(k + 1, n):
            ri = a[i]
            aik = ri[k]
            for j in range(k + 1, n):
                # exact: every intermediate is a minor of the input
                ri[j] = (ri[j] * akk - aik * rk[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def rank(m: IntMatrix) -> int:
    """Rank over the rationals, by fraction-free row reduction."""
    a = m.to_rows()
    nrows, ncols = m.rows, m.cols
    r, prev = 0, 1
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        for i in range(r + 1, nrows):
            aic = a[i][c]
            for j in range(c + 1, ncols):
                a[i][j] = (a[i][j] * piv - aic * a[r][j]) // prev
            a[i][c] = 0
        prev = piv
        r += 1
    return r


def maximal_minors(
    m: IntMatrix, k: int, rows: Optional[Sequence[int]] = None
) -> list[tuple[tuple[int, ...], int]]:
    """All k x k minors on the chosen rows, one per column subset.

    Column subsets come in lexicographic order.  Without ``rows`` every
    row is used, which requires ``k == m.rows``.
    """
    if not 0 <= k <= min(m.rows, m.cols):
        raise DimensionError(f"k={k} out of range for a {m.rows}x{m.cols} matrix")
    if rows is None:
        if k != m.rows:
            raise DimensionError("k must equal the row count when no rows are selected")
        rows = range(m.rows)
    rows = tuple(rows)
    if len(rows) != k or any(not 0 <= i < m.rows for i in rows):
        raise DimensionError(f"row selection {rows} does not give k={k} valid rows")
    return [(cols, determinant(m.submatrix(rows, cols))) for cols in combinations(range(m.cols), k)]


def _combine_rows(mat: list[list[int]], i: int, j: int, a: int, b: int, c: int, d: int) -> None:
    # (row_i, row_j) <- (a*row_i + b*row_j, c*row_i + d*row_j)
    ri, rj = mat[i], mat[j]
    mat[i] = [a * x + b * y for x, y in zip(ri, rj)]
    mat[j] = [c * x + d * y for x, y in zip(ri, rj)]


def hermite_normal_form(m: IntMatrix) -> HnfResult:
    """Row Hermite normal form ``h`` together with unimodular ``u``, ``u @ m == h``.

    Pivots are positive, entries above a pivot lie in ``[0, pivot)`` and
    zero rows sit at the bottom.
    """
    n = m.rows
    h = m.to_rows()
    u = IntMatrix.identity(n).to_rows()
    r = 0
    for c in range(m.cols):
        if r == n:
            break
        for i in range(r + 1, n):
            b = h[i][c]
            if b == 0:
                continue
            a = h[r][c]
            g, x, y = xgcd(a, b)
            # [[x, y], [-b/g, a/g]] has determinant 1
            for mat in (h, u):
                _combine_rows(mat, r, i, x, y, -b // g, a // g)
        p = h[r][c]
        if p == 0:
            continue
        if p < 0:
            h[r] = [-x for x in h[r]]
            u[r] = [-x for x in u[r]]
            p = -p
        for i in range(r):
            q = h[i][c] // p
            if q:
                h[i] = [x - q * y for x, y in zip(h[i], h[r])]
                u[i] = [x - q * y for x, y in zip(u[i], u[r])]
        r += 1
    return HnfResult(IntMatrix.from_rows(h, cols=m.cols), IntMatrix.from_rows(u, cols=n))


def smith_normal_form(m: IntMatrix) -> SnfResult:
    """Smith form ``s = u @ m @ v`` with unimodular ``u`` and ``v``.

    The diagonal of ``s`` is nonnegative and each entry divides the next;
    zeros come last.
    """
    nr, nc = m.rows, m.cols
    s = m.to_rows()
    u = IntMatrix.identity(nr).to_rows()
    v = IntMatrix.identity(nc).to_rows()

    def swap_rows(i: int, j: int) -> None:
        s[i], s[j] = s[j], s[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i: int, j: int) -> None:
        for mat in (s, v):
            for row in mat:
                row[i], row[j] = row[j], row[i]

    t = 0
    while t < min(nr, nc):
        while True:
            best = None
            for i in range(t, nr):
                for j in range(t, nc):
                    if s[i][j] and (best is None or abs(s[i][j]) < abs(s[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            p = s[t][t]
            clean = True
            for i in range(t + 1, nr):
                q = s[i][t] // p
                if q:
                    s[i] = [x - q * y for x, y in zip(s[i], s[t])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[t])]
                clean = clean and s[i][t] == 0
            for j in range(t + 1, nc):
                q = s[t][j] // p
                if q:
                    for mat in (s, v):
                        for row in mat:
                            row[j] -= q * row[t]
                clean = clean and s[t][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, nr) for j in range(t + 1, nc) if s[i][j] % p),
                None,
            )
            if bad is None:
                break
            s[t] = [x + y for x, y in zip(s[t], s[bad])]
            u[t] = [x + y for x, y in zip(u[t], u[bad])]
        if s[t][t] == 0:
            break
        if s[t][t] < 0:
            s[t] = [-x for x in s[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return SnfResult(
        IntMatrix.from_rows(u, cols=nr), IntMatrix.from_rows(s, cols=nc), IntMatrix.from_rows(v, cols=nc)
    )


def unimodular_inverse(m: IntMatrix) -> IntMatrix:
    """Integer inverse of a unimodular matrix."""
    if m.rows != m.cols:
        raise DimensionError("inverse of a non-square matrix")
    h, u = hermite_normal_form(m)
    if h != IntMatrix.identity(m.rows):
        raise ValueError("matrix is not unimodular")
    return u


def kernel_lattice_basis(a: IntMatrix) -> IntMatrix:
    """Rows spanning the integer lattice ``{z in Z^n : a @ z == 0}``.

    Taken from the transform rows of the HNF of ``a.T`` that map onto zero
    rows.  The result has ``a.cols - rank(a)`` rows.
    """
    h, u = hermite_normal_form(a.T)
    r = sum(1 for i in range(h.rows) if any(h.row(i)))
    return u.submatrix(range(r, u.rows), range(u.cols))


def solve_linear_integer(a: IntMatrix, b: Sequence[int]) -> Optional[tuple[int, ...]]:
    """Some integer ``x`` with ``a @ x == b``, or ``None`` if there is none."""
    if len(b) != a.rows:
        raise DimensionError(f"right-hand side of length {len(b)} for {a.rows} rows")
    # u @ a.T == h, so a @ u.T == h.T and x = u.T @ y reduces to h.T @ y == b
    h, u = hermite_normal_form(a.T)
    y = [0] * h.rows
    for k in range(h.rows):
        row = h.row(k)
        p = next((j for j, e in enumerate(row) if e), None)
        if p is None:
            break
        rest = b[p] - sum(h[j, p] * y[j] for j in range(k))
        q, rem = divmod(rest, row[p])
        if rem:
            return None
        y[k] = q
    if h.T.dot(y) != tuple(b):
        return None
    return u.T.dot(y)
