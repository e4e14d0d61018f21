"""Linear Diophantine systems ``A x = b, x >= 0``.

The central quantity is the minor bound ``d``: the largest absolute
m x m minor of the augmented matrix ``(A b)``.  Whenever the system has a
nonnegative integer solution it has one inside the box ``[0, d]^n``, so a
pruned depth-first search over that box decides feasibility exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import gcd, prod
from typing import Iterator, Optional, Sequence

from .exact_linalg import (
    DimensionError,
    IntMatrix,
    determinant,
    hermite_normal_form,
    kernel_lattice_basis,
    maximal_minors,
    rank,
    smith_normal_form,
    solve_linear_integer,
    unimodular_inverse,
)

DEFAULT_CAP = 10_000


class InfeasibleError(ValueError):
    """The system has no integer solution at all (sign constraints ignored)."""


class NotInCosetError(ValueError):
    """A vector is not an integer solution of the system."""


class BoundTooLargeError(RuntimeError):
    """The box bound exceeds the configured search cap."""

    def __init__(self, d: int, cap: int) -> None:
        super().__init__(f"bound d={d} exceeds search cap {cap}")
        self.d = d
        self.cap = cap


@dataclass(frozen=True)
class DiophantineSystem:
    """``a @ x == b`` with ``a`` of full row rank m and n >= m columns."""

    a: IntMatrix
    b: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "b", tuple(int(v) for v in self.b))
        if len(self.b) != self.a.rows:
            raise DimensionError(f"b has length {len(self.b)}, A has {self.a.rows} rows")
        if self.a.rows < 1:
            raise ValueError("system needs at least one equation")
        if self.a.cols < self.a.rows:
            raise ValueError(f"need n >= m, got m={self.a.rows}, n={self.a.cols}")
        r = rank(self.a)
        if r != self.a.rows:
            raise ValueError(f"A has rank {r} < m={self.a.rows}")

    @classmethod
    def from_lists(cls, a: Sequence[Sequence[int]], b: Sequence[int]) -> "DiophantineSystem":
        return cls(IntMatrix.from_rows(a), tuple(b))

    @property
    def m(self) -> int:
        return self.a.rows

    @property
    def n(self) -> int:
        return self.a.cols

    def residual(self, x: Sequence[int]) -> tuple[int, ...]:
        return tuple(lhs - rhs for lhs, rhs in zip(self.a.dot(x), self.b))

    def satisfied_by(self, x: Sequence[int]) -> bool:
        return len(x) == self.n and not any(self.residual(x))


@dataclass(frozen=True)
class KernelRepresentation:
    """All integer solutions as ``x1 + h.T @ y`` for integer ``y``."""

    x1: tuple[int, ...]
    h: IntMatrix


@dataclass(frozen=True)
class SolutionCertificate:
    x0: tuple[int, ...]
    d: int


@dataclass(frozen=True)
class SaturationResult:
    a_prime: IntMatrix
    b_prime: tuple[int, ...]
    g: int


def minor_bound(sys: DiophantineSystem) -> int:
    """Largest absolute m x m minor of ``(A b)``."""
    return max(abs(v) for _, v in maximal_minors(sys.a.augment(sys.b), sys.m))


def gcd_maximal_minors(a: IntMatrix) -> int:
    """gcd of all ``a.rows`` x ``a.rows`` minors; 0 when ``a`` is rank deficient."""
    if a.rows > a.cols:
        raise DimensionError("more rows than columns")
    return gcd(*(v for _, v in maximal_minors(a, a.rows)))


def saturate(sys: DiophantineSystem) -> SaturationResult:
    """Divide the gcd of the maximal minors out of ``A`` without changing solutions.

    With ``u @ A @ v == s`` write ``A = D @ [I 0] @ v^-1`` where
    ``D = u^-1 @ diag(s)``.  The saturated system is ``[I 0] @ v^-1``,
    right-hand side ``D^-1 @ b``, brought to Hermite form.
    """
    if solve_linear_integer(sys.a, sys.b) is None:
        raise InfeasibleError("b is not in the lattice spanned by the columns of A")
    u, s, v = smith_normal_form(sys.a)
    diag = [s[i, i] for i in range(sys.m)]
    ub = u.dot(sys.b)
    b_sat = []
    for value, factor in zip(ub, diag):
        q, r = divmod(value, factor)
        if r:
            raise InfeasibleError("b is not in the lattice spanned by the columns of A")
        b_sat.append(q)
    vinv = unimodular_inverse(v)
    a_sat = vinv.submatrix(range(sys.m), range(sys.n))
    h, hu = hermite_normal_form(a_sat)
    return SaturationResult(h, hu.dot(b_sat), prod(diag))


def kernel_representation(sys: DiophantineSystem) -> KernelRepresentation:
    x1 = solve_linear_integer(sys.a, sys.b)
    if x1 is None:
        raise InfeasibleError("system has no integer solution")
    return KernelRepresentation(x1, kernel_lattice_basis(sys.a))


def to_ambient(rep: KernelRepresentation, y: Sequence[int]) -> tuple[int, ...]:
    if len(y) != rep.h.rows:
        raise DimensionError(f"y has length {len(y)}, basis has {rep.h.rows} rows")
    return tuple(a + b for a, b in zip(rep.x1, rep.h.T.dot(y)))


def from_ambient(
    rep: KernelRepresentation, x: Sequence[int], sys: Optional[DiophantineSystem] = None
) -> tuple[int, ...]:
    """The unique ``y`` with ``to_ambient(rep, y) == x``.

    If ``sys`` is given, ``x`` is first checked against it.
    """
    if len(x) != len(rep.x1):
        raise DimensionError(f"x has length {len(x)}, expected {len(rep.x1)}")
    if sys is not None and not sys.satisfied_by(x):
        raise NotInCosetError(f"{tuple(x)} does not solve the system")
    y = solve_linear_integer(rep.h.T, [a - b for a, b in zip(x, rep.x1)])
    if y is None:
        raise NotInCosetError(f"{tuple(x)} is not in the solution coset")
    return y


def _eliminating_combinations(cols: Sequence[Sequence[int]], m: int) -> list[tuple[int, ...]]:
    """Row combinations ``u`` that annihilate some m-1 of ``cols``, plus the unit rows.

    ``u_i`` is the signed minor of the chosen columns with row i deleted,
    so ``u . c == det([chosen | c])``.  Scaled to primitive form and
    deduplicated up to sign.
    """
    found = {tuple(int(i == t) for t in range(m)) for i in range(m)}
    for chosen in combinations(cols, m - 1):
        u = []
        for i in range(m):
            keep = [t for t in range(m) if t != i]
            sub = IntMatrix.from_rows([[c[t] for c in chosen] for t in keep], cols=m - 1)
            u.append((-1) ** i * determinant(sub))
        g = gcd(*u)
        if g == 0:
            continue
        u = [e // g for e in u]
        if next(e for e in u if e) < 0:
            u = [-e for e in u]
        found.add(tuple(u))
    return sorted(found)


def _box_solutions(a: IntMatrix, b: Sequence[int], bound: int) -> Iterator[tuple[int, ...]]:
    """Solutions of ``a @ x == b`` in ``[0, bound]^n``, lexicographically ascending.

    Depth-first over x_0, x_1, ... with values ascending.  A node with
    x_0..x_{k-1} fixed survives only if, for every equation and every
    combination of equations that eliminates m-1 free columns, the
    residual fits the interval and the gcd of the free coefficients, and
    the residual lies in the lattice spanned by the free columns.  The
    combination intervals are the facets of ``A_free @ [0, bound]^free``,
    so a full-rank node survives exactly when its box relaxation is
    feasible.
    """
    m, n = a.rows, a.cols
    cols = [a.column(j) for j in range(n)]
    # per depth k: (u, lo, hi, gcd of u.c_j for free j, u.c_k)
    checks: list[list[tuple[tuple[int, ...], int, int, int, int]]] = []
    lattices: list[list[tuple[int, tuple[int, ...]]]] = []
    for k in range(n + 1):
        free = cols[k:]
        level = []
        for u in _eliminating_combinations(free, m):
            coef = [sum(ui * ci for ui, ci in zip(u, c)) for c in free]
            level.append((
                u,
                sum(min(c, 0) for c in coef) * bound,
                sum(max(c, 0) for c in coef) * bound,
                gcd(*coef),
                coef[0] if coef else 0,
            ))
        checks.append(level)
        h, _ = hermite_normal_form(IntMatrix.from_rows(free, cols=m))
        basis = []
        for i in range(h.rows):
            row = h.row(i)
            piv = next((t for t, e in enumerate(row) if e), None)
            if piv is not None:
                basis.append((piv, row))
        lattices.append(basis)

    def in_lattice(k: int, res: list[int]) -> bool:
        r = list(res)
        for piv, row in lattices[k]:
            q, rem = divmod(r[piv], row[piv])
            if rem:
                return False
            if q:
                r = [x - q * y for x, y in zip(r, row)]
        return not any(r)

    def viable(k: int, res: list[int]) -> bool:
        for u, lo, hi, g, _ in checks[k]:
            t = sum(x * y for x, y in zip(u, res))
            if g == 0:
                if t:
                    return False
            elif t % g or not lo <= t <= hi:
                return False
        return in_lattice(k, res)

    def value_range(k: int, res: list[int]) -> tuple[int, int]:
        lo, hi = 0, bound
        for u, e_lo, e_hi, _, c in checks[k]:
            if c == 0:
                continue
            t = sum(x * y for x, y in zip(u, res))
            # c * x_k lies in [t - rest_hi, t - rest_lo]
            t_lo = t - (e_hi - max(c, 0) * bound)
            t_hi = t - (e_lo - min(c, 0) * bound)
            if c > 0:
                lo = max(lo, -(-t_lo // c))
                hi = min(hi, t_hi // c)
            else:
                lo = max(lo, -(-t_hi // c))
                hi = min(hi, t_lo // c)
            if lo > hi:
                break
        return lo, hi

    x = [0] * n

    def search(k: int, res: list[int]) -> Iterator[tuple[int, ...]]:
        if k == n:
            yield tuple(x)
            return
        lo, hi = value_range(k, res)
        col = cols[k]
        for val in range(lo, hi + 1):
            nxt = [r - c * val for r, c in zip(res, col)]
            if viable(k + 1, nxt):
                x[k] = val
                yield from search(k + 1, nxt)
        x[k] = 0

    if viable(0, list(b)):
        yield from search(0, list(b))


def find_bounded_solution(
    sys: DiophantineSystem, cap: int = DEFAULT_CAP
) -> Optional[SolutionCertificate]:
    """Lexicographically smallest solution in ``[0, d]^n``, or ``None`` if ``M`` is empty."""
    d = minor_bound(sys)
    if d > cap:
        raise BoundTooLargeError(d, cap)
    if not any(sys.b):
        return SolutionCertificate((0,) * sys.n, d)
    x0 = next(_box_solutions(sys.a, sys.b, d), None)
    return None if x0 is None else SolutionCertificate(x0, d)


def is_feasible(sys: DiophantineSystem, cap: int = DEFAULT_CAP) -> bool:
    return find_bounded_solution(sys, cap) is not None


def is_bounded_m(sys: DiophantineSystem, cap: int = DEFAULT_CAP) -> bool:
    """True iff ``{x >= 0 : A x = 0}`` is just the origin.

    Every extreme ray of that cone has a generator whose coordinates are
    absolute m x m minors of ``A``, so looking for a nonzero point in
    ``[0, d0]^n`` with ``d0`` the largest such minor is decisive.
    """
    d0 = max(abs(v) for _, v in maximal_minors(sys.a, sys.m))
    if d0 > cap:
        raise BoundTooLargeError(d0, cap)
    found = _box_solutions(sys.a, (0,) * sys.m, d0)
    next(found)  # the origin comes first
    return next(found, None) is None
