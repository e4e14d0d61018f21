"""Randomized and exhaustive checks of the box bound and its companions.

Oracles here are deliberately naive: the brute-force box search shares
no code with the pruned solver it is compared against.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import combinations, product
from typing import Optional, Sequence

import numpy as np

from .diophantine import (
    DEFAULT_CAP,
    DiophantineSystem,
    SolutionCertificate,
    find_bounded_solution,
    gcd_maximal_minors,
    is_bounded_m,
    minor_bound,
    saturate,
)
from .exact_linalg import IntMatrix, determinant, kernel_lattice_basis, rank
from .rng import MASK64, SplitMix64

DEFAULT_BUDGET = 10_000_000
ORACLE_MAX_N = 4
ORACLE_MAX_D = 50
MAX_RESAMPLES = 100
MAX_HULL_POINTS = 200
MODES = ("theorem", "lemma", "oracle", "saturation")


class GeneratorError(RuntimeError):
    pass


class BudgetError(RuntimeError):
    """An enumeration would visit more points than allowed."""


class PreconditionError(ValueError):
    pass


class ContainmentError(AssertionError):
    """A bounded solution set has a point outside ``[0, d]^n``."""


@dataclass(frozen=True)
class GenParams:
    m: int
    n: int
    entry_bound: int = 5
    witness_bound: int = 4
    seed: int = 0

    def __post_init__(self) -> None:
        if not 1 <= self.m <= self.n:
            raise ValueError(f"need 1 <= m <= n, got m={self.m}, n={self.n}")
        if self.entry_bound < 1 or self.witness_bound < 0:
            raise ValueError("entry_bound must be positive, witness_bound nonnegative")
        if not 0 <= self.seed <= MASK64:
            raise ValueError("seed must be an unsigned 64-bit integer")


@dataclass(frozen=True)
class TheoremReport:
    d: int
    feasible: bool
    certificate: Optional[SolutionCertificate]
    holds: bool
    oracle_agrees: Optional[bool] = None


@dataclass(frozen=True)
class Failure:
    seed: int
    system: Optional[DiophantineSystem]
    detail: str


@dataclass
class CampaignReport:
    trials: int
    failures: list[Failure] = field(default_factory=list)
    elapsed: float = 0.0  # milliseconds

    @property
    def passed(self) -> bool:
        return not self.failures


def _draw_system(rng: SplitMix64, p: GenParams) -> tuple[DiophantineSystem, tuple[int, ...]]:
    eb = p.entry_bound
    for _ in range(MAX_RESAMPLES):
        a = IntMatrix(p.m, p.n, tuple(rng.randint(-eb, eb) for _ in range(p.m * p.n)))
        if rank(a) == p.m:
            break
    else:
        raise GeneratorError(f"no rank-{p.m} matrix in {MAX_RESAMPLES} draws")
    w = tuple(rng.randint(0, p.witness_bound) for _ in range(p.n))
    return DiophantineSystem(a, a.dot(w)), w


def random_feasible_instance(p: GenParams) -> tuple[DiophantineSystem, tuple[int, ...]]:
    """A full-rank system ``(A, A @ w)`` and its nonnegative witness ``w``."""
    return _draw_system(SplitMix64(p.seed), p)


def _numpy_safe(a: IntMatrix, b: Sequence[int], lo: int, hi: int) -> bool:
    reach = max(abs(lo), abs(hi), 1)
    worst = max((abs(e) for e in a.entries), default=0) * reach * a.cols + max(map(abs, b), default=0)
    return worst < 1 << 62


def enumerate_box(
    sys: DiophantineSystem, lo: int, hi: int, budget: int = DEFAULT_BUDGET
) -> list[tuple[int, ...]]:
    """Every ``x`` in ``[lo, hi]^n`` with ``A x = b``, in lexicographic order.

    Plain exhaustive enumeration; vectorized with int64 only when no
    intermediate can overflow.
    """
    n = sys.n
    side = hi - lo + 1
    if side <= 0:
        return []
    if side ** n > budget:
        raise BudgetError(f"{side}^{n} points exceed the budget of {budget}")
    if not _numpy_safe(sys.a, sys.b, lo, hi):
        return [x for x in product(range(lo, hi + 1), repeat=n) if sys.satisfied_by(x)]
    a = np.array(sys.a.to_rows(), dtype=np.int64)
    b = np.array(sys.b, dtype=np.int64)
    if n == 1:
        inner = np.zeros((0, 1), dtype=np.int64)
    else:
        inner = (np.indices((side,) * (n - 1)).reshape(n - 1, -1) + lo).astype(np.int64)
    partial = a[:, 1:] @ inner
    found = []
    for first in range(lo, hi + 1):
        target = b - a[:, 0] * first
        hits = np.nonzero(np.all(partial == target[:, None], axis=0))[0]
        found.extend((first, *map(int, inner[:, j])) for j in hits)
    return found


def brute_force_box_search(
    sys: DiophantineSystem, cap: int, budget: int = DEFAULT_BUDGET
) -> list[tuple[int, ...]]:
    """All solutions in ``[0, cap]^n`` in lexicographic order."""
    return enumerate_box(sys, 0, cap, budget)


def _oracle_applies(sys: DiophantineSystem, d: int) -> bool:
    return sys.n <= ORACLE_MAX_N and d <= ORACLE_MAX_D


def check_theorem(sys: DiophantineSystem, cap: int = DEFAULT_CAP) -> TheoremReport:
    d = minor_bound(sys)
    cert = find_bounded_solution(sys, cap)
    agrees = None
    feasible = cert is not None
    if _oracle_applies(sys, d):
        sols = brute_force_box_search(sys, d)
        feasible = feasible or bool(sols)
        agrees = (cert.x0 if cert else None) == (sols[0] if sols else None)
    holds = not feasible or (cert is not None and max(cert.x0, default=0) <= d)
    return TheoremReport(d, feasible, cert, holds, agrees)


def lemma_violation(a: IntMatrix) -> Optional[tuple[int, ...]]:
    """First column set ``I`` whose minor of ``a`` differs in absolute value
    from the complementary minor of the kernel basis, or ``None``."""
    m, n = a.rows, a.cols
    if rank(a) != m:
        raise PreconditionError("matrix must have full row rank")
    if gcd_maximal_minors(a) != 1:
        raise PreconditionError("gcd of maximal minors must be 1; saturate first")
    h = kernel_lattice_basis(a)
    every = range(n)
    for cols in combinations(every, m):
        rest = [j for j in every if j not in cols]
        if abs(determinant(a.submatrix(range(m), cols))) != abs(determinant(h.submatrix(range(h.rows), rest))):
            return cols
    return None


def check_lemma(a: IntMatrix) -> bool:
    return lemma_violation(a) is None


def _phase_one_feasible(cols: list[list[Fraction]], rhs: list[Fraction]) -> bool:
    """Is there ``lam >= 0`` with ``sum_j lam_j * cols[j] == rhs``?

    Exact phase-one simplex with Bland's rule.
    """
    rows = len(rhs)
    k = len(cols)
    tab = []
    for i in range(rows):
        sign = -1 if rhs[i] < 0 else 1
        row = [sign * cols[j][i] for j in range(k)]
        row += [Fraction(int(i == t)) for t in range(rows)]
        row.append(sign * rhs[i])
        tab.append(row)
    width = k + rows
    basis = [k + i for i in range(rows)]
    # reduced costs of the artificial objective
    cost = [-sum(tab[i][j] for i in range(rows)) for j in range(width + 1)]
    for j in range(k, width):
        cost[j] = Fraction(0)
    while True:
        enter = next((j for j in range(width) if cost[j] < 0), None)
        if enter is None:
            break
        best = None
        for i in range(rows):
            if tab[i][enter] > 0:
                ratio = tab[i][-1] / tab[i][enter]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            break  # unbounded direction; cannot happen with a bounded objective
        piv_row = best[1]
        piv = tab[piv_row][enter]
        tab[piv_row] = [x / piv for x in tab[piv_row]]
        for i in range(rows):
            if i != piv_row and tab[i][enter]:
                f = tab[i][enter]
                tab[i] = [x - f * y for x, y in zip(tab[i], tab[piv_row])]
        f = cost[enter]
        cost = [x - f * y for x, y in zip(cost, tab[piv_row])]
        basis[piv_row] = enter
    return cost[-1] == 0


def in_convex_hull(point: Sequence[int], others: Sequence[Sequence[int]]) -> bool:
    """Exact test whether ``point`` is a convex combination of ``others``."""
    if not others:
        return False
    cols = [[Fraction(c) for c in q] + [Fraction(1)] for q in others]
    rhs = [Fraction(c) for c in point] + [Fraction(1)]
    return _phase_one_feasible(cols, rhs)


def conv_vertices(points: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Points that are not convex combinations of the remaining points."""
    pts = sorted(set(map(tuple, points)))
    return [p for i, p in enumerate(pts) if not in_convex_hull(p, pts[:i] + pts[i + 1:])]


def check_vertex_remark(
    sys: DiophantineSystem, cap: int = DEFAULT_CAP, budget: int = DEFAULT_BUDGET
) -> bool:
    """For bounded M: all of M sits in ``[0, d]^n`` and some hull vertex obeys the bound.

    Raises :class:`ContainmentError` if a solution turns up in ``(d, 2d]``.
    An empty M passes vacuously.
    """
    if not is_bounded_m(sys, cap):
        raise PreconditionError("solution set is unbounded")
    d = minor_bound(sys)
    sols = brute_force_box_search(sys, 2 * d, budget)
    outside = [x for x in sols if max(x) > d]
    if outside:
        raise ContainmentError(f"{outside[0]} solves the system but exceeds d={d}")
    if not sols:
        return True
    if len(sols) > MAX_HULL_POINTS:
        raise BudgetError(f"{len(sols)} points exceed the hull limit of {MAX_HULL_POINTS}")
    return any(max(v) <= d for v in conv_vertices(sols))


def _trial_theorem(p: GenParams) -> tuple[Optional[DiophantineSystem], Optional[str]]:
    sys, w = random_feasible_instance(p)
    rep = check_theorem(sys)
    if rep.certificate is None:
        return sys, f"no certificate although witness {w} solves the system"
    if not rep.holds:
        return sys, f"certificate {rep.certificate.x0} exceeds d={rep.d}"
    if rep.oracle_agrees is False:
        return sys, "solver and oracle disagree"
    return sys, None


def _trial_lemma(p: GenParams) -> tuple[Optional[DiophantineSystem], Optional[str]]:
    sys, _ = random_feasible_instance(p)
    a = saturate(DiophantineSystem(sys.a, (0,) * sys.m)).a_prime
    bad = lemma_violation(a)
    return sys, None if bad is None else f"minor duality fails on columns {bad} of {a}"


def oracle_instance(p: GenParams) -> DiophantineSystem:
    """A system with ``d <= 50``; about half get a perturbed, possibly infeasible ``b``."""
    if p.n > ORACLE_MAX_N:
        raise ValueError(f"oracle mode needs n <= {ORACLE_MAX_N}")
    rng = SplitMix64(p.seed)
    for _ in range(MAX_RESAMPLES):
        sys, _ = _draw_system(rng, p)
        if rng.randint(0, 1):
            b = list(sys.b)
            b[rng.randint(0, sys.m - 1)] += rng.randint(1, p.entry_bound)
            sys = DiophantineSystem(sys.a, tuple(b))
        if minor_bound(sys) <= ORACLE_MAX_D:
            return sys
    raise GeneratorError(f"no instance with d <= {ORACLE_MAX_D} in {MAX_RESAMPLES} draws")


def _trial_oracle(p: GenParams) -> tuple[Optional[DiophantineSystem], Optional[str]]:
    if p.n > ORACLE_MAX_N:
        return None, f"oracle mode needs n <= {ORACLE_MAX_N}"
    sys = oracle_instance(p)
    cert = find_bounded_solution(sys)
    sols = brute_force_box_search(sys, minor_bound(sys))
    got = cert.x0 if cert else None
    want = sols[0] if sols else None
    return sys, None if got == want else f"solver {got} vs oracle {want}"


def _trial_saturation(p: GenParams) -> tuple[Optional[DiophantineSystem], Optional[str]]:
    rng = SplitMix64(p.seed)
    base, _ = _draw_system(rng, p)
    factors = [rng.randint(2, 4) for _ in range(base.m)]
    a = IntMatrix.from_rows([[f * e for e in base.a.row(i)] for i, f in enumerate(factors)])
    sys = DiophantineSystem(a, tuple(f * v for f, v in zip(factors, base.b)))
    sat = saturate(sys)
    if gcd_maximal_minors(sat.a_prime) != 1:
        return sys, f"saturated matrix {sat.a_prime} still has minor gcd > 1"
    if sat.g != gcd_maximal_minors(sys.a):
        return sys, f"removed factor {sat.g} is not the minor gcd"
    sat_sys = DiophantineSystem(sat.a_prime, sat.b_prime)
    if enumerate_box(sys, -4, 4) != enumerate_box(sat_sys, -4, 4):
        return sys, "solution sets differ on [-4, 4]^n"
    return sys, None


_TRIALS = {
    "theorem": _trial_theorem,
    "lemma": _trial_lemma,
    "oracle": _trial_oracle,
    "saturation": _trial_saturation,
}


def run_trial(mode: str, p: GenParams) -> Optional[Failure]:
    """One trial seeded with ``p.seed``; errors become failures."""
    sys = None
    try:
        sys, detail = _TRIALS[mode](p)
    except Exception as exc:  # corpus runs must record, not abort
        detail = f"{type(exc).__name__}: {exc}"
    return None if detail is None else Failure(p.seed, sys, detail)


def fuzz_campaign(p: GenParams, trials: int, mode: str, workers: int = 1) -> CampaignReport:
    """Run ``trials`` checks on seeds ``p.seed, p.seed + 1, ...``.

    Failures are listed in trial order whatever ``workers`` is.
    """
    if mode not in _TRIALS:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    start = time.perf_counter()
    params = [replace(p, seed=(p.seed + i) & MASK64) for i in range(trials)]
    if workers > 1 and trials > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(run_trial, [mode] * trials, params))
    else:
        results = [run_trial(mode, q) for q in params]
    elapsed = (time.perf_counter() - start) * 1000
    return CampaignReport(trials, [f for f in results if f is not None], elapsed)
