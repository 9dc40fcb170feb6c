"""Closed-form optimal success probabilities and their enumeration cross-checks."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .core import DiscriminationEnsemble, check_lambda
from .discrimination import DEFAULT_BUDGET, brute_force_best_success
from .errors import RangeError, ToleranceViolation, UnsupportedRounds


def _odd_depth(n: int) -> int:
    if n < 1:
        raise ValueError(f"rounds must be >= 1, got {n}")
    return n if n % 2 else n - 1


@lru_cache(maxsize=None)
def binary_coefficients(n: int) -> tuple[int, ...]:
    """Exact integer coefficients ``c_i``, ``i = (n+1)/2 .. n``, for odd ``n``.

    ``c_i = C(n, i) C(i-1, (n-1)/2) (-1)**(i - (n+1)/2)``.
    """
    if n < 1 or n % 2 == 0:
        raise RangeError(f"binary coefficients need odd n >= 1, got {n}")
    h = (n + 1) // 2
    return tuple(
        math.comb(n, i) * math.comb(i - 1, h - 1) * (-1) ** (i - h) for i in range(h, n + 1)
    )


@dataclass(frozen=True)
class BinarySuccessFormula:
    """Polynomial ``sum_i c_i lam**i`` for the optimal binary success after ``n`` (odd) rounds."""

    n: int

    @property
    def coefficients(self) -> tuple[int, ...]:
        return binary_coefficients(self.n)

    @property
    def lowest_power(self) -> int:
        return (self.n + 1) // 2

    def exact(self, lam) -> Fraction:
        """Evaluate in rational arithmetic; ``lam`` may be a float, int or Fraction."""
        x = Fraction(lam)
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc * x**self.lowest_power

    def __call__(self, lam: float) -> float:
        # the alternating coefficients grow like 4**n; float Horner would cancel
        return float(self.exact(lam))


def closed_form_binary(n: int, lam: float) -> float:
    """Optimal two-state success probability after ``n`` rounds.

    Even ``n`` gives the same value as ``n - 1``.
    """
    lam = check_lambda(lam, 2)
    return BinarySuccessFormula(_odd_depth(n))(min(lam, 1.0))


def binary_sum_form(n: int, lam: float) -> float:
    """``(1 + sum_p C(n,p) (lam**p (1-lam)**(n-p) - lam**(n-p) (1-lam)**p)) / 2``.

    The sum runs over ``p > n/2``: from ``(n+1)/2`` for odd ``n`` and from
    ``n/2 + 1`` for even ``n`` (the balanced arrays are ambiguous).
    """
    lam = check_lambda(lam, 2)
    if n < 1:
        raise ValueError(f"rounds must be >= 1, got {n}")
    q = 1.0 - lam
    start = n // 2 + 1
    terms = [math.comb(n, p) * (lam**p * q ** (n - p) - lam ** (n - p) * q**p) for p in range(start, n + 1)]
    return 0.5 * (1.0 + math.fsum(terms))


def lemma_binomial_sum(n: int, i: int) -> int:
    """``sum_{j=0}^{i-(n+1)/2} C(i,j) (-1)**j``, checked against ``C(i-1,(n-1)/2) (-1)**(i-(n+1)/2)``."""
    if n < 1 or n % 2 == 0:
        raise RangeError(f"n must be odd and positive, got {n}")
    h = (n + 1) // 2
    if not h <= i <= n:
        raise RangeError(f"i={i} outside [{h}, {n}]")
    lhs = sum(math.comb(i, j) * (-1) ** j for j in range(i - h + 1))
    rhs = math.comb(i - 1, h - 1) * (-1) ** (i - h)
    if lhs != rhs:
        raise AssertionError(f"binomial identity fails at n={n}, i={i}: {lhs} != {rhs}")
    return lhs


NARY_MAX_ROUNDS = 4


def closed_form_nary(n: int, n_outcomes: int, lam: float) -> float:
    """Optimal N-state success probability for ``n <= 4`` rounds."""
    N = int(n_outcomes)
    if N < 2:
        raise ValueError("need N >= 2")
    lam = check_lambda(lam, N)
    if n < 1:
        raise ValueError(f"rounds must be >= 1, got {n}")
    if n > NARY_MAX_ROUNDS:
        raise UnsupportedRounds(f"no closed form for n={n} > {NARY_MAX_ROUNDS}")
    if n <= 2:
        return lam
    if n == 3:
        return lam * ((N - 2) + (N + 1) * lam - N * lam**2) / (N - 1)
    poly = (
        (N - 2) * (N - 3)
        + 3 * (N**2 - 3) * lam
        + (4 + 7 * N - 5 * N**2) * lam**2
        + 2 * N * (N - 2) * lam**3
    )
    return lam * poly / (N - 1) ** 2


@dataclass(frozen=True)
class ComparisonRow:
    lam: float
    formula: float
    enumeration: float
    abs_diff: float


def formula_value(n_outcomes: int, n: int, lam: float) -> float:
    if n_outcomes == 2:
        return closed_form_binary(n, lam)
    return closed_form_nary(n, n_outcomes, lam)


def compare_formula_vs_enumeration(
    n_outcomes: int,
    n: int,
    lambda_grid: Sequence[float],
    budget: int = DEFAULT_BUDGET,
    tol: float = 1e-10,
) -> list[ComparisonRow]:
    """Closed form against full enumeration on ``lambda_grid``; rows sorted by lambda."""
    if n_outcomes >= 3 and n > NARY_MAX_ROUNDS:
        raise UnsupportedRounds(f"no N-ary closed form for n={n}")
    rows = []
    for lam in sorted(float(v) for v in lambda_grid):
        f = formula_value(n_outcomes, n, lam)
        e, _ = brute_force_best_success(DiscriminationEnsemble(n_outcomes, n_outcomes, lam), n, budget)
        rows.append(ComparisonRow(lam, f, e, abs(f - e)))
    if rows:
        worst = max(rows, key=lambda r: r.abs_diff)
        if not worst.abs_diff < tol:
            raise ToleranceViolation(
                f"N={n_outcomes}, n={n}: |formula - enumeration| = {worst.abs_diff:.3e} "
                f"at lambda={worst.lam} exceeds {tol:g}",
                worst,
            )
    return rows
