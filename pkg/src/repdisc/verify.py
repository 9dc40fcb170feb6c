"""Verification checks run by ``repdisc verify``.

Each check compares two independent routes to the same quantity and reports
the worst absolute deviation it saw.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .closedform import (
    closed_form_binary,
    closed_form_nary,
    compare_formula_vs_enumeration,
    lemma_binomial_sum,
)
from .core import (
    DiscriminationEnsemble,
    dense_from_table,
    make_uniform_noisy_observable,
    qubit_xt,
    qubit_xt_dense,
    random_commutative_povm,
)
from .discrimination import (
    DEFAULT_BUDGET,
    brute_force_best_success,
    is_ambiguous,
    is_ambiguous_by_trace,
)
from .sequential import all_outcome_arrays, dense_luders_n_round, n_round_effect


@dataclass(frozen=True)
class CheckResult:
    check: str
    parameters: str
    worst_deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.worst_deviation <= self.tolerance


def interior_grid(n_outcomes: int, points: int) -> list[float]:
    """``points`` evenly spaced values strictly inside ``(1/N, 1)``."""
    lo = 1.0 / n_outcomes
    return [lo + (1.0 - lo) * k / (points + 1) for k in range(1, points + 1)]


def check_rule_of_three(budget: int = DEFAULT_BUDGET) -> CheckResult:
    worst = 0.0
    for lam in [0.55 + 0.05 * k for k in range(9)]:
        E = DiscriminationEnsemble(2, 2, lam)
        p1, _ = brute_force_best_success(E, 1, budget)
        p2, _ = brute_force_best_success(E, 2, budget)
        p3, _ = brute_force_best_success(E, 3, budget)
        worst = max(worst, abs(p1 - lam), abs(p2 - lam), abs(p3 - (3 * lam**2 - 2 * lam**3)))
    return CheckResult("rule-of-three-binary", "N=2 n=1..3 lambda=0.55..0.95", worst, 1e-12)


def check_binary_theorem(budget: int = DEFAULT_BUDGET) -> list[CheckResult]:
    grid = [0.5 + 0.05 * k for k in range(11)]
    formula_dev = 0.0
    collapse_dev = 0.0
    for n in (1, 3, 5, 7, 9):
        rows = compare_formula_vs_enumeration(2, n, grid, budget, tol=np.inf)
        formula_dev = max(formula_dev, max(r.abs_diff for r in rows))
        for lam in grid:
            E = DiscriminationEnsemble(2, 2, lam)
            a, _ = brute_force_best_success(E, n, budget)
            b, _ = brute_force_best_success(E, n + 1, budget)
            collapse_dev = max(
                collapse_dev,
                abs(a - b),
                abs(closed_form_binary(n, lam) - closed_form_binary(n + 1, lam)),
            )
    return [
        CheckResult("binary-closed-form-vs-enumeration", "N=2 n=1,3,5,7,9 11-point grid", formula_dev, 1e-10),
        CheckResult("binary-even-collapse", "N=2 n vs n+1, n=1,3,5,7,9", collapse_dev, 1e-12),
    ]


def check_lemma(max_n: int = 21) -> CheckResult:
    failures = 0
    for n in range(1, max_n + 1, 2):
        for i in range((n + 1) // 2, n + 1):
            try:
                lemma_binomial_sum(n, i)
            except AssertionError:
                failures += 1
    return CheckResult("binomial-lemma-exact", f"odd n<={max_n}", float(failures), 0.0)


def check_ambiguity_equivalence() -> CheckResult:
    mismatches = 0
    for N in (2, 3, 4):
        for lam in (0.4, 0.6, 0.9):
            if lam <= 1.0 / N:
                continue
            E = DiscriminationEnsemble(N, N, lam)
            A = make_uniform_noisy_observable(N, lam)
            subsets = [
                s for k in range(1, N + 1) for s in itertools.combinations(range(1, N + 1), k)
            ]
            for n in range(1, 5):
                for x in all_outcome_arrays(N, n):
                    for s in subsets:
                        if is_ambiguous(E, x, s) != is_ambiguous_by_trace(E, A, x, s):
                            mismatches += 1
    return CheckResult("ambiguity-multiplicity-vs-trace", "N=2..4 n=1..4", float(mismatches), 0.0)


def check_nary_formulas(budget: int = DEFAULT_BUDGET) -> CheckResult:
    worst = 0.0
    for N in range(3, 7):
        grid = interior_grid(N, 9)
        for n in (2, 3, 4):
            rows = compare_formula_vs_enumeration(N, n, grid, budget, tol=np.inf)
            worst = max(worst, max(r.abs_diff for r in rows))
    return CheckResult("nary-closed-form-vs-enumeration", "N=3..6 n=2,3,4 9-point grid", worst, 1e-10)


def check_dense_oracle(trials: int = 50, seed: int = 20240611) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        N = int(rng.integers(2, 5))
        d = int(rng.integers(N, 9))
        n = int(rng.integers(1, 5))
        A, U = random_commutative_povm(N, d, rng)
        effects = dense_from_table(A, U)
        x = tuple(int(v) for v in rng.integers(1, N + 1, size=n))
        dense = dense_luders_n_round(effects, x).matrix
        fast = (U * n_round_effect(A, x)) @ U.conj().T
        worst = max(worst, float(np.abs(dense - fast).max()))
    return CheckResult("dense-luders-vs-product", f"{trials} random POVMs d<=8 N<=4 n<=4", worst, 1e-10)


def check_qubit_example() -> CheckResult:
    worst = 0.0
    for t in (0.2, 0.5, 0.9):
        lp, lm = (1 + t) / 2, (1 - t) / 2
        A = qubit_xt(t)
        dense = qubit_xt_dense(t)
        plus = np.array([[1, 1], [1, 1]], dtype=complex) / 2
        minus = np.eye(2) - plus
        expected = {}
        for x in itertools.product((1, 2), repeat=2):
            k = x.count(1)
            expected[x] = {2: (lp**2, lm**2), 1: (lp * lm, lp * lm), 0: (lm**2, lp**2)}[k]
        for x in itertools.product((1, 2), repeat=3):
            k = x.count(1)
            expected[x] = {
                3: (lp**3, lm**3),
                2: (lp * lm * lp, lp * lm * lm),
                1: (lp * lm * lm, lp * lm * lp),
                0: (lm**3, lp**3),
            }[k]
        for x, (ep, em) in expected.items():
            worst = max(worst, float(np.abs(n_round_effect(A, x) - [ep, em]).max()))
            m = dense_luders_n_round(dense, x).matrix
            worst = max(worst, float(np.abs(m - (ep * plus + em * minus)).max()))
    return CheckResult("qubit-xt-two-and-three-rounds", "t=0.2,0.5,0.9", worst, 1e-12)


def check_figure_shapes() -> CheckResult:
    worst = 0.0
    grid = np.linspace(0.5, 1.0, 201)
    curves = {n: [closed_form_binary(n, v) for v in grid] for n in (1, 21, 41)}
    for n, ys in curves.items():
        worst = max(worst, max(0.0, -float(np.diff(ys).min())))
        worst = max(worst, abs(ys[0] - 0.5), abs(ys[-1] - 1.0))
    for lo, hi in ((1, 21), (21, 41)):
        worst = max(worst, max(0.0, float(np.max(np.subtract(curves[lo], curves[hi])))))
    for lam in (0.6, 0.7, 0.8):
        for n in range(2, 51, 2):
            worst = max(worst, abs(closed_form_binary(n, lam) - closed_form_binary(n - 1, lam)))
    N = 10
    for lam in interior_grid(N, 199):
        p1, p3, p4 = (closed_form_nary(n, N, lam) for n in (1, 3, 4))
        if not p4 > p3 > p1:
            worst = max(worst, 1.0)
    for n in (1, 3, 4):
        worst = max(worst, abs(closed_form_nary(n, N, 1.0 / N) - 1.0 / N), abs(closed_form_nary(n, N, 1.0) - 1.0))
    return CheckResult("figure-curve-shapes", "binary n=1,21,41; staircase n<=50; N=10 n=1,3,4", worst, 1e-12)


def check_custom(n_outcomes: int, rounds: Iterable[int], lambdas: Iterable[float], budget: int) -> list[CheckResult]:
    out = []
    lambdas = list(lambdas)
    for n in rounds:
        rows = compare_formula_vs_enumeration(n_outcomes, n, lambdas, budget, tol=np.inf)
        worst = max(r.abs_diff for r in rows)
        out.append(
            CheckResult(
                "closed-form-vs-enumeration",
                f"N={n_outcomes} n={n} lambda={','.join(f'{v:.12g}' for v in sorted(lambdas))}",
                worst,
                1e-10,
            )
        )
    return out


def run_default_suite(budget: int = DEFAULT_BUDGET) -> list[CheckResult]:
    return [
        check_rule_of_three(budget),
        *check_binary_theorem(budget),
        check_lemma(),
        check_ambiguity_equivalence(),
        check_nary_formulas(budget),
        check_dense_oracle(),
        check_qubit_example(),
        check_figure_shapes(),
    ]
