"""Acceptance criteria, one test per criterion.

Each test records a ``PASS``/``FAIL`` line (with worst deviation and runtime)
that is printed in the pytest terminal summary.
"""

import itertools
import math
import time

import numpy as np
import pytest

from repdisc import (
    DiscriminationEnsemble,
    all_outcome_arrays,
    brute_force_best_success,
    closed_form_binary,
    closed_form_nary,
    dense_luders_n_round,
    is_ambiguous,
    is_ambiguous_by_trace,
    lemma_binomial_sum,
    make_uniform_noisy_observable,
    n_round_effect,
    qubit_xt,
    qubit_xt_dense,
)
from repdisc.core import dense_from_table, random_commutative_povm

REPORT: list[str] = []


def record(number, title, ok, worst, tol, seconds, limit):
    status = "PASS" if ok else "FAIL"
    REPORT.append(
        f"[{status}] criterion {number}: {title} | worst={worst:.3e} tol={tol:g} | "
        f"{seconds:.3f}s (limit {limit:g}s)"
    )


def best(N, n, lam):
    return brute_force_best_success(DiscriminationEnsemble(N, N, lam), n)[0]


def interior(N, points):
    lo = 1 / N
    return [lo + (1 - lo) * k / (points + 1) for k in range(1, points + 1)]


def p3_formula(N, lam):
    return lam * ((N - 2) + (N + 1) * lam - N * lam**2) / (N - 1)


def p4_formula(N, lam):
    poly = (N - 2) * (N - 3) + 3 * (N**2 - 3) * lam + (4 + 7 * N - 5 * N**2) * lam**2 + 2 * N * (N - 2) * lam**3
    return lam * poly / (N - 1) ** 2


def test_criterion_1_rule_of_three_binary():
    t0 = time.perf_counter()
    worst = 0.0
    for lam in [0.55 + 0.05 * k for k in range(9)]:
        p1, p2, p3 = (best(2, n, lam) for n in (1, 2, 3))
        worst = max(worst, abs(p1 - lam), abs(p2 - lam), abs(p2 - p1), abs(p3 - (3 * lam**2 - 2 * lam**3)))
    dt = time.perf_counter() - t0
    ok = worst <= 1e-12 and dt < 1
    record(1, "binary rule of three", ok, worst, 1e-12, dt, 1)
    assert ok


def test_criterion_2_binary_theorem_at_depth():
    t0 = time.perf_counter()
    grid = [0.5 + 0.05 * k for k in range(11)]
    formula_dev = collapse_dev = 0.0
    for n in (1, 3, 5, 7, 9):
        for lam in grid:
            pn, pn1 = best(2, n, lam), best(2, n + 1, lam)
            formula_dev = max(formula_dev, abs(closed_form_binary(n, lam) - pn))
            collapse_dev = max(
                collapse_dev,
                abs(pn1 - pn),
                abs(closed_form_binary(n + 1, lam) - closed_form_binary(n, lam)),
            )
    dt = time.perf_counter() - t0
    ok = formula_dev <= 1e-10 and collapse_dev <= 1e-12 and dt < 5
    record(2, "closed form vs enumeration, n and n+1 agree", ok, max(formula_dev, collapse_dev), 1e-10, dt, 5)
    assert ok


def test_criterion_3_lemma_exact():
    t0 = time.perf_counter()
    failures = 0
    for n in range(1, 22, 2):
        h = (n + 1) // 2
        for i in range(h, n + 1):
            lhs = sum(math.comb(i, j) * (-1) ** j for j in range(i - h + 1))
            rhs = math.comb(i - 1, h - 1) * (-1) ** (i - h)
            try:
                value = lemma_binomial_sum(n, i)
            except AssertionError:
                failures += 1
                continue
            failures += int(not (lhs == rhs == value))
    dt = time.perf_counter() - t0
    ok = failures == 0 and dt < 1
    record(3, "binomial lemma, exact integers, odd n <= 21", ok, float(failures), 0, dt, 1)
    assert ok


def test_criterion_4_ambiguity_equivalence():
    t0 = time.perf_counter()
    mismatches = 0
    checked = 0
    for N in (2, 3, 4):
        subsets = [s for k in range(1, N + 1) for s in itertools.combinations(range(1, N + 1), k)]
        for lam in (0.4, 0.6, 0.9):
            if lam <= 1 / N:
                continue
            E = DiscriminationEnsemble(N, N, lam)
            A = make_uniform_noisy_observable(N, lam)
            for n in range(1, 5):
                for x in all_outcome_arrays(N, n):
                    for s in subsets:
                        checked += 1
                        mismatches += is_ambiguous(E, x, s) != is_ambiguous_by_trace(E, A, x, s)
    dt = time.perf_counter() - t0
    ok = mismatches == 0 and checked > 0 and dt < 10
    record(4, f"ambiguity: multiplicity test == trace test ({checked} cases)", ok, float(mismatches), 0, dt, 10)
    assert ok


def test_criterion_5_nary_formulas():
    t0 = time.perf_counter()
    worst = 0.0
    for N in range(3, 7):
        for lam in interior(N, 9):
            p2, p3, p4 = (best(N, n, lam) for n in (2, 3, 4))
            worst = max(
                worst,
                abs(p2 - lam),
                abs(p3 - p3_formula(N, lam)),
                abs(p4 - p4_formula(N, lam)),
                abs(p3 - closed_form_nary(3, N, lam)),
                abs(p4 - closed_form_nary(4, N, lam)),
            )
    dt = time.perf_counter() - t0
    ok = worst <= 1e-10 and dt < 30
    record(5, "N-ary two, three and four rounds, N = 3..6", ok, worst, 1e-10, dt, 30)
    assert ok


def test_criterion_6_dense_oracle():
    t0 = time.perf_counter()
    rng = np.random.default_rng(1234)
    worst = 0.0
    for _ in range(50):
        N = int(rng.integers(2, 5))
        d = int(rng.integers(N, 9))
        n = int(rng.integers(1, 5))
        A, U = random_commutative_povm(N, d, rng)
        x = tuple(int(v) for v in rng.integers(1, N + 1, size=n))
        sandwich = dense_luders_n_round(dense_from_table(A, U), x).matrix
        product = (U * n_round_effect(A, x)) @ U.conj().T
        worst = max(worst, float(np.abs(sandwich - product).max()))
    dt = time.perf_counter() - t0
    ok = worst <= 1e-10 and dt < 10
    record(6, "dense Lüders sandwich == diagonal product, 50 trials", ok, worst, 1e-10, dt, 10)
    assert ok


def test_criterion_7_figure_shapes():
    t0 = time.perf_counter()
    failures = []
    worst = 0.0
    grid = np.linspace(0.5, 1.0, 201)
    curves = {n: np.array([closed_form_binary(n, v) for v in grid]) for n in (1, 21, 41)}
    for n, ys in curves.items():
        if np.diff(ys).min() < 0:
            failures.append(f"curve n={n} decreases")
        worst = max(worst, abs(ys[0] - 0.5), abs(ys[-1] - 1.0))
    if np.any(curves[21] < curves[1]) or np.any(curves[41] < curves[21]):
        failures.append("binary curves not ordered in n")
    for lam in (0.6, 0.7, 0.8):
        for n in range(2, 51, 2):
            worst = max(worst, abs(closed_form_binary(n, lam) - closed_form_binary(n - 1, lam)))
    N = 10
    for lam in interior(N, 199):
        p1, p3, p4 = (closed_form_nary(n, N, lam) for n in (1, 3, 4))
        if not p4 > p3 > p1:
            failures.append(f"N=10 ordering fails at lambda={lam}")
    for n in (1, 3, 4):
        worst = max(worst, abs(closed_form_nary(n, N, 0.1) - 0.1), abs(closed_form_nary(n, N, 1.0) - 1.0))
    dt = time.perf_counter() - t0
    ok = not failures and worst <= 1e-12 and dt < 2
    record(7, "figure curve shapes (binary n=1,21,41; staircase; N=10)", ok, worst, 1e-12, dt, 2)
    assert ok, failures


def test_criterion_8_qubit_worked_example():
    t0 = time.perf_counter()
    worst = 0.0
    plus = np.full((2, 2), 0.5)
    minus = np.eye(2) - plus
    for t in (0.2, 0.5, 0.9):
        lp, lm = (1 + t) / 2, (1 - t) / 2
        A, dense = qubit_xt(t), qubit_xt_dense(t)
        two = {
            (1, 1): (lp**2, lm**2),
            (2, 2): (lm**2, lp**2),
            (1, 2): (lp * lm, lp * lm),
            (2, 1): (lp * lm, lp * lm),
        }
        three = {(1, 1, 1): (lp**3, lm**3), (2, 2, 2): (lm**3, lp**3)}
        for x in itertools.product((1, 2), repeat=3):
            if x.count(1) == 2:
                three[x] = (lp * lm * lp, lp * lm * lm)
            elif x.count(1) == 1:
                three[x] = (lp * lm * lm, lp * lm * lp)
        for x, (a, b) in {**two, **three}.items():
            worst = max(worst, float(np.abs(n_round_effect(A, x) - [a, b]).max()))
            worst = max(worst, float(np.abs(dense_luders_n_round(dense, x).matrix - (a * plus + b * minus)).max()))
    dt = time.perf_counter() - t0
    ok = worst <= 1e-12 and dt < 1
    record(8, "qubit X_t two- and three-round effects", ok, worst, 1e-12, dt, 1)
    assert ok
