import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from repdisc import (
    DiscriminationEnsemble,
    NRoundObservable,
    OutcomeArray,
    all_outcome_arrays,
    dense_luders_n_round,
    make_uniform_noisy_observable,
    n_round_effect,
    outcome_probability,
    qubit_xt,
    qubit_xt_dense,
    sequential_probability,
    to_dense,
)
from repdisc.core import DenseEffect, DenseState, dense_from_table, random_commutative_povm
from repdisc.errors import BadOutcome, NotPOVM, NumericalBreakdown

PLUS, MINUS = 1, 2


def test_outcome_array_multiplicities():
    x = OutcomeArray((1, 2, 1), 3)
    assert x.n == 3
    assert [x.multiplicity(j) for j in (1, 2, 3)] == [2, 1, 0]
    assert x.multiplicities == (2, 1, 0)


@pytest.mark.parametrize("entries", [(0, 1), (1, 4), ()])
def test_bad_outcomes(entries):
    with pytest.raises(BadOutcome):
        OutcomeArray(entries, 3)


def test_two_round_confirming_effect():
    np.testing.assert_allclose(n_round_effect(qubit_xt(0.5), (PLUS, PLUS)), [0.5625, 0.0625], rtol=0, atol=1e-15)


def test_two_round_ambiguous_effect_is_scalar():
    np.testing.assert_allclose(n_round_effect(qubit_xt(0.5), (PLUS, MINUS)), [0.1875, 0.1875], rtol=0, atol=1e-15)


def test_single_round_is_base():
    A = make_uniform_noisy_observable(3, 0.6)
    for j in (1, 2, 3):
        np.testing.assert_array_equal(n_round_effect(A, (j,)), A.row(j))


def test_n_round_effect_rejects_bad_label():
    with pytest.raises(BadOutcome):
        n_round_effect(qubit_xt(0.5), (1, 3))


def test_outcome_probability_examples():
    E2 = DiscriminationEnsemble(2, 2, 0.75)
    assert outcome_probability(E2, PLUS, (PLUS,) * 3) == pytest.approx(0.421875, abs=1e-15)
    assert outcome_probability(E2, MINUS, (MINUS,)) == 0.75
    E3 = DiscriminationEnsemble(3, 3, 0.5)
    assert outcome_probability(E3, 1, (1, 2, 3)) == pytest.approx(0.03125, abs=1e-15)


@pytest.mark.parametrize("N,lam,n", [(2, 0.7, 4), (3, 0.55, 3), (4, 0.9, 3)])
def test_outcome_probability_matches_effect_trace(N, lam, n):
    E = DiscriminationEnsemble(N, N, lam)
    A = make_uniform_noisy_observable(N, lam)
    for x in all_outcome_arrays(N, n):
        eff = n_round_effect(A, x)
        for j in range(1, N + 1):
            assert abs(outcome_probability(E, j, x) - eff[E.support[j - 1]]) <= 1e-12


def test_dense_sandwich_three_rounds_commutative():
    t = 0.5
    lp, lm = 0.75, 0.25
    dense = to_dense(qubit_xt(t))
    m = dense_luders_n_round(dense, (PLUS, MINUS, PLUS)).matrix
    np.testing.assert_allclose(m, np.diag([lp**2 * lm, lm**2 * lp]), atol=1e-15)


def test_dense_sandwich_sharp_idempotent():
    sharp = [DenseEffect(np.diag([1.0, 0.0])), DenseEffect(np.diag([0.0, 1.0]))]
    np.testing.assert_allclose(dense_luders_n_round(sharp, (1, 1)).matrix, np.diag([1.0, 0.0]), atol=1e-15)


def test_dense_sandwich_random_diagonal_d4():
    rng = np.random.default_rng(7)
    A, _ = random_commutative_povm(3, 4, rng, unitary=False)
    effects = to_dense(A)
    for x in itertools.product((1, 2, 3), repeat=3):
        m = dense_luders_n_round(effects, x).matrix
        np.testing.assert_allclose(m, np.diag(n_round_effect(A, x)), rtol=0, atol=1e-10)


def test_dense_sandwich_noncommuting_trine():
    # unsharp trine on a qubit: effects do not commute, sandwich stays Hermitian
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sz = np.diag([1.0, -1.0]).astype(complex)
    t = 0.6
    effects = [
        DenseEffect((np.eye(2) + t * (np.cos(a) * sz + np.sin(a) * sx)) / 3)
        for a in (0.0, 2 * np.pi / 3, 4 * np.pi / 3)
    ]
    m12 = dense_luders_n_round(effects, (1, 2)).matrix
    np.testing.assert_allclose(m12, m12.conj().T, atol=1e-14)
    prod = effects[0].matrix @ effects[1].matrix
    assert np.abs(prod - prod.conj().T).max() > 1e-3
    total = sum(dense_luders_n_round(effects, x).matrix for x in itertools.product((1, 2, 3), repeat=3))
    np.testing.assert_allclose(total, np.eye(2), atol=1e-12)


def test_dense_sandwich_requires_povm():
    with pytest.raises(NotPOVM):
        dense_luders_n_round([DenseEffect(np.diag([0.5, 0.5])), DenseEffect(np.diag([0.4, 0.5]))], (1,))


def test_clamp_breakdown_is_reported():
    from repdisc.sequential import _psd_sqrt

    with pytest.raises(NumericalBreakdown):
        _psd_sqrt(np.diag([1.0, -1e-6]))
    np.testing.assert_allclose(_psd_sqrt(np.diag([0.25, -1e-12])), np.diag([0.5, 0.0]), atol=1e-12)


def test_sequential_updates_match_sandwich_trace():
    rng = np.random.default_rng(3)
    A, U = random_commutative_povm(3, 5, rng)
    effects = dense_from_table(A, U)
    psi = rng.normal(size=5) + 1j * rng.normal(size=5)
    psi /= np.linalg.norm(psi)
    rho = DenseState(np.outer(psi, psi.conj()))
    for x in [(1, 2, 3), (3, 3), (2, 1, 1, 2)]:
        p_seq = sequential_probability(effects, rho, x)
        p_sandwich = rho.expectation(dense_luders_n_round(effects, x))
        assert abs(p_seq - p_sandwich) <= 1e-12


@pytest.mark.parametrize("N", [2, 3, 4])
@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_normalization_over_all_arrays(N, n):
    rng = np.random.default_rng(N * 10 + n)
    A, _ = random_commutative_povm(N, N + 1, rng, unitary=False)
    total = np.sum([n_round_effect(A, x) for x in all_outcome_arrays(N, n)], axis=0)
    np.testing.assert_allclose(total, 1.0, rtol=0, atol=1e-9)
    np.testing.assert_allclose(NRoundObservable(A, n).total(), 1.0, rtol=0, atol=1e-9)


def test_multiplicity_class_counts():
    obs = NRoundObservable(make_uniform_noisy_observable(3, 0.5), 4)
    assert sum(count for _, count, _ in obs.classes()) == 3**4


def test_n_round_observable_checks_length():
    obs = NRoundObservable(qubit_xt(0.3), 2)
    with pytest.raises(BadOutcome):
        obs.effect((1, 2, 1))


@settings(max_examples=100, deadline=None)
@given(
    st.integers(2, 4).flatmap(
        lambda N: st.tuples(st.just(N), st.lists(st.integers(1, N), min_size=1, max_size=7), st.randoms())
    )
)
def test_permutation_symmetry(args):
    N, entries, rnd = args
    A, _ = random_commutative_povm(N, N + 2, np.random.default_rng(len(entries)), unitary=False)
    shuffled = list(entries)
    rnd.shuffle(shuffled)
    np.testing.assert_array_equal(n_round_effect(A, entries), n_round_effect(A, shuffled))


def test_dense_oracle_agreement_rotated_basis():
    rng = np.random.default_rng(11)
    for _ in range(20):
        N = int(rng.integers(2, 5))
        d = int(rng.integers(N, 9))
        A, U = random_commutative_povm(N, d, rng)
        effects = dense_from_table(A, U)
        for n in range(1, 5):
            x = tuple(int(v) for v in rng.integers(1, N + 1, size=n))
            fast = (U * n_round_effect(A, x)) @ U.conj().T
            assert np.abs(dense_luders_n_round(effects, x).matrix - fast).max() <= 1e-10
