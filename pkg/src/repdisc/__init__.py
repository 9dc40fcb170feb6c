"""Minimum-error discrimination of orthogonal states with repeated unsharp Lüders measurements."""

from .closedform import (
    BinarySuccessFormula,
    ComparisonRow,
    binary_coefficients,
    binary_sum_form,
    closed_form_binary,
    closed_form_nary,
    compare_formula_vs_enumeration,
    lemma_binomial_sum,
)
from .core import (
    CommutativeObservable,
    DenseEffect,
    DenseState,
    DiscriminationEnsemble,
    make_ensemble,
    make_uniform_noisy_observable,
    qubit_xt,
    qubit_xt_dense,
    to_dense,
    validate_uniform_structure,
)
from .discrimination import (
    DeterministicKernel,
    PostProcessedObservable,
    brute_force_best_success,
    is_ambiguous,
    is_ambiguous_by_trace,
    optimal_kernel,
    optimal_success_probability,
    post_process,
    success_probability,
)
from .errors import *  # noqa: F401,F403
from .sequential import (
    NRoundObservable,
    OutcomeArray,
    all_outcome_arrays,
    dense_luders_n_round,
    n_round_effect,
    outcome_probability,
    sequential_probability,
)

__version__ = "0.1.0"
