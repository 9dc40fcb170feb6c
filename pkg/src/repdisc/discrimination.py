"""Post-processing of n-round outcomes into state guesses.

The success probability is affine in the Markov kernel and every outcome
array carries its own simplex constraint, so choosing for each array the
label of highest likelihood is globally optimal. Probabilistic kernels are
convex mixtures of deterministic ones and never do better; only
deterministic kernels are modelled here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

import numpy as np

from .core import TOL_NORM, CommutativeObservable, DiscriminationEnsemble
from .errors import BudgetExceeded, DegenerateLambda, KernelDomainMismatch
from .sequential import (
    OutcomeArray,
    all_outcome_arrays,
    as_outcome_array,
    compositions,
    multinomial,
    n_round_effect,
    outcome_probability,
)

DEFAULT_BUDGET = 10**7


@dataclass(frozen=True)
class DeterministicKernel:
    """Assignment of every outcome array in ``{1..N}^n`` to one state label."""

    n: int
    n_outcomes: int
    assign: Mapping[tuple[int, ...], int]

    def __post_init__(self):
        N, n = self.n_outcomes, self.n
        if len(self.assign) != N**n:
            raise KernelDomainMismatch(
                f"kernel covers {len(self.assign)} arrays, expected {N}**{n}"
            )
        for entries, label in self.assign.items():
            if len(entries) != n or not all(1 <= e <= N for e in entries):
                raise KernelDomainMismatch(f"kernel key {entries!r} is not in {{1..{N}}}^{n}")
            if not 1 <= label <= N:
                raise KernelDomainMismatch(f"kernel assigns invalid label {label}")

    @classmethod
    def from_rule(
        cls, n_outcomes: int, n: int, rule: Callable[[OutcomeArray], int]
    ) -> "DeterministicKernel":
        assign = {x.entries: int(rule(x)) for x in all_outcome_arrays(n_outcomes, n)}
        return cls(n, n_outcomes, assign)

    def __call__(self, x) -> int:
        x = as_outcome_array(x, self.n_outcomes)
        return self.assign[x.entries]

    def weight(self, label: int, x) -> int:
        """Kernel entry ``w(label, x)`` in ``{0, 1}``."""
        return int(self(x) == label)


@dataclass(frozen=True)
class PostProcessedObservable:
    """Effects ``B(j)``, stored as the rows of an ``N x d`` eigenvalue table."""

    effects: np.ndarray

    @property
    def n_outcomes(self) -> int:
        return self.effects.shape[0]

    @property
    def dim(self) -> int:
        return self.effects.shape[1]


def _argmax_lowest(values: Iterable) -> int:
    best, best_v = 0, None
    for i, v in enumerate(values):
        if best_v is None or v > best_v:
            best, best_v = i, v
    return best + 1


def majority_label(x: OutcomeArray) -> int:
    """Most frequent label of ``x``; ties go to the lowest label."""
    return _argmax_lowest(x.multiplicities)


def optimal_kernel(E: DiscriminationEnsemble, n: int) -> DeterministicKernel:
    """Likelihood-maximising kernel: each array goes to its most frequent label.

    For ``lam > mu`` the likelihood ``lam**m mu**(n-m)`` increases with the
    multiplicity ``m``, so maximum likelihood is a plurality vote.
    """
    if n < 1:
        raise ValueError("rounds must be >= 1")
    return DeterministicKernel.from_rule(E.n_states, n, majority_label)


def post_process(
    A: CommutativeObservable, n: int, kernel: DeterministicKernel
) -> PostProcessedObservable:
    if kernel.n != n or kernel.n_outcomes != A.n_outcomes:
        raise KernelDomainMismatch(
            f"kernel is for (N={kernel.n_outcomes}, n={kernel.n}), observable needs "
            f"(N={A.n_outcomes}, n={n})"
        )
    B = np.zeros((A.n_outcomes, A.dim))
    for entries, label in kernel.assign.items():
        B[label - 1] += n_round_effect(A, entries)
    return PostProcessedObservable(B)


def success_probability(E: DiscriminationEnsemble, B: PostProcessedObservable) -> float:
    """Uniform-prior average ``(1/N) sum_j tr[rho_j B(j)]``."""
    if B.n_outcomes != E.n_states or B.dim != E.dim:
        raise ValueError("post-processed observable does not match the ensemble")
    return math.fsum(B.effects[j, E.support[j]] for j in range(E.n_states)) / E.n_states


def kernel_success_probability(E: DiscriminationEnsemble, kernel: DeterministicKernel) -> float:
    """Success probability of ``kernel`` straight from the outcome likelihoods."""
    return (
        math.fsum(outcome_probability(E, label, entries) for entries, label in kernel.assign.items())
        / E.n_states
    )


def brute_force_best_success(
    E: DiscriminationEnsemble, n: int, budget: int = DEFAULT_BUDGET
) -> tuple[float, DeterministicKernel]:
    """Enumerate every array and keep its most likely label.

    Returns ``(1/N) sum_x max_j p(x | rho_j)`` and a kernel attaining it.
    """
    N = E.n_states
    if N**n > budget:
        raise BudgetExceeded(f"{N}**{n} arrays exceed the enumeration budget {budget}")
    terms = []
    assign = {}
    for x in all_outcome_arrays(N, n):
        probs = [outcome_probability(E, j, x) for j in range(1, N + 1)]
        label = _argmax_lowest(probs)
        assign[x.entries] = label
        terms.append(probs[label - 1])
    return math.fsum(terms) / N, DeterministicKernel(n, N, assign)


def optimal_success_probability(E: DiscriminationEnsemble, n: int) -> float:
    """Optimal success probability summed over multiplicity classes.

    Each class contributes ``count * lam**m_max * mu**(n - m_max)``; this
    scales to depths where full enumeration is out of reach.
    """
    if n < 1:
        raise ValueError("rounds must be >= 1")
    lam, mu = E.lam, E.mu
    terms = []
    for counts in compositions(n, E.n_states):
        m = max(counts)
        terms.append(multinomial(counts) * lam**m * mu ** (n - m))
    return math.fsum(terms) / E.n_states


def _check_nondegenerate(E: DiscriminationEnsemble):
    N = E.n_states
    if abs(E.lam - 1.0 / N) <= TOL_NORM:
        raise DegenerateLambda(f"lambda = 1/{N}: every outcome array is ambiguous")
    if abs(E.lam - 1.0) <= TOL_NORM:
        raise DegenerateLambda("lambda = 1: zero-probability arrays are trivially ambiguous")


def _check_subset(E: DiscriminationEnsemble, subset) -> list[int]:
    labels = [int(s) for s in subset]
    if not labels:
        raise ValueError("subset must be nonempty")
    if len(set(labels)) != len(labels):
        raise ValueError("subset labels must be distinct")
    if not all(1 <= s <= E.n_states for s in labels):
        raise ValueError(f"subset labels must lie in 1..{E.n_states}")
    return labels


def is_ambiguous(E: DiscriminationEnsemble, x, subset) -> bool:
    """True iff every label in ``subset`` occurs equally often in ``x``."""
    _check_nondegenerate(E)
    labels = _check_subset(E, subset)
    x = as_outcome_array(x, E.n_states)
    return len({x.multiplicity(j) for j in labels}) == 1


def is_ambiguous_by_trace(
    E: DiscriminationEnsemble, A: CommutativeObservable, x, subset, rel_tol: float = 1e-12
) -> bool:
    """Ambiguity tested directly: ``tr[rho A^(n)(x)]`` is the same for every state in ``subset``."""
    labels = _check_subset(E, subset)
    eff = n_round_effect(A, x)
    probs = [eff[E.support[j - 1]] for j in labels]
    return all(math.isclose(p, probs[0], rel_tol=rel_tol, abs_tol=0.0) for p in probs)
