"""n-round observables from repeated Lüders measurements.

For a commutative observable the n-round effect of an outcome array is the
plain product of the single-round effects, so it is stored as a length-d
eigenvalue vector. :func:`dense_luders_n_round` evaluates the general
square-root sandwich on dense matrices and serves as an independent check.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .core import (
    TOL_NORM,
    CommutativeObservable,
    DenseEffect,
    DenseState,
    DiscriminationEnsemble,
)
from .errors import BadOutcome, NotPOVM, NumericalBreakdown

CLAMP_FLOOR = -1e-10
BREAKDOWN_SHIFT = 1e-8


@dataclass(frozen=True)
class OutcomeArray:
    """Tuple of 1-based outcomes ``(x_1, ..., x_n)`` for an N-outcome observable."""

    entries: tuple[int, ...]
    n_outcomes: int

    def __post_init__(self):
        entries = tuple(int(x) for x in self.entries)
        if not entries:
            raise BadOutcome("an outcome array needs at least one round")
        for x in entries:
            if not 1 <= x <= self.n_outcomes:
                raise BadOutcome(f"outcome {x} not in 1..{self.n_outcomes}")
        object.__setattr__(self, "entries", entries)

    @property
    def n(self) -> int:
        return len(self.entries)

    def multiplicity(self, label: int) -> int:
        """Number of occurrences of ``label`` in the array."""
        return self.entries.count(label)

    @property
    def multiplicities(self) -> tuple[int, ...]:
        counts = [0] * self.n_outcomes
        for x in self.entries:
            counts[x - 1] += 1
        return tuple(counts)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)


def as_outcome_array(x, n_outcomes: int) -> OutcomeArray:
    if isinstance(x, OutcomeArray):
        if x.n_outcomes != n_outcomes:
            raise BadOutcome(
                f"array built for N={x.n_outcomes}, used with N={n_outcomes}"
            )
        return x
    return OutcomeArray(tuple(x), n_outcomes)


def all_outcome_arrays(n_outcomes: int, n: int) -> Iterator[OutcomeArray]:
    """All ``N**n`` arrays in lexicographic order."""
    for entries in itertools.product(range(1, n_outcomes + 1), repeat=n):
        yield OutcomeArray(entries, n_outcomes)


def compositions(n: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Multiplicity vectors: tuples of ``parts`` nonnegative ints summing to ``n``."""
    if parts == 1:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in compositions(n - first, parts - 1):
            yield (first,) + rest


def multinomial(counts: Sequence[int]) -> int:
    """Number of arrays sharing the multiplicity vector ``counts``."""
    out, total = 1, 0
    for c in counts:
        total += c
        out *= math.comb(total, c)
    return out


def _effect_from_multiplicities(A: CommutativeObservable, counts: Sequence[int]) -> np.ndarray:
    # fixed label order makes the result independent of the array's ordering
    out = np.ones(A.dim)
    for j, m in enumerate(counts):
        for _ in range(m):
            out = out * A.eig_table[j]
    return out


def n_round_effect(A: CommutativeObservable, x) -> np.ndarray:
    """Eigenvalues of ``A(x_1) A(x_2) ... A(x_n)`` on the shared basis."""
    x = as_outcome_array(x, A.n_outcomes)
    return _effect_from_multiplicities(A, x.multiplicities)


def outcome_probability(E: DiscriminationEnsemble, label: int, x) -> float:
    """``tr[rho_j A^(n)(x)] = lam**m * mu**(n - m)`` with ``m`` the multiplicity of ``j``."""
    x = as_outcome_array(x, E.n_states)
    if not 1 <= label <= E.n_states:
        raise BadOutcome(f"state label {label} not in 1..{E.n_states}")
    m = x.multiplicity(label)
    return E.lam**m * E.mu ** (x.n - m)


@dataclass(frozen=True)
class NRoundObservable:
    """Lazily evaluated n-round observable of a commutative base observable."""

    base: CommutativeObservable
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("rounds must be >= 1")

    def effect(self, x) -> np.ndarray:
        x = as_outcome_array(x, self.base.n_outcomes)
        if x.n != self.n:
            raise BadOutcome(f"array of length {x.n} for a {self.n}-round observable")
        return n_round_effect(self.base, x)

    def arrays(self) -> Iterator[OutcomeArray]:
        return all_outcome_arrays(self.base.n_outcomes, self.n)

    def classes(self) -> Iterator[tuple[tuple[int, ...], int, np.ndarray]]:
        """Yield ``(multiplicities, array count, effect)`` per multiplicity class."""
        for counts in compositions(self.n, self.base.n_outcomes):
            yield counts, multinomial(counts), _effect_from_multiplicities(self.base, counts)

    def total(self) -> np.ndarray:
        """Sum of all n-round effects, grouped by multiplicity class."""
        acc = np.zeros(self.base.dim)
        for _, count, eff in self.classes():
            acc += count * eff
        return acc


def _psd_sqrt(m: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(m)
    if w.min() < CLAMP_FLOOR:
        raise NumericalBreakdown(f"effect has eigenvalue {w.min()!r} below the clamp floor")
    clamped = np.clip(w, 0.0, 1.0)
    shift = np.abs(clamped - w).max()
    if shift > BREAKDOWN_SHIFT:
        raise NumericalBreakdown(f"eigenvalue clamping moved the spectrum by {shift!r}")
    s = (v * np.sqrt(clamped)) @ v.conj().T
    return (s + s.conj().T) / 2


def _check_povm(effects: Sequence[DenseEffect]) -> int:
    if len(effects) < 2:
        raise NotPOVM("a POVM needs at least two effects")
    d = effects[0].dim
    if any(e.dim != d for e in effects):
        raise NotPOVM("effects have different dimensions")
    total = np.sum([e.matrix for e in effects], axis=0)
    dev = np.abs(total - np.eye(d)).max()
    if dev > TOL_NORM * 10 * d:
        raise NotPOVM(f"effects sum to identity only within {dev!r}")
    return d


def dense_luders_n_round(effects: Sequence[DenseEffect], x) -> DenseEffect:
    """``sqrt(A(x_1)) ... sqrt(A(x_{n-1})) A(x_n) sqrt(A(x_{n-1})) ... sqrt(A(x_1))``."""
    _check_povm(effects)
    x = as_outcome_array(x, len(effects))
    entries = x.entries
    m = np.array(effects[entries[-1] - 1].matrix)
    roots: dict[int, np.ndarray] = {}
    for k in reversed(entries[:-1]):
        if k not in roots:
            roots[k] = _psd_sqrt(effects[k - 1].matrix)
        s = roots[k]
        m = s @ m @ s
    return DenseEffect((m + m.conj().T) / 2)


def luders_update(effect: DenseEffect, rho: np.ndarray) -> np.ndarray:
    """Unnormalised post-measurement state ``sqrt(E) rho sqrt(E)``."""
    s = _psd_sqrt(effect.matrix)
    return s @ rho @ s


def sequential_probability(effects: Sequence[DenseEffect], state: DenseState, x) -> float:
    """Probability of ``x`` by applying Lüders updates round by round."""
    _check_povm(effects)
    x = as_outcome_array(x, len(effects))
    rho = np.array(state.matrix)
    for k in x.entries:
        rho = luders_update(effects[k - 1], rho)
    return float(np.trace(rho).real)
