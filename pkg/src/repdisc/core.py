"""States, effects and observables for the uniform-noise discrimination setting.

Conventions used throughout the package:

* state and outcome labels are 1-based (``1..N``), matching the usual
  mathematical notation;
* basis indices into the shared eigenbasis are 0-based array indices.

A commutative observable is stored as an ``N x d`` eigenvalue table whose
row ``j - 1`` holds the eigenvalues of the effect ``A(j)`` on the shared
eigenbasis.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    DimensionTooSmall,
    InvalidEffect,
    InvalidSharpObservable,
    InvalidState,
    LambdaOutOfRange,
    NotPOVM,
    StructureViolation,
)

logger = logging.getLogger(__name__)

TOL_NORM = 1e-12
TOL_TRACE = 1e-12
TOL_HERM = 1e-10
TOL_EIG = 1e-10
# slack on the lambda interval so grid endpoints such as 1/N survive rounding
TOL_LAMBDA = 1e-12


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


def check_lambda(lam: float, n_outcomes: int) -> float:
    """Raise :class:`LambdaOutOfRange` unless ``1/N <= lam <= 1``."""
    lam = float(lam)
    if not (1.0 / n_outcomes - TOL_LAMBDA <= lam <= 1.0 + TOL_LAMBDA):
        raise LambdaOutOfRange(
            f"lambda={lam!r} outside [1/{n_outcomes}, 1] for N={n_outcomes}"
        )
    return lam


@dataclass(frozen=True)
class DenseEffect:
    """Hermitian ``d x d`` matrix with spectrum in ``[0, 1]``."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise InvalidEffect(f"effect must be a square matrix, got shape {m.shape}")
        if not np.allclose(m, m.conj().T, atol=TOL_HERM, rtol=0):
            raise InvalidEffect("effect matrix is not Hermitian")
        w = np.linalg.eigvalsh(m)
        if w.min() < -TOL_EIG or w.max() > 1 + TOL_EIG:
            raise InvalidEffect(f"effect spectrum [{w.min()}, {w.max()}] not within [0, 1]")
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class DenseState:
    """Density matrix: Hermitian, positive semidefinite, unit trace."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise InvalidState(f"state must be a square matrix, got shape {m.shape}")
        if not np.allclose(m, m.conj().T, atol=TOL_HERM, rtol=0):
            raise InvalidState("state matrix is not Hermitian")
        if abs(np.trace(m).real - 1.0) > TOL_TRACE:
            raise InvalidState(f"state trace {np.trace(m).real} != 1")
        if np.linalg.eigvalsh(m).min() < -TOL_EIG:
            raise InvalidState("state has a negative eigenvalue")
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def basis(cls, dim: int, index: int) -> "DenseState":
        """Pure state projecting onto the ``index``-th basis vector."""
        m = np.zeros((dim, dim), dtype=complex)
        m[index, index] = 1.0
        return cls(m)

    def expectation(self, effect: DenseEffect | np.ndarray) -> float:
        """Born-rule probability ``tr[rho E]``."""
        e = effect.matrix if isinstance(effect, DenseEffect) else np.asarray(effect)
        return float(np.trace(self.matrix @ e).real)


@dataclass(frozen=True)
class CommutativeObservable:
    """N effects that are diagonal in one shared basis.

    ``eig_table[j - 1, i]`` is the eigenvalue of ``A(j)`` on basis vector
    ``i``. Every column sums to one.
    """

    eig_table: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.eig_table, dtype=float)
        if a.ndim != 2:
            raise NotPOVM(f"eigenvalue table must be 2-D, got shape {a.shape}")
        n, d = a.shape
        if n < 2:
            raise NotPOVM("an observable needs at least two outcomes")
        if d < n:
            raise DimensionTooSmall(f"dimension {d} smaller than outcome count {n}")
        if a.min() < -TOL_NORM or a.max() > 1 + TOL_NORM:
            raise NotPOVM("eigenvalues must lie in [0, 1]")
        sums = a.sum(axis=0)
        bad = np.flatnonzero(np.abs(sums - 1.0) > TOL_NORM)
        if bad.size:
            raise NotPOVM(
                f"effects do not sum to identity: column {bad[0]} sums to {sums[bad[0]]!r}"
            )
        object.__setattr__(self, "eig_table", _frozen(a))

    @property
    def n_outcomes(self) -> int:
        return self.eig_table.shape[0]

    @property
    def dim(self) -> int:
        return self.eig_table.shape[1]

    def row(self, label: int) -> np.ndarray:
        """Eigenvalues of the effect with 1-based ``label``."""
        return self.eig_table[label - 1]


@dataclass(frozen=True)
class DiscriminationEnsemble:
    """N mutually orthogonal pure states and the noise parameter lambda.

    ``support[j - 1]`` is the basis index on which the state ``rho_j`` is
    supported.
    """

    n_states: int
    dim: int
    lam: float
    support: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if self.n_states < 2:
            raise ValueError("need at least two states")
        if self.dim < self.n_states:
            raise DimensionTooSmall(f"dimension {self.dim} smaller than N={self.n_states}")
        object.__setattr__(self, "lam", check_lambda(self.lam, self.n_states))
        support = tuple(int(i) for i in self.support) or tuple(range(self.n_states))
        if len(support) != self.n_states:
            raise ValueError(f"support map has {len(support)} entries, expected {self.n_states}")
        if len(set(support)) != len(support):
            raise ValueError("support indices must be pairwise distinct")
        if min(support) < 0 or max(support) >= self.dim:
            raise ValueError("support index outside the basis")
        object.__setattr__(self, "support", support)

    @property
    def mu(self) -> float:
        return (1.0 - self.lam) / (self.n_states - 1)

    def state(self, label: int) -> DenseState:
        return DenseState.basis(self.dim, self.support[label - 1])


def _check_sharp(sharp: np.ndarray, n: int, d: int) -> np.ndarray:
    D = np.asarray(sharp, dtype=float)
    if D.shape != (n, d):
        raise InvalidSharpObservable(f"sharp table has shape {D.shape}, expected {(n, d)}")
    if not np.all((np.abs(D) <= TOL_NORM) | (np.abs(D - 1) <= TOL_NORM)):
        raise InvalidSharpObservable("sharp observable entries must be 0 or 1")
    D = np.round(D)
    if np.any(D.sum(axis=0) != 1):
        raise InvalidSharpObservable("sharp effects must sum to the identity")
    if np.any(D.sum(axis=1) == 0):
        raise InvalidSharpObservable("every sharp effect must be nonzero")
    return D


def make_uniform_noisy_observable(
    n_outcomes: int,
    lam: float,
    dim: int | None = None,
    sharp: np.ndarray | None = None,
) -> CommutativeObservable:
    """Build ``A(j) = (lam - mu) D(j) + mu I`` with ``mu = (1 - lam)/(N - 1)``.

    Without ``sharp``, ``D(j)`` projects onto basis vector ``j - 1``; basis
    directions outside every support then get eigenvalue ``1/N`` in each
    effect so the columns still sum to one.
    """
    N = int(n_outcomes)
    d = N if dim is None else int(dim)
    if N < 2:
        raise ValueError("need at least two outcomes")
    lam = check_lambda(lam, N)
    if d < N:
        raise DimensionTooSmall(f"dimension {d} smaller than N={N}")
    mu = (1.0 - lam) / (N - 1)
    if sharp is None:
        table = np.full((N, d), 1.0 / N)
        table[:, :N] = mu
        table[np.arange(N), np.arange(N)] = lam
    else:
        D = _check_sharp(sharp, N, d)
        table = np.where(D == 1, lam, mu)
    return CommutativeObservable(table)


def make_ensemble(
    n_outcomes: int,
    lam: float,
    dim: int | None = None,
    sharp: np.ndarray | None = None,
) -> DiscriminationEnsemble:
    """Ensemble matching :func:`make_uniform_noisy_observable` with the same arguments.

    With a sharp table, ``rho_j`` sits on the first basis vector in the
    range of ``D(j)``.
    """
    N = int(n_outcomes)
    d = N if dim is None else int(dim)
    if sharp is None:
        support = tuple(range(N))
    else:
        D = _check_sharp(sharp, N, d)
        support = tuple(int(np.flatnonzero(D[j])[0]) for j in range(N))
    return DiscriminationEnsemble(N, d, lam, support)


def qubit_xt(t: float) -> CommutativeObservable:
    """Unsharp spin-x observable in its own eigenbasis ``(|+>, |->)``.

    Row 1 is ``X_t(+)`` with eigenvalues ``((1+t)/2, (1-t)/2)``.
    """
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t={t!r} outside [0, 1]")
    lp, lm = (1 + t) / 2, (1 - t) / 2
    return CommutativeObservable(np.array([[lp, lm], [lm, lp]]))


def qubit_xt_dense(t: float) -> list[DenseEffect]:
    """``X_t(+-) = (I +- t sigma_x) / 2`` in the computational basis."""
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    eye = np.eye(2, dtype=complex)
    return [DenseEffect((eye + t * sx) / 2), DenseEffect((eye - t * sx) / 2)]


def validate_uniform_structure(
    A: CommutativeObservable, E: DiscriminationEnsemble
) -> tuple[float, float]:
    """Check the eigenvalue relations ``A(j) rho_i = lam rho_i`` (i = j) or ``mu rho_i``.

    Also requires ``lam``/``mu`` to be the largest/smallest eigenvalue of every
    effect, ``mu = (1 - lam)/(N - 1)`` and agreement with ``E.lam``. Returns
    ``(lam, mu)`` read off the table.
    """
    if A.n_outcomes != E.n_states or A.dim != E.dim:
        raise ValueError(
            f"observable (N={A.n_outcomes}, d={A.dim}) and ensemble "
            f"(N={E.n_states}, d={E.dim}) disagree"
        )
    N = A.n_outcomes
    a = A.eig_table
    lam = float(a[0, E.support[0]])
    mu = (1.0 - lam) / (N - 1)
    if abs(lam - E.lam) > TOL_NORM:
        raise StructureViolation(
            f"table gives lambda={lam!r} but ensemble has {E.lam!r}", 1, E.support[0]
        )
    for j in range(N):
        row = a[j]
        for i in range(N):
            idx = E.support[i]
            want = lam if i == j else mu
            if abs(row[idx] - want) > TOL_NORM:
                raise StructureViolation(
                    f"A({j + 1}) has eigenvalue {row[idx]!r} on the support of "
                    f"rho_{i + 1} (basis index {idx}), expected {want!r}",
                    j + 1,
                    idx,
                )
        hi = int(np.argmax(row))
        if row[hi] > lam + TOL_NORM:
            raise StructureViolation(
                f"A({j + 1}) eigenvalue {row[hi]!r} at basis index {hi} exceeds lambda",
                j + 1,
                hi,
            )
        lo = int(np.argmin(row))
        if row[lo] < mu - TOL_NORM:
            raise StructureViolation(
                f"A({j + 1}) eigenvalue {row[lo]!r} at basis index {lo} is below mu",
                j + 1,
                lo,
            )
    off = sorted(set(range(A.dim)) - set(E.support))
    if off:
        # the relations say nothing off the span of the states
        logger.info("basis indices %s lie outside every support and are unconstrained", off)
    return lam, mu


def to_dense(A: CommutativeObservable) -> list[DenseEffect]:
    return [DenseEffect(np.diag(row).astype(complex)) for row in A.eig_table]


def random_commutative_povm(
    n_outcomes: int, dim: int, rng: np.random.Generator, unitary: bool = True
) -> tuple[CommutativeObservable, np.ndarray]:
    """Random commutative POVM and the unitary ``U`` of its eigenbasis.

    The dense effects are ``U diag(eig_table[j]) U^dagger``; with
    ``unitary=False`` ``U`` is the identity.
    """
    table = rng.dirichlet(np.ones(n_outcomes), size=dim).T
    # dirichlet columns sum to one only up to rounding; renormalise
    table = table / table.sum(axis=0)
    if unitary:
        z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        q, r = np.linalg.qr(z)
        U = q * (np.diag(r) / np.abs(np.diag(r)))
    else:
        U = np.eye(dim, dtype=complex)
    return CommutativeObservable(table), U


def dense_from_table(A: CommutativeObservable, U: np.ndarray) -> list[DenseEffect]:
    out = []
    for row in A.eig_table:
        m = (U * row) @ U.conj().T
        out.append(DenseEffect((m + m.conj().T) / 2))
    return out


def effects_sum(effects: Sequence[DenseEffect]) -> np.ndarray:
    return np.sum([e.matrix for e in effects], axis=0)
