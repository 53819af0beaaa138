"""Finite-dimensional two-state-vector formalism.

A pre-selected state is evolved forward and a post-selected state is
evolved backward until they meet at the time of an intermediate
measurement.  At that meeting point the ABL rule gives the outcome
distribution and the weak value gives the conditioned expectation.

Conventions
-----------
``evolution_steps[j]`` is the unitary taking the system from time slot
``j`` to ``j + 1``.  The observable sits at slot ``measurement_index``
(0 = before any evolution, ``len(steps)`` = after all of it).  All inner
products are ``np.vdot(bra, ket)``, i.e. the bra is conjugated.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    DegenerateObservableError,
    ImpossibleBoundaryError,
    InputError,
    UndefinedWeakValueError,
)

HERMITIAN_TOL = 1e-12
UNITARY_TOL = 1e-12
DEGENERACY_GAP = 1e-10
ZERO_DENOMINATOR = 1e-14
WEAK_OVERLAP_MIN = 1e-12

__all__ = [
    "StateVector",
    "Operator",
    "EigenDecomposition",
    "DensityMatrix",
    "TwoStateScenario",
    "BornRecovery",
    "evolve",
    "eigendecompose",
    "abl_probability",
    "weak_value",
    "match_time_invariance",
    "dephase",
    "pointer_probabilities",
    "born_recovery",
    "haar_state",
]


# ---------------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StateVector:
    """Complex amplitude vector.  Construct through `normalized` unless the
    amplitudes are already unit-norm."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size < 1:
            raise InputError("state vector needs dimension >= 1")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dimension(self) -> int:
        return self.amplitudes.size

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalize(self) -> "StateVector":
        n = self.norm
        if n == 0.0:
            raise InputError("cannot normalize the zero vector")
        return StateVector(self.amplitudes / n)

    @classmethod
    def normalized(cls, amplitudes) -> "StateVector":
        return cls(amplitudes).normalize()

    @classmethod
    def basis(cls, index: int, dimension: int) -> "StateVector":
        amps = np.zeros(dimension, dtype=complex)
        amps[index] = 1.0
        return cls(amps)


@dataclass(frozen=True)
class Operator:
    """Square complex matrix with optional verified Hermitian/unitary claims."""

    entries: np.ndarray
    hermitian: bool = False
    unitary: bool = False

    def __post_init__(self):
        m = np.array(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InputError(f"operator must be square, got shape {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)
        if self.hermitian and not is_hermitian(m):
            raise InputError("operator claimed Hermitian but max|M - M^dag| >= 1e-12")
        if self.unitary and not is_unitary(m):
            raise InputError("operator claimed unitary but max|M^dag M - I| >= 1e-12")

    @property
    def dimension(self) -> int:
        return self.entries.shape[0]

    @property
    def adjoint(self) -> "Operator":
        return Operator(self.entries.conj().T, hermitian=self.hermitian, unitary=self.unitary)


@dataclass(frozen=True)
class EigenDecomposition:
    """Ascending eigenvalues with eigenvectors as the columns of `vectors`."""

    eigenvalues: np.ndarray
    vectors: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.eigenvalues, dtype=float)
        vecs = np.asarray(self.vectors, dtype=complex)
        if vecs.ndim != 2 or vecs.shape[0] != vecs.shape[1] or vecs.shape[1] != vals.size:
            raise InputError("eigenvector matrix must be square and match the eigenvalue count")
        gram = vecs.conj().T @ vecs
        if np.max(np.abs(gram - np.eye(vals.size))) >= 1e-10:
            raise InputError("eigenvectors are not orthonormal within 1e-10")
        object.__setattr__(self, "eigenvalues", vals)
        object.__setattr__(self, "vectors", vecs)

    @property
    def eigenvectors(self) -> list[StateVector]:
        return [StateVector(self.vectors[:, k]) for k in range(self.vectors.shape[1])]

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.eigenvalues) @ self.vectors.conj().T

    def projector(self, k: int) -> np.ndarray:
        v = self.vectors[:, k]
        return np.outer(v, v.conj())

    @classmethod
    def computational(cls, dimension: int) -> "EigenDecomposition":
        return cls(np.arange(dimension, dtype=float), np.eye(dimension, dtype=complex))


@dataclass(frozen=True)
class DensityMatrix:
    entries: np.ndarray

    def __post_init__(self):
        rho = np.array(self.entries, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise InputError(f"density matrix must be square, got shape {rho.shape}")
        if not is_hermitian(rho):
            raise InputError("density matrix is not Hermitian within 1e-12")
        if abs(np.trace(rho) - 1.0) >= 1e-12:
            raise InputError("density matrix trace differs from 1 by >= 1e-12")
        if np.min(np.linalg.eigvalsh(rho)) < -1e-10:
            raise InputError("density matrix has a negative eigenvalue below -1e-10")
        rho.setflags(write=False)
        object.__setattr__(self, "entries", rho)

    @classmethod
    def pure(cls, state) -> "DensityMatrix":
        psi = _amplitudes(state)
        return cls(np.outer(psi, psi.conj()))

    @classmethod
    def mixture(cls, weights, states) -> "DensityMatrix":
        rho = sum(w * np.outer(_amplitudes(s), _amplitudes(s).conj()) for w, s in zip(weights, states))
        return cls(rho)


@dataclass(frozen=True)
class TwoStateScenario:
    """Pre/post-selected boundary pair, evolution chain and one observable."""

    pre: StateVector
    post: StateVector
    observable: Operator
    evolution_steps: tuple = field(default_factory=tuple)
    measurement_index: int = 0

    def __post_init__(self):
        pre = self.pre if isinstance(self.pre, StateVector) else StateVector(self.pre)
        post = self.post if isinstance(self.post, StateVector) else StateVector(self.post)
        obs = self.observable
        if not isinstance(obs, Operator):
            obs = Operator(obs, hermitian=True)
        elif not is_hermitian(obs.entries):
            raise InputError("observable is not Hermitian within 1e-12")
        steps = tuple(
            s if isinstance(s, Operator) and s.unitary else Operator(_matrix(s), unitary=True)
            for s in self.evolution_steps
        )
        d = pre.dimension
        dims = {post.dimension, obs.dimension, *(s.dimension for s in steps)}
        if dims != {d}:
            raise InputError(f"dimension mismatch among scenario parts: {sorted(dims | {d})}")
        if not 0 <= self.measurement_index <= len(steps):
            raise InputError(
                f"measurement_index {self.measurement_index} outside [0, {len(steps)}]"
            )
        object.__setattr__(self, "pre", pre)
        object.__setattr__(self, "post", post)
        object.__setattr__(self, "observable", obs)
        object.__setattr__(self, "evolution_steps", steps)

    @property
    def dimension(self) -> int:
        return self.pre.dimension

    def time_reversed(self) -> "TwoStateScenario":
        """Swap the boundaries and run the chain backward with adjoint steps."""
        steps = tuple(s.adjoint for s in reversed(self.evolution_steps))
        return TwoStateScenario(
            pre=self.post,
            post=self.pre,
            observable=self.observable,
            evolution_steps=steps,
            measurement_index=len(steps) - self.measurement_index,
        )


@dataclass(frozen=True)
class BornRecovery:
    eigenvalues: np.ndarray
    mean: np.ndarray
    stderr: np.ndarray
    born: np.ndarray
    accepted: int
    discarded: int


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------

def is_hermitian(m, tol: float = HERMITIAN_TOL) -> bool:
    m = np.asarray(m)
    return bool(np.max(np.abs(m - m.conj().T)) < tol)


def is_unitary(m, tol: float = UNITARY_TOL) -> bool:
    m = np.asarray(m)
    return bool(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))) < tol)


def _amplitudes(state) -> np.ndarray:
    if isinstance(state, StateVector):
        return state.amplitudes
    return np.asarray(state, dtype=complex).reshape(-1)


def _matrix(op) -> np.ndarray:
    if isinstance(op, Operator):
        return op.entries
    return np.asarray(op, dtype=complex)


def _chain(steps: Sequence[Operator], start: int, stop: int) -> np.ndarray:
    """Product U_{stop-1} ... U_{start}, mapping slot `start` to slot `stop`."""
    d = steps[0].dimension if steps else None
    out = None
    for s in steps[start:stop]:
        out = s.entries if out is None else s.entries @ out
    if out is None:
        return None if d is None else np.eye(d, dtype=complex)
    return out


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

def evolve(state, u, check_unitary: bool = True) -> StateVector:
    """Apply `u` to `state`.

    With ``check_unitary`` the matrix is verified to be unitary within 1e-12
    before use.
    """
    psi = _amplitudes(state)
    m = _matrix(u)
    if m.shape != (psi.size, psi.size):
        raise InputError(f"cannot apply a {m.shape} operator to a {psi.size}-dim state")
    if check_unitary and not (isinstance(u, Operator) and u.unitary) and not is_unitary(m):
        raise InputError("evolution operator is not unitary within 1e-12")
    return StateVector(m @ psi)


def eigendecompose(observable) -> EigenDecomposition:
    """Diagonalize a Hermitian, non-degenerate observable."""
    m = _matrix(observable)
    if not is_hermitian(m):
        raise InputError("observable is not Hermitian within 1e-12")
    vals, vecs = np.linalg.eigh(m)
    gaps = np.diff(vals)
    if gaps.size and np.min(gaps) <= DEGENERACY_GAP:
        k = int(np.argmin(gaps))
        raise DegenerateObservableError(
            f"degenerate observable: eigenvalues {vals[k]:.6g} and {vals[k + 1]:.6g} "
            f"are closer than {DEGENERACY_GAP:g}"
        )
    return EigenDecomposition(vals, vecs)


def _meeting_states(scenario: TwoStateScenario, index: int):
    steps = scenario.evolution_steps
    pre = scenario.pre.amplitudes
    post = scenario.post.amplitudes
    if steps:
        pre = _chain(steps, 0, index) @ pre
        post = _chain(steps, index, len(steps)).conj().T @ post
    return pre, post


def _abl_from_overlaps(pre_overlap: np.ndarray, post_overlap: np.ndarray) -> np.ndarray:
    """ABL distribution from <a_k|pre> and <a_k|post> (last axis = outcome)."""
    numerators = np.abs(np.conj(pre_overlap) * post_overlap) ** 2
    return numerators, numerators.sum(axis=-1)


def _abl(pre: np.ndarray, post: np.ndarray, basis: EigenDecomposition) -> np.ndarray:
    numerators, denominator = _abl_from_overlaps(
        basis.vectors.conj().T @ pre, basis.vectors.conj().T @ post
    )
    if denominator <= ZERO_DENOMINATOR:
        raise ImpossibleBoundaryError(
            f"impossible boundary pair: ABL denominator {denominator:.3e} <= {ZERO_DENOMINATOR:g}"
        )
    return numerators / denominator


def abl_probability(scenario: TwoStateScenario) -> np.ndarray:
    """Outcome probabilities of the observable conditioned on both boundaries.

    Returned in ascending eigenvalue order (see `eigendecompose`).  The
    denominator is the sum of the numerators, so interference between
    different outcomes never enters.
    """
    basis = eigendecompose(scenario.observable)
    pre, post = _meeting_states(scenario, scenario.measurement_index)
    return _abl(pre, post, basis)


def weak_value(scenario: TwoStateScenario) -> complex:
    pre, post = _meeting_states(scenario, scenario.measurement_index)
    overlap = np.vdot(pre, post)
    if abs(overlap) <= WEAK_OVERLAP_MIN:
        raise UndefinedWeakValueError(
            f"undefined weak value: |<pre|post>| = {abs(overlap):.3e} at the measurement slot"
        )
    return complex(np.vdot(pre, scenario.observable.entries @ post) / overlap)


def match_time_invariance(scenario: TwoStateScenario, split_index: int) -> np.ndarray:
    """ABL distribution evaluated with the two evolutions meeting at `split_index`.

    The observable is carried from its own slot to the meeting slot by the
    intervening unitaries and re-diagonalized there, so the result is an
    independent evaluation that must agree with `abl_probability`.
    """
    steps = scenario.evolution_steps
    m = scenario.measurement_index
    if not 0 <= split_index <= len(steps):
        raise InputError(f"split_index {split_index} outside [0, {len(steps)}]")
    a = scenario.observable.entries
    if split_index > m:
        w = _chain(steps, m, split_index)
        a = w @ a @ w.conj().T
    elif split_index < m:
        w = _chain(steps, split_index, m)
        a = w.conj().T @ a @ w
    # transport leaves Hermiticity intact only up to rounding
    a = 0.5 * (a + a.conj().T)
    basis = eigendecompose(a)
    pre, post = _meeting_states(scenario, split_index)
    return _abl(pre, post, basis)


def dephase(rho, pointer_basis: EigenDecomposition, strength: float) -> DensityMatrix:
    """Suppress pointer-basis coherences by the factor ``1 - strength``."""
    if not 0.0 <= strength <= 1.0:
        raise InputError(f"dephasing strength must lie in [0, 1], got {strength}")
    r = rho.entries if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    v = pointer_basis.vectors
    local = v.conj().T @ r @ v
    diag = np.diag(np.diag(local))
    local = diag + (1.0 - strength) * (local - diag)
    out = v @ local @ v.conj().T
    return DensityMatrix(0.5 * (out + out.conj().T))


def pointer_probabilities(rho, pointer_basis: EigenDecomposition) -> np.ndarray:
    r = rho.entries if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    v = pointer_basis.vectors
    return np.real(np.einsum("ik,ij,jk->k", v.conj(), r, v))


def haar_state(rng: np.random.Generator, dimension: int, size: int | None = None) -> np.ndarray:
    """Haar-random pure state(s): normalized independent complex Gaussians."""
    shape = (dimension,) if size is None else (size, dimension)
    z = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return z / np.linalg.norm(z, axis=-1, keepdims=True)


def born_recovery(pre, observable, sample_count: int, seed: int) -> BornRecovery:
    """Average the ABL distribution over Haar-random post-selections.

    Draws whose ABL denominator vanishes are discarded and counted.
    """
    if sample_count < 100:
        raise InputError(f"born_recovery needs sample_count >= 100, got {sample_count}")
    psi = _amplitudes(pre)
    basis = eigendecompose(observable)
    if basis.vectors.shape[0] != psi.size:
        raise InputError("pre-selected state and observable dimensions differ")
    rng = np.random.default_rng(seed)
    posts = haar_state(rng, psi.size, sample_count)
    pre_overlap = basis.vectors.conj().T @ psi
    post_overlap = posts @ basis.vectors.conj()
    numerators, denominators = _abl_from_overlaps(pre_overlap[None, :], post_overlap)
    keep = denominators > ZERO_DENOMINATOR
    probs = numerators[keep] / denominators[keep, None]
    n = probs.shape[0]
    if n < 2:
        raise ImpossibleBoundaryError("fewer than two usable post-selection draws")
    return BornRecovery(
        eigenvalues=basis.eigenvalues,
        mean=probs.mean(axis=0),
        stderr=probs.std(axis=0, ddof=1) / np.sqrt(n),
        born=np.abs(pre_overlap) ** 2,
        accepted=n,
        discarded=int(sample_count - n),
    )
