"""Time-symmetric lattice walk conditioned on both boundaries.

An object moves on a periodic 1-D lattice with velocity in {-2..2}.  Each
time step it keeps its velocity with probability ``1 - 2*eps`` and changes
it by +1 or -1 with probability ``eps`` each.  A change that would leave
{-2..2} is folded into persistence, so ``P(2 -> 2) = 1 - eps``.

Boundary convention
-------------------
``initial_v`` is the move that *arrived* at ``initial_x`` (it seeds the
kernel for the first step) and ``final_v`` is the move that *leaves*
``final_x`` after the horizon.  A sampled trajectory therefore draws
``horizon + 1`` velocities; the first ``horizon`` are the moves of the
`Path` and the last one is only checked against ``final_v``.  With this
convention the reversed walk (swap the boundaries, negate the
velocities) is the same process, exactly.

Stream derivation
-----------------
`run_ensemble` uses ``np.random.SeedSequence(seed).spawn(workers)``: worker
``i`` owns child ``i`` and processes ``tries // workers`` tries (plus one
for the first ``tries % workers`` workers) in fixed blocks of
`BLOCK_SIZE`.  Output is bit-exact for a fixed ``(seed, workers)``.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import InputError, StateSpaceTooLargeError

VELOCITIES = np.arange(-2, 3)
VMAX = 2
MAX_STATE_STEPS = 10**7
BLOCK_SIZE = 1 << 16
EPS_GRID = 2.0**52

__all__ = [
    "snap_epsilon",
    "WalkConfig",
    "Path",
    "DensityProfile",
    "ExactDensity",
    "kernel",
    "kernel_matrix",
    "sample_path",
    "run_ensemble",
    "exact_conditioned_density",
    "path_log_probability",
    "reverse_path",
    "reverse_config",
    "random_path",
]


def snap_epsilon(epsilon: float) -> float:
    """Round to a multiple of 2**-52.

    On that grid 1 - 2*eps and 1 - eps are exact and every partial sum of a
    kernel row is representable, so rows add up to exactly 1 in any order.
    """
    return round(float(epsilon) * EPS_GRID) / EPS_GRID


@dataclass(frozen=True)
class WalkConfig:
    width: int = 64
    horizon: int = 40
    epsilon: float = 0.05
    initial_x: int = 0
    initial_v: int = 1
    final_x: int = 0
    final_v: int = 0

    def __post_init__(self):
        if self.width < 5:
            raise InputError(f"width must be >= 5, got {self.width}")
        if self.horizon < 1:
            raise InputError(f"horizon must be >= 1, got {self.horizon}")
        if not 0.0 <= self.epsilon < 0.5:
            raise InputError(f"epsilon must lie in [0, 1/2), got {self.epsilon}")
        object.__setattr__(self, "epsilon", snap_epsilon(self.epsilon))
        for name in ("initial_v", "final_v"):
            v = getattr(self, name)
            if not -VMAX <= v <= VMAX:
                raise InputError(f"{name} must lie in [-2, 2], got {v}")
        object.__setattr__(self, "initial_x", self.initial_x % self.width)
        object.__setattr__(self, "final_x", self.final_x % self.width)


@dataclass(frozen=True)
class Path:
    """Positions x_0..x_T (mod W) and moves v_1..v_T, ``velocities[t-1] = x_t - x_{t-1}``."""

    positions: tuple
    velocities: tuple

    def check(self, width: int) -> None:
        if len(self.positions) != len(self.velocities) + 1:
            raise InputError("path needs exactly one more position than velocities")
        for t, v in enumerate(self.velocities, start=1):
            if not -VMAX <= v <= VMAX:
                raise InputError(f"velocity {v} at step {t} outside [-2, 2]")
            if self.positions[t] != (self.positions[t - 1] + v) % width:
                raise InputError(f"position at step {t} does not follow from the move")


@dataclass
class DensityProfile:
    counts: np.ndarray  # (T+1, W) int64
    accepted: int
    tries: int

    @property
    def acceptance_rate(self) -> float:
        return self.accepted / self.tries

    @property
    def frequencies(self) -> np.ndarray:
        if self.accepted == 0:
            return np.zeros(self.counts.shape)
        return self.counts / self.accepted

    def __add__(self, other: "DensityProfile") -> "DensityProfile":
        return DensityProfile(
            self.counts + other.counts, self.accepted + other.accepted, self.tries + other.tries
        )


@dataclass(frozen=True)
class ExactDensity:
    density: np.ndarray  # (T+1, W), rows sum to 1
    mean_velocity: np.ndarray  # (T+1,), entry t is E[v_t]; entry 0 is initial_v
    total_weight: float  # probability that one try is accepted


# ---------------------------------------------------------------------------
# Kernel
# ---------------------------------------------------------------------------

def kernel(v: int, epsilon: float) -> dict[int, float]:
    """Next-velocity distribution given the current velocity."""
    if not -VMAX <= v <= VMAX:
        raise InputError(f"velocity must lie in [-2, 2], got {v}")
    epsilon = snap_epsilon(epsilon)
    if v == VMAX:
        return {v - 1: epsilon, v: 1.0 - epsilon}
    if v == -VMAX:
        return {v: 1.0 - epsilon, v + 1: epsilon}
    return {v - 1: epsilon, v: 1.0 - 2.0 * epsilon, v + 1: epsilon}


def kernel_matrix(epsilon: float) -> np.ndarray:
    """5x5 matrix K[i, j] = P(v_j | v_i) over velocities -2..2."""
    k = np.zeros((5, 5))
    for i, v in enumerate(VELOCITIES):
        for w, p in kernel(int(v), epsilon).items():
            k[i, w + VMAX] = p
    return k


def _step(v: np.ndarray, u: np.ndarray, epsilon: float) -> np.ndarray:
    """Vectorized kernel draw from uniforms ``u``: [0,eps) -> +1, [eps,2eps) -> -1."""
    nxt = v + (u < epsilon).astype(v.dtype) - ((u >= epsilon) & (u < 2 * epsilon)).astype(v.dtype)
    return np.where(np.abs(nxt) > VMAX, v, nxt)


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------

def _step_scalar(v: int, u: float, epsilon: float) -> int:
    if u < epsilon:
        return v + 1 if v < VMAX else v
    if u < 2.0 * epsilon:
        return v - 1 if v > -VMAX else v
    return v


def _walk(config: WalkConfig, uniforms) -> tuple[list, list, int]:
    v, x, width = config.initial_v, config.initial_x, config.width
    positions, velocities = [x], []
    for u in uniforms[: config.horizon]:
        v = _step_scalar(v, u, config.epsilon)
        x = (x + v) % width
        positions.append(x)
        velocities.append(v)
    return positions, velocities, v


def sample_path(config: WalkConfig, rng: np.random.Generator) -> Path | None:
    """One rejection-sampling try; returns None when the final boundary is missed.

    Consumes ``horizon + 1`` uniforms from ``rng``.
    """
    u = rng.random(config.horizon + 1).tolist()
    positions, velocities, v = _walk(config, u)
    v_out = _step_scalar(v, u[-1], config.epsilon)
    if positions[-1] != config.final_x or v_out != config.final_v:
        return None
    return Path(tuple(positions), tuple(velocities))


def _simulate_block(config: WalkConfig, rng: np.random.Generator, n: int) -> np.ndarray:
    """Return the accepted position histories of ``n`` tries, shape (accepted, T+1)."""
    T, W, eps = config.horizon, config.width, config.epsilon
    v = np.full(n, config.initial_v, dtype=np.int8)
    pos = np.empty((T + 1, n), dtype=np.int16)
    pos[0] = config.initial_x
    for t in range(1, T + 1):
        v = _step(v, rng.random(n, dtype=np.float32), np.float32(eps))
        pos[t] = (pos[t - 1] + v) % W
    v = _step(v, rng.random(n, dtype=np.float32), np.float32(eps))
    ok = (pos[T] == config.final_x) & (v == config.final_v)
    return pos[:, ok].T


def _ensemble_worker(config: WalkConfig, tries: int, seed_seq: np.random.SeedSequence) -> DensityProfile:
    rng = np.random.default_rng(seed_seq)
    T, W = config.horizon, config.width
    counts = np.zeros((T + 1, W), dtype=np.int64)
    accepted = 0
    rows = np.arange(T + 1)
    done = 0
    while done < tries:
        n = min(BLOCK_SIZE, tries - done)
        hist = _simulate_block(config, rng, n)
        if hist.shape[0]:
            np.add.at(counts, (np.broadcast_to(rows, hist.shape), hist), 1)
            accepted += hist.shape[0]
        done += n
    return DensityProfile(counts, accepted, tries)


def split_tries(tries: int, workers: int) -> list[int]:
    base, extra = divmod(tries, workers)
    return [base + (i < extra) for i in range(workers)]


def run_ensemble(config: WalkConfig, tries: int, seed: int, workers: int = 1) -> DensityProfile:
    """Rejection-sample ``tries`` walks and histogram the accepted ones over (t, x)."""
    if tries < 1:
        raise InputError(f"tries must be >= 1, got {tries}")
    if workers < 1:
        raise InputError(f"workers must be >= 1, got {workers}")
    streams = np.random.SeedSequence(seed).spawn(workers)
    shares = split_tries(tries, workers)
    if workers == 1 or (os.cpu_count() or 1) == 1:
        parts = [_ensemble_worker(config, n, s) for n, s in zip(shares, streams)]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_ensemble_worker, [config] * workers, shares, streams))
    total = parts[0]
    for p in parts[1:]:
        total = total + p
    return total


# ---------------------------------------------------------------------------
# Exact oracle
# ---------------------------------------------------------------------------

def exact_conditioned_density(config: WalkConfig) -> ExactDensity:
    """Forward-backward transfer-matrix evaluation of the conditioned walk.

    alpha_t(x, v): weight of reaching (x, v) at step t from the initial state.
    beta_t(x, v):  weight of completing the walk from (x, v), including the
                   final outgoing move.
    """
    W, T, eps = config.width, config.horizon, config.epsilon
    if W * 5 * T > MAX_STATE_STEPS:
        raise StateSpaceTooLargeError(
            f"state space W*5*T = {W * 5 * T} exceeds {MAX_STATE_STEPS}"
        )
    K = kernel_matrix(eps)
    shifts = VELOCITIES

    def forward(a):
        # a[x, v] -> sum_v a[x - v', v] K[v, v'] for each new v'
        mixed = a @ K  # mixed[x, v'] = sum_v a[x, v] K[v, v']
        out = np.empty_like(mixed)
        for j, s in enumerate(shifts):
            out[:, j] = np.roll(mixed[:, j], s)
        return out

    def backward(b):
        # b_t[x, v] = sum_v' K[v, v'] b_{t+1}[x + v', v']
        shifted = np.empty_like(b)
        for j, s in enumerate(shifts):
            shifted[:, j] = np.roll(b[:, j], -s)
        return shifted @ K.T

    alpha = np.zeros((T + 1, W, 5))
    alpha[0, config.initial_x, config.initial_v + VMAX] = 1.0
    for t in range(1, T + 1):
        alpha[t] = forward(alpha[t - 1])
    beta = np.zeros((T + 1, W, 5))
    beta[T, config.final_x, :] = K[:, config.final_v + VMAX]
    for t in range(T - 1, -1, -1):
        beta[t] = backward(beta[t + 1])

    joint = alpha * beta
    z = joint[0].sum()
    if z <= 0.0:
        density = np.zeros((T + 1, W))
        mean_v = np.full(T + 1, np.nan)
        return ExactDensity(density, mean_v, 0.0)
    joint /= joint.sum(axis=(1, 2), keepdims=True)
    return ExactDensity(
        density=joint.sum(axis=2),
        mean_velocity=(joint.sum(axis=1) * VELOCITIES).sum(axis=1),
        total_weight=float(z),
    )


# ---------------------------------------------------------------------------
# Path probabilities and time reversal
# ---------------------------------------------------------------------------

def path_log_probability(config: WalkConfig, path: Path) -> float:
    """Log-probability that one try produces ``path`` and is accepted.

    Sums log K over the chain initial_v, v_1, ..., v_T, final_v.  Returns
    -inf when any transition is forbidden.
    """
    path.check(config.width)
    if len(path.velocities) != config.horizon:
        raise InputError("path length does not match the horizon")
    if path.positions[0] != config.initial_x or path.positions[-1] != config.final_x:
        raise InputError("path endpoints do not match the boundary positions")
    chain = (config.initial_v, *path.velocities, config.final_v)
    total = 0.0
    for v, w in zip(chain[:-1], chain[1:]):
        p = kernel(v, config.epsilon).get(w, 0.0)
        if p == 0.0:
            return -math.inf
        total += math.log(p)
    return total


def reverse_path(path: Path) -> Path:
    return Path(tuple(reversed(path.positions)), tuple(-v for v in reversed(path.velocities)))


def reverse_config(config: WalkConfig) -> WalkConfig:
    """Swap the boundaries and negate their velocities."""
    return WalkConfig(
        width=config.width,
        horizon=config.horizon,
        epsilon=config.epsilon,
        initial_x=config.final_x,
        initial_v=-config.final_v,
        final_x=config.initial_x,
        final_v=-config.initial_v,
    )


def random_path(config: WalkConfig, rng: np.random.Generator) -> Path:
    """Unconditioned walk from the initial boundary (no rejection)."""
    positions, velocities, _ = _walk(config, rng.random(config.horizon).tolist())
    return Path(tuple(positions), tuple(velocities))
