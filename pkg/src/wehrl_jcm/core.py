"""Resonant Jaynes-Cummings dynamics reduced to the atomic Bloch vector.

The field starts in a real coherent state |alpha>, the atom in
cos(vartheta)|e> + sin(vartheta)|g>.  In the interaction picture the joint
state is a sum over the invariant doublets {|e,n>, |g,n+1>}, each rotating at
the Rabi frequency sqrt(n+1) in the scaled time T = t * lambda.

The product |g,0> is not part of any doublet and stays frozen with amplitude
C_0 sin(vartheta).  It is kept by default (``ground_vacuum=True``); switching
it off reproduces the doublet-only expansion, which misses a weight
sin^2(vartheta) exp(-alpha^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

BLOCH_SLACK = 1e-12


def default_n_max(alpha: float) -> int:
    """Fock cutoff ten standard deviations past the mean photon number."""
    return int(math.ceil(alpha * alpha + 10.0 * alpha + 20.0))


def _log_weights(alpha: float, n_max: int) -> np.ndarray:
    # log C_{n+1} = log C_n + log(alpha) - log(n+1)/2
    steps = math.log(alpha) - 0.5 * np.log(np.arange(1, n_max + 1, dtype=float))
    return np.concatenate(([-0.5 * alpha * alpha], -0.5 * alpha * alpha + np.cumsum(steps)))


def poisson_tail(alpha: float, n_max: int) -> float:
    """Return sum_{n > n_max} C_n^2, the photon-number weight beyond the cutoff."""
    if alpha == 0.0:
        return 0.0
    mean = alpha * alpha
    n = n_max + 1
    log_p = 2.0 * (n * math.log(alpha) - 0.5 * math.lgamma(n + 1.0)) - mean
    p = math.exp(log_p) if log_p > -745.0 else 0.0
    total = 0.0
    while True:
        total += p
        n += 1
        p *= mean / n
        if n > mean and (p == 0.0 or p < 1e-17 * total):
            return total


def coherent_weights(alpha: float, n_max: int, tail_tol: float | None = None) -> np.ndarray:
    """Coherent-state amplitudes C_0..C_{n_max} for real ``alpha``.

    Built by the recurrence C_{n+1} = C_n alpha / sqrt(n+1) carried out in the
    log domain, so neither factorials nor exp(-alpha^2/2) underflow.  If
    ``tail_tol`` is given the weight beyond ``n_max`` must stay below it.
    """
    if alpha < 0 or not math.isfinite(alpha):
        raise DomainError(f"alpha must be finite and >= 0, got {alpha}")
    if n_max < 1:
        raise DomainError(f"n_max must be >= 1, got {n_max}")
    if alpha == 0.0:
        weights = np.zeros(n_max + 1)
        weights[0] = 1.0
        return weights
    if tail_tol is not None:
        tail = poisson_tail(alpha, n_max)
        if tail >= tail_tol:
            raise DomainError(
                f"n_max={n_max} leaves Fock tail {tail:.3e} >= {tail_tol:.3e} for alpha={alpha}"
            )
    return np.exp(_log_weights(alpha, n_max))


@dataclass(frozen=True)
class ModelConfig:
    """Full description of one Jaynes-Cummings run.

    ``t_grid`` holds scaled times T = t*lambda.  ``series_tol`` bounds the Fock
    tail and series truncations; ``quad_tol`` is the absolute tolerance for
    the quadrature oracles.
    """

    alpha: float
    vartheta: float
    t_grid: tuple[float, ...] = (0.0,)
    n_max: int | None = None
    series_tol: float = 1e-12
    quad_tol: float = 1e-10
    ground_vacuum: bool = True

    def __post_init__(self):
        if not math.isfinite(self.alpha) or self.alpha < 0:
            raise DomainError(f"alpha must be finite and >= 0, got {self.alpha}")
        if not math.isfinite(self.vartheta):
            raise DomainError("vartheta must be finite")
        grid = tuple(float(t) for t in np.atleast_1d(np.asarray(self.t_grid, dtype=float)))
        if not grid:
            raise DomainError("t_grid is empty")
        if grid[0] < 0 or not all(math.isfinite(t) for t in grid):
            raise DomainError("t_grid must hold finite times T >= 0")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise DomainError("t_grid must be strictly increasing")
        object.__setattr__(self, "t_grid", grid)
        if self.series_tol <= 0 or self.quad_tol <= 0:
            raise DomainError("tolerances must be positive")
        n_max = default_n_max(self.alpha) if self.n_max is None else int(self.n_max)
        if n_max < 1:
            raise DomainError(f"n_max must be >= 1, got {n_max}")
        object.__setattr__(self, "n_max", n_max)
        tail = poisson_tail(self.alpha, n_max)
        if tail >= self.series_tol:
            raise DomainError(
                f"Fock tail {tail:.3e} beyond n_max={n_max} exceeds series_tol={self.series_tol:.1e}"
            )

    @classmethod
    def uniform(cls, alpha, vartheta, t_max=50.0, t_steps=2000, **kwargs):
        """Configuration on ``t_steps`` evenly spaced times in [0, t_max]."""
        return cls(alpha, vartheta, tuple(np.linspace(0.0, t_max, t_steps)), **kwargs)


@dataclass(frozen=True)
class AmplitudeSet:
    """Joint-state amplitudes at scaled time ``t``.

    ``g1[n]`` multiplies |e,n>, ``g2[n]`` multiplies |g,n+1> and ``g0``
    multiplies the stationary |g,0>.
    """

    g1: np.ndarray
    g2: np.ndarray
    t: float
    g0: complex = 0.0

    def norm(self) -> float:
        return float(np.sum(np.abs(self.g1) ** 2) + np.sum(np.abs(self.g2) ** 2) + abs(self.g0) ** 2)


@dataclass(frozen=True)
class BlochVector:
    """(b, c, h) = (<sigma_x>, <sigma_y>, <sigma_z>) of the reduced atomic state."""

    b: float
    c: float
    h: float

    def __post_init__(self):
        for name in ("b", "c", "h"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not all(math.isfinite(x) for x in (self.b, self.c, self.h)):
            raise DomainError("Bloch components must be finite")
        if self.b * self.b + self.c * self.c + self.h * self.h > 1.0 + BLOCH_SLACK:
            raise DomainError(f"Bloch vector {self.as_tuple()} lies outside the unit ball")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.b, self.c, self.h)

    @property
    def transverse_sq(self) -> float:
        """b^2 + c^2."""
        return self.b * self.b + self.c * self.c


def _doublet_amplitudes(weights, vartheta, times):
    # weights holds C_0..C_{n_max+1}; times is a 1-D array
    cn, cn1 = weights[:-1], weights[1:]
    rabi = np.sqrt(np.arange(1, cn.size + 1, dtype=float))
    phase = np.multiply.outer(times, rabi)
    cos_p, sin_p = np.cos(phase), np.sin(phase)
    cv, sv = math.cos(vartheta), math.sin(vartheta)
    g1 = cn * cv * cos_p - 1j * (cn1 * sv * sin_p)
    g2 = cn1 * sv * cos_p - 1j * (cn * cv * sin_p)
    return g1, g2


def _ground_vacuum(config: ModelConfig, weights) -> complex:
    return complex(weights[0] * math.sin(config.vartheta)) if config.ground_vacuum else 0j


def evolve(config: ModelConfig, T: float) -> AmplitudeSet:
    """Amplitudes of the joint state at scaled time ``T``."""
    if not T >= 0:
        raise DomainError(f"T must be >= 0, got {T}")
    weights = coherent_weights(config.alpha, config.n_max + 1)
    g1, g2 = _doublet_amplitudes(weights, config.vartheta, np.array([float(T)]))
    return AmplitudeSet(g1[0], g2[0], float(T), _ground_vacuum(config, weights))


def bloch_vector(amps: AmplitudeSet) -> BlochVector:
    h = np.sum(np.abs(amps.g1) ** 2 - np.abs(amps.g2) ** 2) - abs(amps.g0) ** 2
    coherence = np.sum(np.conj(amps.g1[1:]) * amps.g2[:-1]) + np.conj(amps.g1[0]) * amps.g0
    return BlochVector(2.0 * coherence.real, 2.0 * coherence.imag, h)


def bloch_grid(config: ModelConfig, times=None) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorised Bloch components (b, c, h) over ``times`` (default: the config grid)."""
    times = np.asarray(config.t_grid if times is None else times, dtype=float)
    weights = coherent_weights(config.alpha, config.n_max + 1)
    g1, g2 = _doublet_amplitudes(weights, config.vartheta, times)
    g0 = _ground_vacuum(config, weights)
    h = np.sum(np.abs(g1) ** 2 - np.abs(g2) ** 2, axis=1) - abs(g0) ** 2
    coherence = np.sum(np.conj(g1[:, 1:]) * g2[:, :-1], axis=1) + np.conj(g1[:, 0]) * g0
    return 2.0 * coherence.real, 2.0 * coherence.imag, h


def eta(v: BlochVector) -> float:
    """Length of the Bloch vector; 1 for a pure atomic state."""
    return math.sqrt(v.b * v.b + v.c * v.c + v.h * v.h)
