"""Von Neumann and information entropies of the atomic state, in nats."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import BlochVector
from .errors import DomainError

LN2 = math.log(2.0)
ENDPOINT_SLACK = 1e-12


def _as_output(x, scalar):
    return float(x) if scalar else x


def binary_entropy(x):
    """Shannon entropy of the outcome probabilities (1 +/- x)/2.

    Written as ln2 - [(1+x) log1p(x) + (1-x) log1p(-x)]/2 so that neither end
    of [-1, 1] loses digits; inputs within 1e-12 beyond +/-1 are clamped and
    0 ln 0 is taken as 0.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(np.abs(arr) > 1.0 + ENDPOINT_SLACK) or np.any(np.isnan(arr)):
        raise DomainError("binary entropy argument outside [-1, 1]")
    a = np.clip(np.abs(arr), 0.0, 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        lower = np.where(a < 1.0, (1.0 - a) * np.log1p(-a), 0.0)
    out = LN2 - 0.5 * ((1.0 + a) * np.log1p(a) + lower)
    out = np.maximum(out, 0.0)
    return _as_output(out, arr.ndim == 0)


def von_neumann(eta_val):
    """Entropy of a qubit whose Bloch vector has length ``eta_val``."""
    arr = np.asarray(eta_val, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > 1.0 + ENDPOINT_SLACK) or np.any(np.isnan(arr)):
        raise DomainError("Bloch length must lie in [0, 1]")
    return binary_entropy(arr)


def info_entropy(x):
    """H(sigma_k) for a Pauli expectation value x; even in x."""
    return binary_entropy(x)


def info_entropies(v: BlochVector) -> tuple[float, float, float]:
    """(H(b), H(c), H(h))."""
    return info_entropy(v.b), info_entropy(v.c), info_entropy(v.h)


@dataclass
class EntropyRecord:
    """Every scalar entropy quantity at one scaled time.

    Quantities that were not requested stay ``None``.  ``error`` carries the
    message of the first failure at this time point, if any.
    """

    t: float
    bloch: BlochVector | None = None
    eta: float | None = None
    gamma: float | None = None
    H_b: float | None = None
    H_c: float | None = None
    H_h: float | None = None
    W_theta: float | None = None
    W_phi: float | None = None
    W_theta_hat: float | None = None
    W_rescaled: float | None = None
    Z_theta_at: dict[float, float] = field(default_factory=dict)
    Z_phi_at: dict[float, float] = field(default_factory=dict)
    Z_half_pi_hat: float | None = None
    error: str | None = None
