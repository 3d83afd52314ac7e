"""Atomic Husimi Q-function on the Bloch sphere and its angular marginals."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import BlochVector
from .errors import DomainError

TWO_PI = 2.0 * math.pi
FOUR_PI = 4.0 * math.pi


@dataclass(frozen=True)
class SphericalPoint:
    theta: float
    phi: float

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi:
            raise DomainError(f"theta={self.theta} outside [0, pi]")
        if not 0.0 <= self.phi < TWO_PI:
            raise DomainError(f"phi={self.phi} outside [0, 2pi)")


def beta(v: BlochVector, theta, phi):
    """h cos(theta) + (b cos(phi) + c sin(phi)) sin(theta); |beta| <= |v|."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    return v.h * np.cos(theta) + (v.b * np.cos(phi) + v.c * np.sin(phi)) * np.sin(theta)


def q_value(v: BlochVector, p: SphericalPoint) -> float:
    return float((1.0 + beta(v, p.theta, p.phi)) / FOUR_PI)


def q_theta(v: BlochVector, theta):
    """Q_a integrated over phi: (1 + h cos theta) / 2."""
    out = 0.5 * (1.0 + v.h * np.cos(np.asarray(theta, dtype=float)))
    return out if out.ndim else float(out)


def q_phi(v: BlochVector, phi):
    """Q_a integrated over theta with the sin(theta) weight."""
    phi = np.asarray(phi, dtype=float)
    out = (1.0 + 0.25 * math.pi * (v.b * np.cos(phi) + v.c * np.sin(phi))) / TWO_PI
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class AtomicQ:
    """Q-function of a fixed Bloch vector, callable on arrays of angles.

    The slicing helpers return one-angle evaluators suitable for the
    quadrature routines.
    """

    v: BlochVector

    def __call__(self, theta, phi):
        return (1.0 + beta(self.v, theta, phi)) / FOUR_PI

    def at_theta(self, theta: float):
        """phi -> Q_a(theta, phi) with theta held fixed."""
        return lambda phi: self(theta, phi)

    def at_phi(self, phi: float):
        """theta -> Q_a(theta, phi) with phi held fixed."""
        return lambda theta: self(theta, phi)

    def marginal_theta(self, theta):
        return q_theta(self.v, theta)

    def marginal_phi(self, phi):
        return q_phi(self.v, phi)

    def grid(self, n_theta: int = 181, n_phi: int = 361):
        """Endpoint-inclusive (theta, phi, Q) mesh, 1 degree spacing by default."""
        theta = np.linspace(0.0, math.pi, n_theta)
        phi = np.linspace(0.0, TWO_PI, n_phi)
        tt, pp = np.meshgrid(theta, phi, indexing="ij")
        return theta, phi, self(tt, pp)
