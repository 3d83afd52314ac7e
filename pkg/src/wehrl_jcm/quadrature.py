"""Quadrature oracles on the two sphere angles plus the closed-form integrals
and log-Gamma/Beta helpers the series expansions lean on.

The oracles know nothing about the entropy closed forms; they only see an
integrand.  phi-integrals use the uniform trapezoid rule, which converges
spectrally for smooth periodic functions.  theta-integrals carry the sin(theta)
surface weight and use adaptive Gauss-Legendre bisection.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, QuadratureConvergenceError

TWO_PI = 2.0 * math.pi
DEFAULT_TOL = 1e-10


class Domain(enum.Enum):
    PHI = "phi"  # [0, 2pi), periodic
    THETA = "theta"  # [0, pi], sin(theta) weight


@dataclass(frozen=True)
class IntegrandHandle:
    evaluator: Callable[[np.ndarray], np.ndarray]
    domain: Domain

    def __call__(self, x):
        return self.evaluator(x)


def _evaluator(f, domain):
    if isinstance(f, IntegrandHandle):
        if f.domain is not domain:
            raise DomainError(f"integrand declared on {f.domain.value}, expected {domain.value}")
        f = f.evaluator

    def wrapped(x):
        # broadcast constants such as lambda x: 1.0
        return np.broadcast_to(np.asarray(f(x), dtype=float), x.shape)

    return wrapped


def periodic_trapezoid(f, n: int) -> float:
    """n-panel uniform trapezoid estimate of the integral of f over [0, 2pi]."""
    if n < 1:
        raise DomainError(f"panel count must be positive, got {n}")
    g = _evaluator(f, Domain.PHI)
    return TWO_PI * math.fsum(g(TWO_PI * np.arange(n) / n)) / n


def integrate_phi(f, tol: float = DEFAULT_TOL, max_panels: int = 2**20) -> float:
    """Integral of a 2pi-periodic ``f`` over [0, 2pi].

    Panel count doubles from 8, reusing previous nodes, until two successive
    estimates differ by less than ``tol`` (and at least 16 panels were used).
    """
    g = _evaluator(f, Domain.PHI)
    n = 8
    total = math.fsum(g(TWO_PI * np.arange(n) / n))
    estimate = TWO_PI * total / n
    while n < max_panels:
        midpoints = math.pi * (2 * np.arange(n) + 1) / n
        total += math.fsum(g(midpoints))
        n *= 2
        refined = TWO_PI * total / n
        if n >= 16 and abs(refined - estimate) < tol:
            return refined
        estimate = refined
    raise QuadratureConvergenceError(
        f"periodic trapezoid did not reach tol={tol:.1e} with {n} panels", estimate
    )


_GL_ORDER = 12
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(_GL_ORDER)


def integrate_theta(f, tol: float = DEFAULT_TOL, max_depth: int = 40) -> float:
    """Integral of f(theta) sin(theta) over [0, pi] by adaptive Gauss-Legendre.

    Each panel's 12-point estimate is compared against the sum over its two
    halves; a panel is accepted once the difference drops below its share
    ``tol * width / pi`` of the tolerance.  All panels at one bisection level
    are evaluated in a single vectorised call.
    """
    g = _evaluator(f, Domain.THETA)

    def panels(a, b):
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        x = mid[:, None] + half[:, None] * _GL_NODES
        return half * ((g(x) * np.sin(x)) @ _GL_WEIGHTS)

    a, b = np.array([0.0]), np.array([math.pi])
    coarse = panels(a, b)
    accepted = []
    for _ in range(max_depth):
        m = 0.5 * (a + b)
        left, right = panels(a, m), panels(m, b)
        fine = left + right
        ok = np.abs(fine - coarse) <= np.maximum(tol * (b - a) / math.pi, 4e-16 * np.abs(fine))
        accepted.extend(fine[ok].tolist())
        if ok.all():
            return math.fsum(accepted)
        keep = ~ok
        a = np.concatenate((a[keep], m[keep]))
        b = np.concatenate((m[keep], b[keep]))
        coarse = np.concatenate((left[keep], right[keep]))
    raise QuadratureConvergenceError(
        f"adaptive Gauss-Legendre did not reach tol={tol:.1e} within depth {max_depth}",
        math.fsum(accepted) + float(coarse.sum()),
    )


def trig_power_integral(c1: float, c2: float, k: int) -> float:
    """Closed form of the integral of (c1 sin x + c2 cos x)^k over [0, 2pi]."""
    if k < 0 or int(k) != k:
        raise DomainError(f"k must be a non-negative integer, got {k}")
    k = int(k)
    if k % 2:
        return 0.0
    m = k // 2
    # (2m)! / (4^m (m!)^2), accumulated as a product of (2j-1)/(2j)
    coeff = 1.0
    for j in range(1, m + 1):
        coeff *= (2 * j - 1) / (2 * j)
    return TWO_PI * coeff * (c1 * c1 + c2 * c2) ** m


# Lanczos approximation, g = 7, nine coefficients
_LANCZOS_G = 7.0
_LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_TWO_PI = 0.5 * math.log(TWO_PI)


def log_gamma(x: float) -> float:
    """ln Gamma(x) for x > 0 by the Lanczos approximation."""
    if not x > 0 or not math.isfinite(x):
        raise DomainError(f"log_gamma needs a positive finite argument, got {x}")
    if x == 1.0 or x == 2.0:
        return 0.0
    if x < 0.5:
        return math.log(math.pi / math.sin(math.pi * x)) - log_gamma(1.0 - x)
    x -= 1.0
    series = _LANCZOS_COEFFS[0]
    for i, coeff in enumerate(_LANCZOS_COEFFS[1:], start=1):
        series += coeff / (x + i)
    t = x + _LANCZOS_G + 0.5
    return _HALF_LOG_TWO_PI + (x + 0.5) * math.log(t) - t + math.log(series)


def log_beta(a: float, b: float) -> float:
    if not (a > 0 and b > 0):
        raise DomainError(f"log_beta needs positive arguments, got ({a}, {b})")
    return log_gamma(a) + log_gamma(b) - log_gamma(a + b)


def sin_power_integral(m: int) -> float:
    """Integral of sin^(m-1) x over [0, pi] via the Beta-function identity."""
    if m < 1 or int(m) != m:
        raise DomainError(f"m must be a positive integer, got {m}")
    half = 0.5 * (m + 1)
    return math.pi * math.exp(-(m - 1) * math.log(2.0) - math.log(m) - log_beta(half, half))
