"""Marginal and density atomic Wehrl entropies.

Each quantity is an entropy integral of the atomic Q-function
Q_a = (1 + beta) / 4pi.  Three evaluation routes are offered where they exist:

* ``WehrlMethod.QUADRATURE`` integrates the defining integral directly and is
  always available; it is the reference route.
* ``WehrlMethod.CLOSED_FORM`` uses the elementary closed forms.  Z_theta has
  one only at theta in {0, pi/2, pi}; Z_phi only where b cos(phi) + c sin(phi)
  vanishes.
* ``WehrlMethod.SERIES`` sums the power series that follow from expanding
  (1 + x) ln(1 + x).  They need max|beta| < 1 and converge slowly close to 1,
  so beyond ``SeriesPolicy.fallback_threshold`` the call falls back to
  quadrature with a :class:`SeriesFallbackWarning`.

Rescaled entropies map each quantity affinely onto [0, ln 2].  By default the
exact range constants OMEGA and RHO are used; ``literal=True`` switches to the
rounded published constants 0.17 and 0.15 and the published W formula.
"""

from __future__ import annotations

import enum
import math
import threading
import warnings
from dataclasses import dataclass

import numpy as np

from .core import BlochVector
from .entropies import LN2, info_entropy
from .errors import DomainError, SeriesConvergenceError, SeriesFallbackWarning
from .husimi import AtomicQ, q_phi, q_theta
from .quadrature import DEFAULT_TOL, integrate_phi, integrate_theta

LN_2PI = math.log(2.0 * math.pi)
LN_4PI = math.log(4.0 * math.pi)
XI_MAX = math.pi**2 / 16.0
ANGLE_ATOL = 1e-12
RANGE_SLACK = 1e-9


class WehrlMethod(enum.Enum):
    CLOSED_FORM = "closed"
    SERIES = "series"
    QUADRATURE = "quadrature"


@dataclass(frozen=True)
class SeriesPolicy:
    """Truncation control for the series routes.

    ``tol`` bounds the truncation error (absolute, nats), ``max_terms`` caps the
    expansion order and ``fallback_threshold`` is the largest max|beta| for which
    a series is attempted at all.
    """

    tol: float = 1e-12
    max_terms: int = 400
    fallback_threshold: float = 0.9

    def __post_init__(self):
        if not self.tol > 0:
            raise DomainError("series tol must be positive")
        if self.max_terms < 10:
            raise DomainError("max_terms must be >= 10")
        if not 0.0 < self.fallback_threshold <= 1.0:
            raise DomainError("fallback_threshold must lie in (0, 1]")


DEFAULT_POLICY = SeriesPolicy()


def neg_xlogx(q):
    """-q ln q with 0 ln 0 = 0; round-off negatives are clipped to 0."""
    q = np.maximum(np.asarray(q, dtype=float), 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(q > 0.0, -q * np.log(np.where(q > 0.0, q, 1.0)), 0.0)


def _ring_entropy_deficit(a2):
    """(1/2pi) * integral of (1 + a cos x) ln(1 + a cos x) over a period, a^2 = a2.

    Equals 1 - sqrt(1 - a2) + ln[(1 + sqrt(1 - a2)) / 2]; written through
    d = sqrt(1 - a2) - 1 = -a2 / (1 + sqrt(1 - a2)) to stay accurate at small a2.
    """
    a2 = np.clip(np.asarray(a2, dtype=float), 0.0, 1.0)
    root = np.sqrt(1.0 - a2)
    d = -a2 / (1.0 + root)
    return -d + np.log1p(0.5 * d)


OMEGA = float(_ring_entropy_deficit(XI_MAX))
RHO = 0.5 * float(_ring_entropy_deficit(1.0))
# range floors as the closed forms produce them, so the rescalings hit 0 bit-exactly
W_PHI_MIN = LN_2PI - OMEGA
Z_HALF_PI_MAX = 0.5 * LN_4PI
Z_HALF_PI_MIN = Z_HALF_PI_MAX - RHO
PAPER_OMEGA = 0.17
PAPER_RHO = 0.15


def _scalar(x):
    x = np.asarray(x)
    return float(x) if x.ndim == 0 else x


def _check_transverse(b2c2):
    if np.any(np.asarray(b2c2) > 1.0 + 1e-12):
        raise DomainError("b^2 + c^2 exceeds 1")


def _check_h(h):
    if np.any(np.abs(np.asarray(h, dtype=float)) > 1.0 + 1e-12):
        raise DomainError("|h| exceeds 1")


# ---------------------------------------------------------------- W_theta


def _w_theta_small(a):
    # ln2 - sum_j a^(2j) / ((2j-1)(2j)(2j+1)); used for |h| < 0.05
    a2 = a * a
    total = np.zeros_like(a)
    power = np.ones_like(a)
    for j in range(1, 10):
        power = power * a2
        total = total + power / ((2 * j - 1) * (2 * j) * (2 * j + 1))
    return LN2 - total


def _xlog1p(weight, x):
    # weight * log1p(x), zero where weight vanishes
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(weight > 0.0, weight * np.log1p(np.where(weight > 0.0, x, 0.0)), 0.0)


def w_theta(h, method: WehrlMethod = WehrlMethod.CLOSED_FORM, quad_tol: float = DEFAULT_TOL):
    """Marginal Wehrl entropy of the theta-marginal; depends on h only.

    Lies in [1/2, ln 2]: ln 2 for h = 0, 1/2 for h = +/-1.
    """
    _check_h(h)
    if method is WehrlMethod.QUADRATURE:
        v = BlochVector(0.0, 0.0, float(np.clip(h, -1.0, 1.0)))
        return integrate_theta(lambda th: neg_xlogx(q_theta(v, th)), quad_tol)
    if method is not WehrlMethod.CLOSED_FORM:
        raise DomainError(f"w_theta has no {method.value} route")
    a = np.clip(np.abs(np.asarray(h, dtype=float)), 0.0, 1.0)
    small = a < 0.05
    safe = np.where(small, 1.0, a)
    big = (
        math.log(2.0 * math.sqrt(math.e))
        + _xlog1p((1.0 - safe) ** 2, -safe) / (4.0 * safe)
        - (1.0 + safe) ** 2 * np.log1p(safe) / (4.0 * safe)
    )
    return _scalar(np.where(small, _w_theta_small(a), big))


def w_theta_info_form(h):
    """W_theta written as H(h) + 1/2 + (1 - h^2)/(4h) ln[(1 - h)/(1 + h)]."""
    _check_h(h)
    a = np.clip(np.abs(np.asarray(h, dtype=float)), 0.0, 1.0)
    small = a < 0.05
    safe = np.where(small, 1.0, a)
    with np.errstate(divide="ignore", invalid="ignore"):
        log_ratio = np.log1p(-safe) - np.log1p(safe)
        tail = np.where(safe < 1.0, (1.0 - safe * safe) / (4.0 * safe) * log_ratio, 0.0)
    big = info_entropy(safe) + 0.5 + tail
    return _scalar(np.where(small, _w_theta_small(a), big))


# ---------------------------------------------------------------- W_phi


def _w_phi_series_sum(xi: float, policy: SeriesPolicy) -> float:
    """sum_{n>=0} (2n)! / (4^(n+1) [(n+1)!]^2) xi^(n+1), truncated by a geometric tail bound."""
    if not 0.0 <= xi < 1.0:
        raise DomainError(f"series argument {xi} outside [0, 1)")
    term = 0.25 * xi
    total = 0.0
    for n in range(policy.max_terms):
        total += term
        # term ratio is bounded by xi, so the tail is below term * xi / (1 - xi)
        if term * xi / (1.0 - xi) < policy.tol:
            return total
        term *= (2 * n + 1) * (2 * n + 2) * xi / (4.0 * (n + 2) ** 2)
    raise SeriesConvergenceError(
        f"series in xi={xi} not within tol={policy.tol:.1e} after {policy.max_terms} terms", total
    )


def w_phi(
    b,
    c,
    method: WehrlMethod = WehrlMethod.CLOSED_FORM,
    policy: SeriesPolicy = DEFAULT_POLICY,
    quad_tol: float = DEFAULT_TOL,
):
    """Marginal Wehrl entropy of the phi-marginal; depends on b^2 + c^2 only.

    Range [ln(2pi) - OMEGA, ln(2pi)].
    """
    b2c2 = np.asarray(b, dtype=float) ** 2 + np.asarray(c, dtype=float) ** 2
    _check_transverse(b2c2)
    xi = XI_MAX * np.minimum(b2c2, 1.0)
    if method is WehrlMethod.CLOSED_FORM:
        return _scalar(LN_2PI - _ring_entropy_deficit(xi))
    if method is WehrlMethod.SERIES:
        return LN_2PI - _w_phi_series_sum(float(xi), policy)
    v = BlochVector(float(b), float(c), 0.0)
    return integrate_phi(lambda ph: neg_xlogx(q_phi(v, ph)), quad_tol)


# ---------------------------------------------------------------- rescalings


def rescale_w_theta(w):
    """Map W_theta from [1/2, ln 2] onto [0, ln 2]."""
    w = np.asarray(w, dtype=float)
    if np.any(w < 0.5 - RANGE_SLACK) or np.any(w > LN2 + RANGE_SLACK):
        raise DomainError("W_theta outside [1/2, ln 2]")
    return _scalar(LN2 / math.log(4.0 / math.e) * (2.0 * w - 1.0))


def rescale_w_phi(w, literal: bool = False):
    """Map W_phi from [ln(2pi) - OMEGA, ln(2pi)] onto [0, ln 2].

    ``literal=True`` applies ln2 / (ln(2pi) - 0.17) * (W_phi - 0.17) instead,
    which only fixes the upper endpoint.
    """
    w = np.asarray(w, dtype=float)
    if np.any(w < LN_2PI - OMEGA - RANGE_SLACK) or np.any(w > LN_2PI + RANGE_SLACK):
        raise DomainError("W_phi outside [ln(2pi) - omega, ln(2pi)]")
    if literal:
        return _scalar(LN2 / (LN_2PI - PAPER_OMEGA) * (w - PAPER_OMEGA))
    return _scalar(LN2 * (w - W_PHI_MIN) / (LN_2PI - W_PHI_MIN))


# ---------------------------------------------------------------- Z_theta


def z_theta_half_pi(
    b,
    c,
    method: WehrlMethod = WehrlMethod.CLOSED_FORM,
    policy: SeriesPolicy = DEFAULT_POLICY,
    quad_tol: float = DEFAULT_TOL,
):
    """Z_theta on the equator; depends on b^2 + c^2 only, range [ln(4pi)/2 - RHO, ln(4pi)/2]."""
    b2c2 = np.asarray(b, dtype=float) ** 2 + np.asarray(c, dtype=float) ** 2
    _check_transverse(b2c2)
    if method is WehrlMethod.CLOSED_FORM:
        return _scalar(Z_HALF_PI_MAX - 0.5 * _ring_entropy_deficit(b2c2))
    v = BlochVector(float(b), float(c), 0.0)
    if method is WehrlMethod.SERIES:
        if math.sqrt(float(b2c2)) > policy.fallback_threshold:
            _warn_fallback(math.sqrt(float(b2c2)), policy)
        else:
            # (1/8) sum (2n)! xi^(n+1) / (4^n [(n+1)!]^2) is half the W_phi sum
            return 0.5 * LN_4PI - 0.5 * _w_phi_series_sum(float(b2c2), policy)
    return z_theta(v, 0.5 * math.pi, WehrlMethod.QUADRATURE, quad_tol=quad_tol)


def rescaled_z_half_pi(b, c, literal: bool = False):
    """Equatorial Z_theta mapped onto [0, ln 2] (0.15 in place of RHO if ``literal``)."""
    z = np.asarray(z_theta_half_pi(b, c))
    if literal:
        return _scalar(LN2 / PAPER_RHO * (z - Z_HALF_PI_MAX + PAPER_RHO))
    return _scalar(LN2 * (z - Z_HALF_PI_MIN) / (Z_HALF_PI_MAX - Z_HALF_PI_MIN))


def _warn_fallback(peak, policy):
    warnings.warn(
        f"max|beta|={peak:.4f} exceeds fallback_threshold={policy.fallback_threshold}; "
        "using quadrature",
        SeriesFallbackWarning,
        stacklevel=3,
    )


def _series_order(peak: float, scale: float, policy: SeriesPolicy) -> int:
    """Smallest order M whose tail bound scale * peak^(M+1) / (M (M+1) (1 - peak)) < tol."""
    if peak == 0.0:
        return 1
    if peak >= 1.0:
        raise SeriesConvergenceError(f"max|beta|={peak:.4f} reaches 1; the log series diverges")
    order = 2
    while scale * peak ** (order + 1) / (order * (order + 1) * (1.0 - peak)) >= policy.tol:
        order += 1
        if order > policy.max_terms:
            raise SeriesConvergenceError(
                f"max|beta|={peak:.4f} needs more than {policy.max_terms} orders for "
                f"tol={policy.tol:.1e}"
            )
    return order


class _GrowingTable:
    """Thread-safe, grow-only cache of coefficient rows indexed by expansion order."""

    def __init__(self, build_row):
        self._build_row = build_row
        self._rows = []
        self._lock = threading.Lock()

    def upto(self, count: int) -> list:
        with self._lock:
            while len(self._rows) < count:
                self._rows.append(self._build_row(len(self._rows)))
            return self._rows[:count]


def _theta_row(i: int) -> np.ndarray:
    # order n = i + 2: (n-2)! / ((n-2r)! (r!)^2 4^r) = C(n, 2r) C(2r, r) / (4^r n (n-1))
    n = i + 2
    return np.array(
        [math.comb(n, 2 * r) * math.comb(2 * r, r) / (4**r * n * (n - 1)) for r in range(n // 2 + 1)]
    )


_THETA_ROWS = _GrowingTable(_theta_row)


def _z_theta_series(v: BlochVector, theta: float, policy: SeriesPolicy) -> float:
    along = v.h * math.cos(theta)
    across_sq = math.sin(theta) ** 2 * v.transverse_sq
    peak = abs(along) + math.sqrt(across_sq)
    order = _series_order(peak, 0.5, policy)
    total = along
    for n, coeffs in enumerate(_THETA_ROWS.upto(order - 1), start=2):
        r = np.arange(coeffs.size)
        powers = along ** (n - 2 * r) * across_sq**r
        total += (-1) ** n * math.fsum(coeffs * powers)
    return 0.5 * (1.0 + along) * LN_4PI - 0.5 * total


def z_theta(
    v: BlochVector,
    theta: float,
    method: WehrlMethod = WehrlMethod.QUADRATURE,
    policy: SeriesPolicy = DEFAULT_POLICY,
    quad_tol: float = DEFAULT_TOL,
) -> float:
    """Density Wehrl entropy along the circle of latitude ``theta``.

    -integral over phi in [0, 2pi] of Q_a ln Q_a.
    """
    if not 0.0 <= theta <= math.pi:
        raise DomainError(f"theta={theta} outside [0, pi]")
    if method is WehrlMethod.CLOSED_FORM:
        if math.isclose(theta, 0.0, abs_tol=ANGLE_ATOL):
            return float(neg_xlogx((1.0 + v.h) / (4.0 * math.pi)) * 2.0 * math.pi)
        if math.isclose(theta, math.pi, abs_tol=ANGLE_ATOL):
            return float(neg_xlogx((1.0 - v.h) / (4.0 * math.pi)) * 2.0 * math.pi)
        if math.isclose(theta, 0.5 * math.pi, abs_tol=ANGLE_ATOL):
            return z_theta_half_pi(v.b, v.c)
        raise DomainError(f"no closed form for Z_theta at theta={theta}")
    if method is WehrlMethod.SERIES:
        peak = abs(v.h * math.cos(theta)) + math.sin(theta) * math.sqrt(v.transverse_sq)
        if peak <= policy.fallback_threshold:
            return _z_theta_series(v, theta, policy)
        _warn_fallback(peak, policy)
    q = AtomicQ(v).at_theta(theta)
    return integrate_phi(lambda ph: neg_xlogx(q(ph)), quad_tol)


def z_theta_sum_identity(v: BlochVector) -> tuple[float, float]:
    """(Z at theta=0 plus Z at theta=pi, H(h) + ln 2pi); the two agree identically."""
    lhs = z_theta(v, 0.0, WehrlMethod.CLOSED_FORM) + z_theta(v, math.pi, WehrlMethod.CLOSED_FORM)
    return lhs, info_entropy(v.h) + LN_2PI


# ---------------------------------------------------------------- Z_phi


def _phi_odd_row(i: int) -> np.ndarray:
    """Odd part of the Z_phi triple sum, row n = i + 1 (order 2n+1), entries r = 0..n.

    The published coefficient is
        (2n-1)! (n-r)! / ((2r+1)! (2n-2r)!)
          * sum_s (-1)^s / ((n-r-s)! s! (2k-1) 4^k B(k, k)),  k = s+r+2.
    With B(k, k) = ((k-1)!)^2 / (2k-1)! the s-summand is
    (-1)^s C(n-r, s) C(2k-2, k-1) / 4^k / (n-r)!, so the inner sum is an exact
    integer over 4^(n+2).  In floating point the alternating inner sum loses
    every digit once n exceeds ~15, hence the exact arithmetic; each entry is
    rounded once at the end.
    """
    n = i + 1
    row = []
    for r in range(n + 1):
        j = n - r
        inner = sum(
            (-1) ** s * math.comb(j, s) * math.comb(2 * (s + r + 1), s + r + 1) * 4 ** (j - s)
            for s in range(j + 1)
        )
        num = math.factorial(2 * n - 1) * inner
        den = math.factorial(2 * r + 1) * math.factorial(2 * n - 2 * r) * 4 ** (n + 2)
        row.append(num / den)
    return np.array(row)


def _phi_even_row(i: int) -> np.ndarray:
    """Even part, row n = i + 1 (order 2n), entries r = 0..n:
    (2n-2)! r! / ((2r)! (2n-2r)!) * sum_s (-1)^s / ((r-s)! s! (2n+2s-2r+1)).
    """
    n = i + 1
    row = []
    for r in range(n + 1):
        denominators = [2 * (n - r + s) + 1 for s in range(r + 1)]
        common = math.lcm(*denominators)
        inner = sum((-1) ** s * math.comb(r, s) * (common // d) for s, d in enumerate(denominators))
        num = math.factorial(2 * n - 2) * inner
        den = math.factorial(2 * r) * math.factorial(2 * n - 2 * r) * common
        row.append(num / den)
    return np.array(row)


_PHI_ODD_ROWS = _GrowingTable(_phi_odd_row)
_PHI_EVEN_ROWS = _GrowingTable(_phi_even_row)


def _z_phi_series(h: float, eps: float, policy: SeriesPolicy) -> float:
    peak = math.hypot(h, eps)
    order = _series_order(peak, 1.0 / (2.0 * math.pi), policy)
    odd = _PHI_ODD_ROWS.upto((order - 1) // 2)
    even = _PHI_EVEN_ROWS.upto(order // 2)
    value = (2.0 + 0.5 * math.pi * eps) * LN_4PI / (4.0 * math.pi) - eps / 8.0
    odd_terms, even_terms = [], []
    for n, coeffs in enumerate(odd, start=1):
        r = np.arange(n + 1)
        odd_terms.append(math.fsum(coeffs * h ** (2 * (n - r)) * eps ** (2 * r + 1)))
    for n, coeffs in enumerate(even, start=1):
        r = np.arange(n + 1)
        even_terms.append(math.fsum(coeffs * h ** (2 * (n - r)) * eps ** (2 * r)))
    return value + math.fsum(odd_terms) - math.fsum(even_terms) / (2.0 * math.pi)


def z_phi(
    v: BlochVector,
    phi: float,
    method: WehrlMethod = WehrlMethod.QUADRATURE,
    policy: SeriesPolicy = DEFAULT_POLICY,
    quad_tol: float = DEFAULT_TOL,
) -> float:
    """Density Wehrl entropy along the meridian ``phi``.

    -integral over theta in [0, pi] of Q_a ln Q_a sin(theta).  The closed form
    applies when eps = b cos(phi) + c sin(phi) vanishes, where it reduces to
    (ln 2pi + W_theta(h)) / 2pi.
    """
    eps = v.b * math.cos(phi) + v.c * math.sin(phi)
    if method is WehrlMethod.CLOSED_FORM:
        if abs(eps) > ANGLE_ATOL:
            raise DomainError(f"no closed form for Z_phi with b cos(phi) + c sin(phi) = {eps:.3e}")
        return (LN_2PI + w_theta_info_form(v.h)) / (2.0 * math.pi)
    if method is WehrlMethod.SERIES:
        peak = math.hypot(v.h, eps)
        if peak <= policy.fallback_threshold:
            return _z_phi_series(v.h, eps, policy)
        _warn_fallback(peak, policy)
    q = AtomicQ(v).at_phi(phi)
    return integrate_theta(lambda th: neg_xlogx(q(th)), quad_tol)
