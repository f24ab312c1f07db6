"""Gamma, Bessel J and the normalized Bessel kernel.

The normalized kernel is ``calJ(lam, z) = J_lam(z) / z**lam``, an even entire
function. It is evaluated in four regimes:

* ``|z| <= SERIES_RADIUS``: power series with Neumaier-compensated summation
  (compiled kernel when available);
* half-integer order: closed trigonometric form plus upward recurrence;
* real ``|z| >= HANKEL_RADIUS``: Hankel's large-argument expansion;
* otherwise: Gauss-Jacobi quadrature of the Poisson integral
  ``calJ(lam, z) = C * int_{-1}^{1} cos(s z) (1 - s^2)^(lam - 1/2) ds``,
  at orders of 2 and above combined with upward recurrence where ``|z| > lam + 2``.

Non-real arguments are accepted up to ``|z| <= COMPLEX_ENVELOPE``; beyond that
a :class:`RangeError` is raised.

The order ``lam = -1/2`` follows the convention ``calJ(-1/2, z) = cos z``.
Transforms use :func:`bessel_kernel`, which carries the factor
``sqrt(2/pi)`` at that order so that one formula covers every dimension.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi

from . import _backend
from .errors import DomainError, RangeError

SERIES_RADIUS = 6.0
HANKEL_RADIUS = 25.0
COMPLEX_ENVELOPE = 1000.0
_HALF_INT_MAX = 16.0


def gamma(x):
    """Gamma function for positive real ``x``.

    A validating wrapper around :func:`math.gamma`; arguments beyond about
    171.6 overflow to ``inf``.
    """
    x = float(x)
    if not x > 0.0 or math.isinf(x):
        raise DomainError(f"gamma requires a finite positive argument, got {x!r}")
    try:
        return math.gamma(x)
    except OverflowError:
        return math.inf


@dataclass(frozen=True)
class BesselOrder:
    """Order ``lam`` of a Bessel function; ``lam >= -1/2``."""

    lam: float

    def __post_init__(self):
        lam = float(self.lam)
        if not math.isfinite(lam) or lam < -0.5:
            raise DomainError(f"Bessel order must satisfy lam >= -1/2, got {self.lam!r}")
        object.__setattr__(self, "lam", lam)

    @property
    def is_half_integer(self):
        return (2.0 * self.lam) % 2.0 == 1.0


def _order(order):
    return order if isinstance(order, BesselOrder) else BesselOrder(order)


@lru_cache(maxsize=256)
def _jacobi_rule(lam, n):
    c = 1.0 / (2.0**lam * gamma(lam + 0.5) * math.sqrt(math.pi))
    if lam == math.floor(lam):
        # s = sin(theta) turns the integrand into a smooth periodic function
        # for integer orders; the trapezoid rule then converges geometrically
        # and its nodes carry no root-finding error.
        theta = 2.0 * math.pi * np.arange(2 * n) / (2 * n)
        s = np.sin(theta)
        w = np.cos(theta) ** (2 * int(lam)) * (math.pi / (2 * n))
        return s, w * c
    a = lam - 0.5
    s, w = roots_jacobi(n, a, a)
    return s, w * c


def _poisson_quadrature(lam, z):
    out = np.empty(z.shape, dtype=np.complex128)
    # Group arguments by node count so every group shares one rule.
    n_needed = (np.ceil((0.5 * np.abs(z) + 30.0) / 16.0) * 16).astype(int)
    for n in np.unique(n_needed):
        sel = n_needed == n
        s, w = _jacobi_rule(lam, int(n))
        out[sel] = _backend.jacobi_cos_sum(s, w, z[sel])
    return out


def _poisson_or_recurrence(lam, z):
    """Poisson quadrature, or for ``|z| > lam + 2`` upward recurrence from low orders.

    The cosine sum loses digits to cancellation roughly like ``lam**3``; the
    recurrence ``K_{nu+1} = (2 nu K_nu - K_{nu-1}) / z**2`` on the normalized
    kernel is stable while the order stays below ``|z|``.
    """
    m = int(math.floor(lam))
    if m < 2:
        return _poisson_quadrature(lam, z)
    out = np.empty(z.shape, dtype=np.complex128)
    rec = np.abs(z) > lam + 2.0
    if (~rec).any():
        out[~rec] = _poisson_quadrature(lam, z[~rec])
    if rec.any():
        zr = z[rec]
        mu = lam - m
        prev = _poisson_quadrature(mu, zr)
        cur = _poisson_quadrature(mu + 1.0, zr)
        z2 = zr * zr
        nu = mu + 1.0
        for _ in range(m - 1):
            prev, cur = cur, (2.0 * nu * cur - prev) / z2
            nu += 1.0
        out[rec] = cur
    return out


def _half_integer(lam, z):
    c = math.sqrt(2.0 / math.pi)
    prev = c * np.cos(z)
    if lam == -0.5:
        return prev
    cur = c * np.sin(z) / z
    nu = 0.5
    z2 = z * z
    while nu < lam:
        prev, cur = cur, (2.0 * nu * cur - prev) / z2
        nu += 1.0
    return cur


def _hankel(lam, x):
    """Large-argument expansion of J_lam(x)/x**lam for real x >= HANKEL_RADIUS."""
    mu = 4.0 * lam * lam
    p = np.ones_like(x)
    q = np.zeros_like(x)
    a = np.ones_like(x)
    prev_mag = np.full(x.shape, np.inf)
    active = np.ones(x.shape, dtype=bool)
    for k in range(1, 60):
        a = a * (mu - (2 * k - 1) ** 2) / (k * 8.0 * x)
        mag = np.abs(a)
        # Asymptotic series: stop at the smallest term.
        active &= (mag < prev_mag) & (mag > 1e-17)
        if not active.any():
            break
        sign = -1.0 if (k // 2) % 2 else 1.0
        if k % 2:
            q = np.where(active, q + sign * a, q)
        else:
            p = np.where(active, p + sign * a, p)
        prev_mag = mag
    chi = x - (lam / 2.0 + 0.25) * math.pi
    j = np.sqrt(2.0 / (math.pi * x)) * (p * np.cos(chi) - q * np.sin(chi))
    return j / x**lam


def bessel_kernel(order, z):
    """``J_lam(z) / z**lam`` on complex ``z`` for every ``lam >= -1/2``.

    At ``lam = -1/2`` this is ``sqrt(2/pi) cos z``.
    """
    lam = _order(order).lam
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    # Even function: evaluate in the right half plane.
    z = np.where(z.real < 0, -z, z)
    mag = np.abs(z)
    nonreal = z.imag != 0
    if np.any(nonreal & (mag > COMPLEX_ENVELOPE)):
        raise RangeError(
            f"calJ is evaluated for non-real |z| <= {COMPLEX_ENVELOPE:g}; got |z| = {mag.max():.4g}"
        )
    out = np.empty(z.shape, dtype=np.complex128)
    small = mag <= SERIES_RADIUS
    if small.any():
        first = 1.0 / (2.0**lam * gamma(lam + 1.0))
        out[small] = _backend.calj_series(lam, first, z[small])
    rest = ~small
    if rest.any():
        if (2.0 * lam) % 2.0 == 1.0 and lam <= _HALF_INT_MAX:
            out[rest] = _half_integer(lam, z[rest])
        else:
            hank = rest & ~nonreal & (mag >= HANKEL_RADIUS)
            if hank.any():
                out[hank] = _hankel(lam, z[hank].real)
            quad = rest & ~hank
            if quad.any():
                out[quad] = _poisson_or_recurrence(lam, z[quad])
    # Real arguments give exactly real values.
    out[~nonreal] = out[~nonreal].real
    return out[0] if scalar else out


def calJ(order, z):
    """Normalized Bessel kernel ``J_lam(z)/z**lam``, with ``calJ(-1/2, z) = cos z``.

    Parameters
    ----------
    order : BesselOrder or float
        Order ``lam >= -1/2``.
    z : complex or array_like
        Argument(s). Non-real arguments must satisfy ``|z| <= COMPLEX_ENVELOPE``.

    Returns
    -------
    complex or ndarray of complex
    """
    order = _order(order)
    if order.lam == -0.5:
        scalar = np.ndim(z) == 0
        out = np.cos(np.atleast_1d(np.asarray(z, dtype=np.complex128)))
        return out[0] if scalar else out
    return bessel_kernel(order, z)


def calJ_derivative(order, z):
    """d/dz of :func:`bessel_kernel`, equal to ``-z * bessel_kernel(lam + 1, z)``."""
    lam = _order(order).lam
    z = np.asarray(z, dtype=np.complex128)
    return -z * bessel_kernel(lam + 1.0, z)


def bessel_j(order, x):
    """Bessel function of the first kind ``J_lam(x)`` for real ``x > 0``."""
    lam = _order(order).lam
    scalar = np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if np.any(~(x > 0)):
        raise DomainError("bessel_j requires x > 0")
    out = x**lam * bessel_kernel(lam, x).real
    return float(out[0]) if scalar else out
