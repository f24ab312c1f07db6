"""Radial functions: representations, the catalogue, and closure operations.

Every function is stored through its profile ``f0`` with ``f(x) = f0(|x|)``
on ``R^d``. Representations:

``PiecewisePoly``
    Exact polynomial pieces in ``r`` (see :mod:`ppdcone.ppoly`).
``GaussianTimesPoly``
    ``P(r) exp(-rate r^2)``; :class:`HermiteQuartic` is the special case
    ``(H0 + 2a H2 + b H4) exp(-pi r^2)``.
``Analytic``
    A vectorized evaluator plus metadata (support, decay envelope, optional
    derivatives and closed-form transform).
``Scaled``, ``Product``, ``Convolution``, ``Mixture``
    Lazy combinators used when no exact closed form is available.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy import integrate

from . import ppoly as pp
from .errors import DomainError, UnsupportedOperation
from .ppoly import PPoly, exact
from .specfun import bessel_kernel, gamma

INF = math.inf


def _as_array(r):
    return np.asarray(r, dtype=float)


class RadialFunction:
    """Base class. Subclasses implement :meth:`profile`.

    Attributes
    ----------
    dim : int
        Ambient dimension ``d``.
    support_radius : float
        Radius of the support, ``inf`` when not compactly supported.
    parity : int
        +1 for even functions; -1 for odd-order derivatives (``d = 1`` only).
    """

    kind = "radial"
    parity = 1

    def __init__(self, dim, support_radius):
        if int(dim) != dim or dim < 1:
            raise DomainError(f"dimension must be a positive integer, got {dim!r}")
        self.dim = int(dim)
        self.support_radius = float(support_radius)

    # -- metadata used by quadrature ------------------------------------
    @property
    def breakpoints(self):
        """Interior radii where the profile is not smooth."""
        return ()

    @property
    def edge_exponent(self):
        """``a`` when ``f0(r) ~ (R - r)^a`` with non-integer ``a`` at the support end."""
        return None

    def decay(self, r):
        """Envelope ``E(r) >= |f0(r)|`` for large ``r`` (``None`` if unknown)."""
        return None

    @property
    def integrable(self):
        return math.isfinite(self.support_radius)

    def closed_transform(self, xi):
        """Exact transform values, or ``None`` when no closed form is known."""
        return None

    # -- evaluation --------------------------------------------------------
    def profile(self, r):
        raise NotImplementedError

    def __call__(self, x):
        """Evaluate at points.

        Scalars and 1-D arrays are read as signed positions on a line through
        the origin (so ``|x|`` is the radius); arrays of shape ``(n, dim)``
        are points of ``R^dim``.
        """
        x = np.asarray(x, dtype=float)
        if x.ndim >= 2 and x.shape[-1] == self.dim and self.dim > 1:
            return self.profile(np.linalg.norm(x, axis=-1))
        val = self.profile(np.abs(x))
        if self.parity == -1:
            val = np.sign(x) * val
        return val if val.ndim else float(val)

    def __repr__(self):
        return f"<{type(self).__name__} dim={self.dim} R={self.support_radius:g}>"


class PiecewisePoly(RadialFunction):
    """Profile with exact polynomial pieces on ``[0, R]``, zero beyond."""

    kind = "piecewise"

    def __init__(self, poly, dim=1, label=None, hat=None, amp=1):
        if not isinstance(poly, PPoly):
            raise TypeError("PiecewisePoly wraps a ppoly.PPoly")
        pp.check_continuity(poly)
        super().__init__(dim, float(poly.support))
        self.poly = poly
        # Irrational constant factor kept apart so the pieces stay exact.
        self.amp = amp
        self.parity = poly.parity
        self.label = label
        self._hat = hat

    @property
    def breakpoints(self):
        return tuple(float(b) for b in self.poly.breaks[1:-1])

    def profile(self, r):
        out = self.poly(_as_array(r))
        return out if self.amp == 1 else self.amp * out

    def value_exact(self, r):
        val = self.poly.value_exact(exact(r) if not isinstance(r, Fraction) else r)
        return val if self.amp == 1 else self.amp * float(val)

    def folded(self):
        """The pieces with ``amp`` multiplied in."""
        if self.amp == 1:
            return self.poly
        return PPoly(self.poly.breaks, tuple(pp.pscale(p, self.amp) for p in self.poly.polys),
                     self.poly.parity)

    def smoothness(self):
        return pp.smoothness(self.poly)[0]

    def closed_transform(self, xi):
        return None if self._hat is None else self._hat(_as_array(xi))


class GaussianTimesPoly(RadialFunction):
    """``P(r) exp(-rate r^2)`` with ``P`` given by coefficients low to high."""

    kind = "gaussian_poly"

    def __init__(self, coeffs, rate, dim=1, parity=1):
        if not rate > 0:
            raise DomainError("Gaussian rate must be positive")
        super().__init__(dim, INF)
        self.coeffs = pp.trim(tuple(coeffs))
        self.rate = rate
        self.parity = parity

    @property
    def integrable(self):
        return True

    def decay(self, r):
        r = _as_array(r)
        mag = sum(abs(float(c)) * r**k for k, c in enumerate(self.coeffs))
        return mag * np.exp(-float(self.rate) * r * r)

    def profile(self, r):
        r = _as_array(r)
        poly = np.polynomial.polynomial.polyval(r, [float(c) for c in self.coeffs])
        return poly * np.exp(-float(self.rate) * r * r)

    def closed_transform(self, xi):
        from .transform import gaussian_poly_transform

        return gaussian_poly_transform(self, _as_array(xi))


class HermiteQuartic(GaussianTimesPoly):
    """``f_{a,b} = (H0 + 2a H2 + b H4) exp(-pi r^2)`` with ``H2 = X - 1``,
    ``H4 = X^2 - 6X + 3`` and ``X = 4 pi r^2``."""

    kind = "hermite4"

    def __init__(self, a, b, dim=1):
        self.a, self.b = a, b
        pi = math.pi
        coeffs = (1 - 2 * a + 3 * b, 0.0, 8 * pi * a - 24 * pi * b, 0.0, 16 * pi**2 * b)
        super().__init__(coeffs, pi, dim)

    def __repr__(self):
        return f"<HermiteQuartic a={self.a!r} b={self.b!r}>"


class Analytic(RadialFunction):
    """Black-box profile with metadata.

    Parameters
    ----------
    evaluator : callable
        Vectorized ``f0(r)`` for ``r >= 0``.
    support_radius : float
        ``inf`` for non-compact profiles.
    decay : callable, optional
        Envelope bounding ``|f0|`` on ``[r, inf)``.
    derivs : dict, optional
        ``{k: callable}`` exact profile derivatives.
    cm_derivs : callable, optional
        ``(k, t) -> g^(k)(t)`` for ``g(t) = f0(sqrt(t))``.
    hat : callable, optional
        Closed-form transform in dimension ``dim``.
    """

    kind = "analytic"

    def __init__(self, evaluator, dim=1, support_radius=INF, name="analytic", params=None,
                 decay=None, derivs=None, cm_derivs=None, hat=None, integrable=None,
                 breakpoints=(), edge_exponent=None, parity=1):
        super().__init__(dim, support_radius)
        self.evaluator = evaluator
        self.name = name
        self.params = dict(params or {})
        self._decay = decay
        self.derivs = dict(derivs or {})
        self.cm_derivs = cm_derivs
        self._hat = hat
        self._integrable = integrable
        self._breaks = tuple(breakpoints)
        self._edge = edge_exponent
        self.parity = parity

    @property
    def breakpoints(self):
        return self._breaks

    @property
    def edge_exponent(self):
        return self._edge

    @property
    def integrable(self):
        if self._integrable is not None:
            return self._integrable
        return math.isfinite(self.support_radius)

    def decay(self, r):
        return None if self._decay is None else self._decay(_as_array(r))

    def profile(self, r):
        r = _as_array(r)
        out = np.asarray(self.evaluator(r), dtype=float)
        if math.isfinite(self.support_radius):
            out = np.where(r < self.support_radius, out, 0.0)
        return out

    def closed_transform(self, xi):
        return None if self._hat is None else self._hat(_as_array(xi))

    def __repr__(self):
        return f"<Analytic {self.name} {self.params} dim={self.dim}>"


class Scaled(RadialFunction):
    """``amp * child(lam * x)``."""

    kind = "scaled"

    def __init__(self, child, lam, amp=1.0):
        super().__init__(child.dim, child.support_radius / lam)
        self.child, self.lam, self.amp = child, lam, amp
        self.parity = child.parity

    @property
    def breakpoints(self):
        return tuple(b / self.lam for b in self.child.breakpoints)

    @property
    def edge_exponent(self):
        return self.child.edge_exponent

    @property
    def integrable(self):
        return self.child.integrable

    def decay(self, r):
        env = self.child.decay(self.lam * _as_array(r))
        return None if env is None else abs(self.amp) * env

    def profile(self, r):
        return self.amp * self.child.profile(self.lam * _as_array(r))

    def closed_transform(self, xi):
        inner = self.child.closed_transform(_as_array(xi) / self.lam)
        if inner is None:
            return None
        return self.amp * self.lam ** (-self.dim) * inner


class Product(RadialFunction):
    kind = "product"

    def __init__(self, left, right):
        super().__init__(left.dim, min(left.support_radius, right.support_radius))
        self.left, self.right = left, right
        self.parity = left.parity * right.parity

    @property
    def breakpoints(self):
        pts = set(self.left.breakpoints) | set(self.right.breakpoints)
        return tuple(sorted(p for p in pts if p < self.support_radius))

    @property
    def integrable(self):
        return self.left.integrable or self.right.integrable or math.isfinite(self.support_radius)

    def decay(self, r):
        el, er = self.left.decay(r), self.right.decay(r)
        if el is None or er is None:
            return None
        return el * er

    def profile(self, r):
        r = _as_array(r)
        return self.left.profile(r) * self.right.profile(r)


class Convolution(RadialFunction):
    """Convolution evaluated by quadrature; its transform is the product."""

    kind = "convolution"

    def __init__(self, left, right):
        super().__init__(left.dim, left.support_radius + right.support_radius)
        self.left, self.right = left, right

    @property
    def integrable(self):
        return self.left.integrable and self.right.integrable

    def closed_transform(self, xi):
        from .transform import fourier_radial

        xi = _as_array(xi)
        return fourier_radial(self.left, xi) * fourier_radial(self.right, xi)

    def profile(self, r):
        r = _as_array(r)
        flat = np.array([self._point(float(x)) for x in r.ravel()])
        return flat.reshape(r.shape)

    def _point(self, x):
        if self.dim == 1:
            return _conv_line(self.left, self.right, x)
        return _conv_polar(self.left, self.right, x, self.dim)


def _singular_weight(fn):
    """``(alpha, R)`` when ``fn`` is ``(1-r^2)^alpha`` on the ball of radius ``R``."""
    if isinstance(fn, Analytic) and fn.name == "m_alpha":
        return fn.params["alpha"], 1.0
    return None


def _conv_line(f, g, x):
    """``int f(y) g(x - y) dy`` on the real line.

    Panels are cut at every breakpoint of either factor. A factor
    ``(1 - s^2)^alpha`` with non-integer ``alpha`` contributes an algebraic
    endpoint singularity; on such panels the vanishing factor is divided out
    and QUADPACK's algebraic weight ``(y-a)^wa (b-y)^wb`` takes its place.
    """
    rf, rg = f.support_radius, g.support_radius
    lo, hi = max(-rf, x - rg), min(rf, x + rg)
    if not lo < hi:
        return 0.0
    pts = {0.0, x}
    for b in f.breakpoints:
        pts.update((b, -b))
    for b in g.breakpoints:
        pts.update((x - b, x + b))
    cuts = sorted(p for p in pts if lo < p < hi)
    edges = [lo] + cuts + [hi]
    sf, sg = _singular_weight(f), _singular_weight(g)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        if not (math.isfinite(a) and math.isfinite(b)) or (sf is None and sg is None):
            val, _ = integrate.quad(lambda y: float(f.profile(abs(y)) * g.profile(abs(x - y))),
                                    a, b, limit=400, epsabs=1e-13, epsrel=1e-12)
            total += val
            continue
        # Flags: which factor vanishes at which panel end.
        f_minus = sf is not None and b == rf  # (1 - y) at y = b
        f_plus = sf is not None and a == -rf  # (1 + y) at y = a
        g_minus = sg is not None and a == x - rg  # (1 - (x - y)) at y = a
        g_plus = sg is not None and b == x + rg  # (1 + (x - y)) at y = b
        wa = (sf[0] if f_plus else 0.0) + (sg[0] if g_minus else 0.0)
        wb = (sf[0] if f_minus else 0.0) + (sg[0] if g_plus else 0.0)

        def smooth(y, f_minus=f_minus, f_plus=f_plus, g_minus=g_minus, g_plus=g_plus):
            return (_reduced(f, sf, y, f_minus, f_plus)
                    * _reduced(g, sg, x - y, g_minus, g_plus))

        if wa == 0.0 and wb == 0.0:
            val, _ = integrate.quad(smooth, a, b, limit=400, epsabs=1e-13, epsrel=1e-12)
        else:
            val, _ = integrate.quad(smooth, a, b, weight="alg", wvar=(wa, wb), limit=400,
                                    epsabs=1e-13, epsrel=1e-12)
        total += val
    return total


def _reduced(fn, sing, s, drop_minus, drop_plus):
    """Profile at ``|s|`` with the flagged factors of ``(1-s)^a (1+s)^a`` removed."""
    if sing is None:
        return float(fn.profile(abs(s)))
    alpha = sing[0]
    val = 1.0
    if not drop_minus:
        val *= max(1.0 - s, 0.0) ** alpha if 1.0 - s > 0 else 0.0
    if not drop_plus:
        val *= max(1.0 + s, 0.0) ** alpha if 1.0 + s > 0 else 0.0
    return val


def _conv_polar(f, g, x, d):
    """``(f*g)(x)`` in ``R^d`` via polar coordinates centred at the origin."""
    rf = f.support_radius
    sphere = 2.0 * math.pi ** ((d - 1) / 2.0) / gamma((d - 1) / 2.0)

    def inner(rho):
        def ang(theta):
            dist = math.sqrt(max(x * x + rho * rho - 2.0 * x * rho * math.cos(theta), 0.0))
            return float(g.profile(dist)) * math.sin(theta) ** (d - 2)

        pts = []
        for b in g.breakpoints + (g.support_radius,):
            if x > 0 and rho > 0 and math.isfinite(b):
                c = (x * x + rho * rho - b * b) / (2.0 * x * rho)
                if -1.0 < c < 1.0:
                    pts.append(math.acos(c))
        val, _ = integrate.quad(ang, 0.0, math.pi, points=sorted(pts) or None, limit=200,
                                epsabs=1e-13, epsrel=1e-11)
        return float(f.profile(rho)) * rho ** (d - 1) * val

    top = rf if math.isfinite(rf) else INF
    pts = [p for p in f.breakpoints if p < top]
    if math.isfinite(top):
        edges = [0.0] + sorted(pts) + [top]
        total = sum(integrate.quad(inner, a, b, limit=200, epsabs=1e-12, epsrel=1e-10)[0]
                    for a, b in zip(edges[:-1], edges[1:]))
    else:
        total = integrate.quad(inner, 0.0, INF, limit=200, epsabs=1e-12, epsrel=1e-10)[0]
    return sphere * total


# -- scale measures -----------------------------------------------------------

@dataclass(frozen=True)
class ScaleMeasure:
    """Positive bounded measure on ``(0, inf)``: atoms plus a sampled density.

    The density is integrated with trapezoidal weights on its own grid.
    """

    atoms: tuple = ()
    grid: np.ndarray = field(default=None)
    values: np.ndarray = field(default=None)

    def __post_init__(self):
        atoms = tuple((float(t), float(m)) for t, m in self.atoms)
        for t, m in atoms:
            if not (t > 0 and math.isfinite(t)):
                raise DomainError(f"atom locations must be positive and finite, got {t!r}")
            if not (m > 0 and math.isfinite(m)):
                raise DomainError(f"atom masses must be positive and finite, got {m!r}")
        object.__setattr__(self, "atoms", atoms)
        if (self.grid is None) != (self.values is None):
            raise DomainError("density needs both grid and values")
        if self.grid is not None:
            grid = np.asarray(self.grid, dtype=float)
            values = np.asarray(self.values, dtype=float)
            if grid.ndim != 1 or grid.shape != values.shape or grid.size < 2:
                raise DomainError("density grid and values must be matching 1-D arrays")
            if np.any(grid <= 0) or np.any(np.diff(grid) <= 0) or not np.all(np.isfinite(grid)):
                raise DomainError("density grid must be positive, finite and increasing")
            if np.any(values < 0) or not np.all(np.isfinite(values)):
                raise DomainError("density values must be finite and nonnegative")
            object.__setattr__(self, "grid", grid)
            object.__setattr__(self, "values", values)
        mass = self.total_mass
        if not (mass > 0 and math.isfinite(mass)):
            raise DomainError("measure must have finite positive total mass")

    @property
    def has_density(self):
        return self.grid is not None

    @property
    def weights(self):
        """Trapezoidal quadrature weights times density values on the grid."""
        if not self.has_density:
            return np.zeros(0)
        g = self.grid
        w = np.zeros_like(g)
        h = np.diff(g)
        w[:-1] += h / 2.0
        w[1:] += h / 2.0
        return w * self.values

    @property
    def total_mass(self):
        return sum(m for _, m in self.atoms) + float(self.weights.sum())

    def points(self):
        """All nodes ``t`` and their weights (atoms first)."""
        ts = np.array([t for t, _ in self.atoms] + (list(self.grid) if self.has_density else []))
        ws = np.array([m for _, m in self.atoms] + list(self.weights))
        return ts, ws

    def reweighted(self, fn):
        """Measure with mass ``fn(t) dnu(t)``."""
        atoms = tuple((t, m * fn(t)) for t, m in self.atoms)
        if self.has_density:
            return ScaleMeasure(atoms, self.grid, self.values * fn(self.grid))
        return ScaleMeasure(atoms)

    @classmethod
    def dirac(cls, t, mass=1.0):
        return cls(((t, mass),))


class Mixture(RadialFunction):
    """``F(x) = int omega(x / t) dnu(t)``."""

    kind = "mixture"

    def __init__(self, base, measure):
        ts, _ = measure.points()
        super().__init__(base.dim, base.support_radius * float(ts.max()))
        self.base, self.measure = base, measure
        self.parity = base.parity

    @property
    def integrable(self):
        return self.base.integrable

    @property
    def breakpoints(self):
        if self.measure.has_density:
            return ()
        pts = {b * t for t, _ in self.measure.atoms for b in self.base.breakpoints}
        pts |= {self.base.support_radius * t for t, _ in self.measure.atoms}
        return tuple(sorted(p for p in pts if p < self.support_radius))

    def decay(self, r):
        ts, ws = self.measure.points()
        r = _as_array(r)
        envs = [self.base.decay(r / t) for t in ts]
        if any(e is None for e in envs):
            return None
        return sum(w * e for w, e in zip(ws, envs))

    def profile(self, r):
        r = _as_array(r)
        ts, ws = self.measure.points()
        flat = r.ravel()
        vals = self.base.profile(flat[:, None] / ts[None, :])
        return (vals @ ws).reshape(r.shape)

    def closed_transform(self, xi):
        from .transform import fourier_radial

        xi = _as_array(xi)
        ts, ws = self.measure.points()
        d = self.dim
        out = np.zeros(xi.shape)
        for t, w in zip(ts, ws):
            out = out + w * t**d * fourier_radial(self.base, t * xi)
        return out


# -- catalogue ----------------------------------------------------------------

def _poly_pp(coeffs, radius=1):
    return PPoly((Fraction(0), exact(radius)), (pp.trim(tuple(exact(c) for c in coeffs)),))


def make_indicator_conv(r, dim=1):
    """Triangle ``chi_[-r/2, r/2] * chi_[-r/2, r/2]``: profile ``r - |x|`` on ``[0, r]``."""
    if not r > 0:
        raise DomainError("triangle width must be positive")
    if dim != 1:
        raise DomainError("the triangle is a one-dimensional function")
    half = exact(r) / 2
    ind = PPoly((Fraction(0), half), ((Fraction(1),),))
    return PiecewisePoly(pp.convolve(ind, ind), 1, label=f"triangle(r={r})")


# Largest integer exponent kept as exact pieces; beyond it the expanded
# binomial coefficients cost more than 1e-14 of float accuracy.
EXACT_M_ALPHA_MAX = 32


def _m_alpha_hat(alpha, d):
    """Closed-form transform of ``m_alpha``, or ``None`` for orders whose kernel underflows."""
    nu = d / 2.0 + alpha
    if nu > 150:
        return None
    const = math.exp(nu * math.log(2.0) + 0.5 * d * math.log(math.pi) + math.lgamma(alpha + 1.0))

    def hat(xi):
        return const * bessel_kernel(nu, 2.0 * math.pi * np.asarray(xi, dtype=float)).real

    return hat


def _is_int(x):
    return float(x).is_integer()


def _exact_m_alpha(alpha):
    return _is_int(alpha) and alpha <= EXACT_M_ALPHA_MAX


def make_m_alpha(alpha, d=1):
    """``m_alpha(x) = (1 - |x|^2)_+^alpha`` on ``R^d``.

    Integer ``alpha`` up to ``EXACT_M_ALPHA_MAX`` gives an exact
    :class:`PiecewisePoly`; larger exponents use the direct evaluator. For
    ``-1/2 < alpha < 0`` the profile blows up as ``r -> 1``; that point is
    not evaluable, the singularity is recorded in ``edge_exponent`` and the
    profile reports 0 from ``r = 1`` on.
    """
    if not alpha > -0.5:
        raise DomainError("m_alpha requires alpha > -1/2")
    hat = _m_alpha_hat(alpha, d)
    if _exact_m_alpha(alpha):
        k = int(alpha)
        coeffs = [Fraction(0)] * (2 * k + 1)
        for j in range(k + 1):
            coeffs[2 * j] = Fraction(math.comb(k, j) * (-1) ** j)
        return PiecewisePoly(_poly_pp(coeffs), d, label=f"m_alpha(alpha={alpha})", hat=hat)

    def ev(r):
        with np.errstate(divide="ignore", invalid="ignore"):
            base = np.clip(1.0 - r * r, 0.0, None)
            return np.where(r < 1.0, base**alpha, 0.0)

    return Analytic(ev, dim=d, support_radius=1.0, name="m_alpha", params={"alpha": alpha},
                    hat=hat, edge_exponent=alpha)


def _radon_profile(alpha, d):
    """Exact Radon profile of ``m_alpha`` in odd dimension ``d`` (integer alpha)."""
    k = int(alpha) + (d - 1) // 2
    coeffs = [Fraction(0)] * (2 * k + 1)
    for j in range(k + 1):
        coeffs[2 * j] = Fraction(math.comb(k, j) * (-1) ** j)
    return _poly_pp(coeffs)


def _divide_by_r(poly):
    if poly[0] != 0:
        return None
    return pp.trim(poly[1:]) if len(poly) > 1 else (Fraction(0),)


def _inverse_radon(radon, d):
    """Apply ``(-1/(2 pi r) d/dr)^((d-1)/2)``; the ``pi`` factors are returned apart."""
    cur = radon
    for _ in range((d - 1) // 2):
        polys = []
        for p in cur.polys:
            q = _divide_by_r(pp.pscale(pp.pderiv(p), -1))
            if q is None:
                return None
            polys.append(q)
        cur = PPoly(cur.breaks, tuple(polys), 1)
    return cur


def make_m_alpha_sq(alpha, d=1):
    """Self-convolution ``m_alpha * m_alpha`` in dimension ``d``.

    Integer ``alpha`` in odd ``d`` is exact: the Radon profiles of ``m_alpha``
    are polynomials, their one-dimensional convolution is computed exactly and
    the inversion ``(-1/(2 pi r) d/dr)^((d-1)/2)`` stays polynomial. Other
    cases return a :class:`Convolution` node evaluated by quadrature.
    """
    m = make_m_alpha(alpha, d)
    hat_m = _m_alpha_hat(alpha, d)

    def hat(xi):
        return hat_m(xi) ** 2

    if hat_m is None:
        hat = None
    if _exact_m_alpha(alpha) and d % 2 == 1:
        if d == 1:
            poly = pp.convolve(m.poly, m.poly)
        else:
            h = (d - 1) // 2
            radon = _radon_profile(alpha, d)
            conv = _inverse_radon(pp.convolve(radon, radon), d)
            if conv is None:
                return Convolution(m, m)
            # Radon constant pi^h Gamma(a+1)/Gamma(a+h+1), squared, and the
            # inversion's (2 pi)^-h.
            ai = int(alpha)
            const = Fraction(math.factorial(ai), math.factorial(ai + h)) ** 2
            const /= 2**h
            poly = PPoly(conv.breaks, tuple(pp.pscale(p, const) for p in conv.polys))
            return PiecewisePoly(poly, d, label=f"m_alpha_sq(alpha={alpha})", hat=hat,
                                 amp=math.pi**h)
        return PiecewisePoly(poly, d, label=f"m_alpha_sq(alpha={alpha})", hat=hat)
    node = Convolution(m, m)
    node._exact_hat = hat
    return node


def make_wu():
    """``w = (1 - x^2)_+ * (1 - x^2)_+ = (2 - |x|)^3 (x^2 + 6|x| + 4) / 30`` on ``[0, 2]``."""
    m1 = _poly_pp((1, 0, -1))
    return PiecewisePoly(pp.convolve(m1, m1), 1, label="wu")


def make_phi():
    """``phi = (1 - x^2)_+^2 * (1 - x^2)_+^2``, a ``C^4`` piecewise polynomial on ``[0, 2]``."""
    m2 = _poly_pp((1, 0, -2, 0, 1))
    return PiecewisePoly(pp.convolve(m2, m2), 1, label="phi")


def make_hermite_quartic(a, b):
    return HermiteQuartic(a, b)


def gaussian(rate=math.pi, dim=1):
    """``exp(-rate |x|^2)``."""
    return GaussianTimesPoly((Fraction(1),), rate, dim)


def ones(dim=1):
    """The constant function 1 (neutral element for :func:`product`)."""
    return Analytic(lambda r: np.ones_like(r), dim=dim, name="ones", integrable=False)


def wendland33():
    """``(1 - |t|)_+^3 (1 + 3|t|)`` as an exact piecewise polynomial on ``[0, 1]``."""
    coeffs = pp.pmul(pp.pmul(pp.pmul((1, -1), (1, -1)), (1, -1)), (1, 3))
    return PiecewisePoly(_poly_pp(coeffs), 1, label="wendland33")


def exp_pow(beta, dim=1):
    """Stable profile ``exp(-r^beta)``, ``0 < beta <= 2``."""
    if not 0 < beta <= 2:
        raise DomainError("exp_pow requires 0 < beta <= 2")

    def f(r):
        return np.exp(-(r**beta))

    def d1(r):
        with np.errstate(divide="ignore", invalid="ignore"):
            return -beta * r ** (beta - 1) * np.exp(-(r**beta))

    def d2(r):
        with np.errstate(divide="ignore", invalid="ignore"):
            return (beta**2 * r ** (2 * beta - 2) - beta * (beta - 1) * r ** (beta - 2)) * np.exp(-(r**beta))

    s = beta / 2.0

    def cm(k, t):
        # g(t) = exp(-t^s); g^(k) = exp(-t^s) * sum_j c[j] t^(j s - k).
        t = _as_array(t)
        c = {0: 1.0}
        for m in range(k):
            nxt = {}
            for j, cj in c.items():
                nxt[j] = nxt.get(j, 0.0) + (j * s - m) * cj
                nxt[j + 1] = nxt.get(j + 1, 0.0) - s * cj
            c = nxt
        return np.exp(-(t**s)) * sum(cj * t ** (j * s - k) for j, cj in c.items())

    hat = None
    if beta == 2 and dim >= 1:
        def hat(xi, d=dim):
            return math.pi ** (d / 2.0) * np.exp(-math.pi**2 * np.asarray(xi) ** 2)

    return Analytic(f, dim=dim, name="exp_pow", params={"beta": beta},
                    decay=lambda r: np.exp(-(r**beta)), derivs={1: d1, 2: d2},
                    cm_derivs=cm, hat=hat, integrable=True)


def linnik(beta, dim=1):
    """``1 / (1 + r^beta)``, ``0 < beta <= 2``; integrable in ``R^d`` only when ``beta > d``."""
    if not 0 < beta <= 2:
        raise DomainError("linnik requires 0 < beta <= 2")

    def f(r):
        return 1.0 / (1.0 + r**beta)

    def d1(r):
        with np.errstate(divide="ignore", invalid="ignore"):
            return -beta * r ** (beta - 1) / (1.0 + r**beta) ** 2

    def d2(r):
        with np.errstate(divide="ignore", invalid="ignore"):
            u = 1.0 + r**beta
            return (-beta * (beta - 1) * r ** (beta - 2) / u**2
                    + 2 * beta**2 * r ** (2 * beta - 2) / u**3)

    return Analytic(f, dim=dim, name="linnik", params={"beta": beta},
                    decay=lambda r: 1.0 / (1.0 + r**beta), derivs={1: d1, 2: d2},
                    integrable=beta > dim)


def inverse_multiquadric(alpha=1.0, beta=0.5, dim=1):
    """``(r^2 + alpha^2)^(-beta)``, i.e. ``g(t) = (t + alpha^2)^(-beta)`` with ``t = r^2``."""
    if not (alpha != 0 and beta > 0):
        raise DomainError("inverse multiquadric needs alpha != 0 and beta > 0")
    a2 = float(alpha) ** 2

    def f(r):
        return (r * r + a2) ** (-beta)

    def d1(r):
        return -2 * beta * r * (r * r + a2) ** (-beta - 1)

    def d2(r):
        u = r * r + a2
        return -2 * beta * u ** (-beta - 1) + 4 * beta * (beta + 1) * r * r * u ** (-beta - 2)

    def cm(k, t):
        poch = 1.0
        for j in range(k):
            poch *= beta + j
        return (-1) ** k * poch * (_as_array(t) + a2) ** (-beta - k)

    return Analytic(f, dim=dim, name="inverse_multiquadric",
                    params={"alpha": alpha, "beta": beta},
                    decay=lambda r: (r * r + a2) ** (-beta), derivs={1: d1, 2: d2},
                    cm_derivs=cm, integrable=2 * beta > dim)


def make_f_zeta(r, theta):
    """``f_zeta = phi + (2 cos 2theta / r^2) phi'' + phi'''' / r^4``.

    Its transform is ``phi_hat(xi) * (1 - (2 pi xi / r)^2 e^{2 i theta}) *
    (1 - (2 pi xi / r)^2 e^{-2 i theta})``, which vanishes at
    ``xi = +-(r / 2 pi) e^{+-i theta}``.
    """
    if not r > 0:
        raise DomainError("f_zeta needs r > 0")
    if not 0 < theta < math.pi / 2:
        raise DomainError("f_zeta needs 0 < theta < pi/2")
    c2 = math.cos(2 * theta)
    if abs(c2) < 1e-15:
        c2 = 0
    phi = make_phi()
    rr = exact(r)
    a = 2 * c2 / rr**2 if c2 else Fraction(0)
    b = 1 / rr**4
    parts = [phi.poly, pp.derivative(phi.poly, 2), pp.derivative(phi.poly, 4)]
    poly = pp.add(parts, [1, a, b])
    out = PiecewisePoly(poly, 1, label=f"f_zeta(r={r}, theta={theta})")
    out.zeta = (float(r), float(theta))
    return out


# -- operations ----------------------------------------------------------------

def derivative(f, k):
    """k-th derivative of the profile.

    Exact for :class:`PiecewisePoly` (order up to smoothness + 1; the last
    order may jump at breakpoints) and :class:`GaussianTimesPoly`; also
    available for scalings, mixtures and analytic profiles that carry exact
    derivatives.
    """
    if int(k) != k or k < 0:
        raise DomainError("derivative order must be a nonnegative integer")
    k = int(k)
    if k == 0:
        return f
    if isinstance(f, PiecewisePoly):
        return PiecewisePoly(pp.derivative(f.poly, k), f.dim, label=f"d{k}({f.label})",
                             amp=f.amp)
    if isinstance(f, GaussianTimesPoly):
        coeffs, a = f.coeffs, f.rate
        for _ in range(k):
            coeffs = pp.padd(pp.pderiv(coeffs), pp.pscale((0,) + tuple(coeffs), -2 * a))
        return GaussianTimesPoly(coeffs, a, f.dim, parity=f.parity * (-1) ** k)
    if isinstance(f, Scaled):
        return Scaled(derivative(f.child, k), f.lam, f.amp * f.lam**k)
    if isinstance(f, Mixture):
        return Mixture(derivative(f.base, k), f.measure.reweighted(lambda t: t ** (-float(k))))
    if isinstance(f, Analytic) and k in f.derivs:
        return Analytic(f.derivs[k], dim=f.dim, support_radius=f.support_radius,
                        name=f"d{k}({f.name})", params=f.params, parity=(-1) ** k,
                        integrable=False)
    raise UnsupportedOperation(f"derivative of order {k} is not available for {f!r}")


def scale(f, lam):
    """``f_lam(x) = f(lam x)``; exact for piecewise and Gaussian representations."""
    if not lam > 0:
        raise DomainError("scale factor must be positive")
    if lam == 1:
        return f
    if isinstance(f, PiecewisePoly):
        hat = None
        if f._hat is not None:
            lf, d, inner = float(lam), f.dim, f._hat

            def hat(xi):
                return lf ** (-d) * inner(np.asarray(xi) / lf)

        return PiecewisePoly(pp.rescale(f.poly, lam), f.dim, label=f.label, hat=hat, amp=f.amp)
    if isinstance(f, HermiteQuartic) or isinstance(f, GaussianTimesPoly):
        coeffs = tuple(c * lam**i for i, c in enumerate(f.coeffs))
        return GaussianTimesPoly(coeffs, f.rate * lam**2, f.dim, f.parity)
    if isinstance(f, Scaled):
        return Scaled(f.child, f.lam * lam, f.amp)
    return Scaled(f, lam)


def mixture(omega, nu):
    """``F(x) = int omega(x / t) dnu(t)``.

    With atoms only and a piecewise base the result is again an exact
    piecewise polynomial.
    """
    if not isinstance(nu, ScaleMeasure):
        raise TypeError("nu must be a ScaleMeasure")
    if isinstance(omega, PiecewisePoly) and not nu.has_density:
        parts = [pp.rescale(omega.poly, 1 / exact(t)) for t, _ in nu.atoms]
        poly = pp.add(parts, [exact(m) for _, m in nu.atoms])
        out = PiecewisePoly(poly, omega.dim, label="mixture", amp=omega.amp)
        out.source = (omega, nu)
        return out
    return Mixture(omega, nu)


def _same_dim(f, g):
    if f.dim != g.dim:
        raise DomainError(f"dimension mismatch: {f.dim} vs {g.dim}")


def product(f, g):
    """Pointwise product; exact for piecewise and Gaussian pairs."""
    _same_dim(f, g)
    for a, b in ((f, g), (g, f)):
        if isinstance(b, Analytic) and b.name == "ones":
            return a
    if isinstance(f, PiecewisePoly) and isinstance(g, PiecewisePoly):
        return PiecewisePoly(pp.multiply(f.poly, g.poly), f.dim, label="product",
                             amp=f.amp * g.amp)
    if isinstance(f, GaussianTimesPoly) and isinstance(g, GaussianTimesPoly):
        return GaussianTimesPoly(pp.pmul(f.coeffs, g.coeffs), f.rate + g.rate, f.dim,
                                 f.parity * g.parity)
    return Product(f, g)


def convolve(f, g):
    """Convolution; exact for piecewise pairs in dimension one, quadrature otherwise."""
    _same_dim(f, g)
    if not (f.integrable or g.integrable):
        raise UnsupportedOperation("convolution needs at least one integrable factor")
    if isinstance(f, PiecewisePoly) and isinstance(g, PiecewisePoly) and f.dim == 1:
        return PiecewisePoly(pp.convolve(f.poly, g.poly), 1, label="convolution",
                             amp=f.amp * g.amp)
    return Convolution(f, g)
