"""Radial Fourier transform and its entire extension.

Convention: ``f_hat(xi) = int f(x) exp(2 i pi <x, xi>) dx``. For a radial
``f`` on ``R^d`` with ``lam = d/2 - 1``,

    F(t) = (2 pi)^(lam + 1) int_0^inf f0(r) K_lam(2 pi r t) r^(2 lam + 1) dr

where ``K_lam(z) = J_lam(z) / z^lam`` (:func:`ppdcone.specfun.bessel_kernel`).

Evaluation paths, in order of preference for ``method="auto"``:

* closed forms carried by the function (Gaussian times polynomial, ``m_alpha``
  and its self-convolution, scalings, mixtures, convolutions);
* piecewise polynomials in ``d = 1`` and ``d = 3``, where the kernel is
  trigonometric: exact integration of exponential polynomials, switching to
  the moment series when ``|2 pi z| R`` is small;
* compact support: Gauss-Legendre panels aligned to breakpoints and no longer
  than half a kernel period, with a Gauss-Jacobi panel at an algebraic edge;
* non-compact profiles in ``d = 1, 3``: QUADPACK's Fourier-integral routine;
  other ``d``: truncation at a radius where the decay envelope bounds the tail.
"""

import math
import warnings
from functools import lru_cache

import numpy as np
from scipy import integrate
from scipy.special import roots_jacobi, roots_legendre

from . import funcs as F
from . import ppoly as pp
from .errors import RangeError, UnsupportedOperation
from .specfun import COMPLEX_ENVELOPE, bessel_kernel, gamma

GL_NODES = 24
SERIES_SWITCH = 4.0
TAIL_TOL = 1e-14


def _lam(d):
    return d / 2.0 - 1.0


def _kernel0(lam):
    return 1.0 / (2.0**lam * gamma(lam + 1.0))


@lru_cache(maxsize=32)
def _gl(n):
    return roots_legendre(n)


@lru_cache(maxsize=64)
def _gj(n, alpha):
    return roots_jacobi(n, alpha, 0.0)


# -- Gaussian times polynomial ------------------------------------------------

def gaussian_poly_hat(f):
    """Transform of ``P(r) exp(-a r^2)`` as a :class:`GaussianTimesPoly`.

    Uses ``r^(2j) e^{-a r^2} -> (-d/da)^j [(pi/a)^(d/2) e^{-pi^2 t^2 / a}]``;
    with ``u = 1/a`` and ``s = pi^2 t^2`` every term is
    ``e^{-s u} * sum_m q_m(s) u^(d/2 + m)`` and ``-d/da = u^2 d/du``.
    """
    if f.parity != 1 or any(c != 0 for c in f.coeffs[1::2]):
        raise UnsupportedOperation("closed form needs an even polynomial factor")
    a, d = float(f.rate), f.dim
    u = 1.0 / a
    P = np.polynomial.polynomial
    total = np.zeros(1)
    # q: list over m of polynomials in s; current term is (-d/da)^j G.
    q = [np.array([math.pi ** (d / 2.0)])]
    for j, c in enumerate(f.coeffs[0::2]):
        if j > 0:
            nxt = [np.zeros(1) for _ in range(len(q) + 2)]
            for m, qm in enumerate(q):
                # u^2 d/du [e^{-su} u^(d/2+m)] = e^{-su}[(d/2+m) u^(d/2+m+1) - s u^(d/2+m+2)]
                nxt[m + 1] = P.polyadd(nxt[m + 1], (d / 2.0 + m) * qm)
                nxt[m + 2] = P.polysub(nxt[m + 2], P.polymulx(qm))
            q = nxt
        if c == 0:
            continue
        term = np.zeros(1)
        for m, qm in enumerate(q):
            term = P.polyadd(term, qm * u ** (d / 2.0 + m))
        total = P.polyadd(total, float(c) * term)
    # Polynomial in s = pi^2 t^2 -> polynomial in t.
    coeffs = np.zeros(2 * len(total) - 1)
    coeffs[0::2] = total * math.pi ** (2 * np.arange(len(total)))
    return F.GaussianTimesPoly(tuple(coeffs), math.pi**2 / a, d)


def gaussian_poly_transform(f, xi):
    return gaussian_poly_hat(f).profile(np.abs(np.asarray(xi, dtype=float)))


def hermite_transform(h):
    """Transform of ``f_{a,b}``: the Hermite functions are Fourier eigenvectors
    (``h_k -> (-i)^k h_k``), so ``(a, b) -> (-a, b)``."""
    return F.HermiteQuartic(-h.a, h.b, h.dim)


# -- exact path for piecewise polynomials in d = 1, 3 -------------------------

class _PPTransform:
    """Entire transform of a piecewise polynomial profile in ``d = 1`` or ``3``."""

    def __init__(self, poly, d, amp=1.0):
        self.d = d
        self.amp = amp
        self.R = float(poly.support)
        self.exact_breaks = poly.breaks
        self.breaks = np.array([float(b) for b in poly.breaks])
        # d = 3 integrates r f0(r) against sin.
        polys = [tuple(p) for p in poly.polys]
        if d == 3:
            polys = [pp.pmul((0, 1), p) for p in polys]
        self.polys = polys
        deg = max(len(p) for p in polys) - 1
        # Endpoint derivative values, computed exactly for rational pieces so
        # that high-order contacts at the support end cancel without rounding.
        self.ends = []
        for i, p in enumerate(polys):
            vals = {}
            for end in (poly.breaks[i], poly.breaks[i + 1]):
                cur, row = p, []
                for _ in range(deg + 1):
                    row.append(float(pp.peval(cur, end)))
                    cur = pp.pderiv(cur)
                vals[float(end)] = row
            self.ends.append(vals)
        self.n_series = 60
        mom = pp.moments(pp.PPoly(poly.breaks, tuple(polys)), self.n_series + 2)
        self.moments = mom
        fact = np.array([math.factorial(k) for k in range(self.n_series + 2)], dtype=float)
        self.fact = fact

    def _ibp(self, omega):
        """``int p e^{i omega r} dr`` over all pieces for ``|omega| R`` large."""
        out = np.zeros(omega.shape, dtype=np.complex128)
        iw = 1j * omega
        for i, vals in enumerate(self.ends):
            for end, sign in ((self.breaks[i + 1], 1.0), (self.breaks[i], -1.0)):
                acc = np.zeros(omega.shape, dtype=np.complex128)
                power = 1.0 / iw
                for k, val in enumerate(vals[float(end)]):
                    if val != 0:
                        acc += (-1) ** k * val * power
                    power = power / iw
                out += sign * np.exp(iw * end) * acc
        return out

    def _even_odd(self, omega, parity):
        """``I(w) + I(-w)`` (parity +1) or ``(I(w) - I(-w)) / (2i)`` (parity -1)."""
        out = np.empty(omega.shape, dtype=np.complex128)
        small = np.abs(omega) * self.R <= SERIES_SWITCH
        if small.any():
            w = omega[small]
            acc = np.zeros(w.shape, dtype=np.complex128)
            if parity == 1:
                for m in range(self.n_series // 2):
                    acc += (-1) ** m * w ** (2 * m) / self.fact[2 * m] * self.moments[2 * m]
                out[small] = 2.0 * acc
            else:
                for m in range(self.n_series // 2):
                    acc += (-1) ** m * w ** (2 * m + 1) / self.fact[2 * m + 1] * self.moments[2 * m + 1]
                out[small] = acc
        big = ~small
        if big.any():
            w = omega[big]
            ip, im = self._ibp(w), self._ibp(-w)
            out[big] = ip + im if parity == 1 else (ip - im) / 2j
        return out

    def __call__(self, z):
        z = np.asarray(z, dtype=np.complex128)
        omega = 2.0 * np.pi * z
        if self.d == 1:
            return self.amp * self._even_odd(omega, 1)
        # d = 3: F = (2/z) * int r f0 sin(omega r) dr; at z = 0 use 4 pi M2.
        out = np.empty(z.shape, dtype=np.complex128)
        zero = z == 0
        out[zero] = 4.0 * np.pi * self.moments[1]
        nz = ~zero
        out[nz] = 2.0 / z[nz] * self._even_odd(omega[nz], -1)
        return self.amp * out

    def derivative(self, z):
        """``F'(z)`` via the transform of ``2 pi i r p`` (``d = 1``) or the quotient rule."""
        z = np.asarray(z, dtype=np.complex128)
        key = "_dcache"
        if not hasattr(self, key):
            # Transform of the profile multiplied by r, treated in d = 1 with
            # odd parity: d/dz int p (e^{iwr} + e^{-iwr}) = 2 pi i int r p (e^{iwr} - e^{-iwr}).
            polys = tuple(pp.pmul((0, 1), p) for p in self.polys)
            setattr(self, key, _PPTransform(pp.PPoly(self.exact_breaks, polys), 1))
        aux = getattr(self, key)
        omega = 2.0 * np.pi * z
        odd = aux._even_odd(omega, -1)  # (I(w) - I(-w)) / 2i for r p
        if self.d == 1:
            # d/dz [I(w)+I(-w)] = 2 pi i (I_rp(w) - I_rp(-w)) = 2 pi i * 2i * odd
            return -4.0 * np.pi * self.amp * odd
        # d = 3: F = (2/z) S, S = int q sin(w r), q = r f0; S' = 2 pi int r q cos(w r).
        even = aux._even_odd(omega, 1)  # I_rq(w) + I_rq(-w) = 2 int r q cos(w r)
        out = np.zeros(z.shape, dtype=np.complex128)
        nz = z != 0
        s = self._even_odd(omega[nz], -1)
        sp = np.pi * even[nz]
        out[nz] = -2.0 * s / z[nz] ** 2 + 2.0 * sp / z[nz]
        return self.amp * out


_PP_CACHE_ATTR = "_pp_transform"


def _pp_transform(f):
    cached = f.__dict__.get(_PP_CACHE_ATTR)
    if cached is None:
        cached = _PPTransform(f.poly, f.dim, f.amp)
        # Benign race: concurrent callers build identical objects.
        f.__dict__[_PP_CACHE_ATTR] = cached
    return cached


def _pp_exact_ok(f):
    return isinstance(f, F.PiecewisePoly) and f.dim in (1, 3) and f.parity == 1


# -- quadrature ----------------------------------------------------------------

def _panels(f, zmax):
    """Panel edges on ``[0, R]`` aligned to breakpoints, at most half a period long."""
    R = f.support_radius
    cuts = [0.0] + [b for b in f.breakpoints if 0 < b < R] + [R]
    half_period = 0.5 / zmax if zmax > 0 else math.inf
    edges = [0.0]
    for a, b in zip(cuts[:-1], cuts[1:]):
        n = max(1, int(math.ceil((b - a) / half_period))) if math.isfinite(half_period) else 1
        n = max(n, 2)
        edges.extend(np.linspace(a, b, n + 1)[1:].tolist())
    return np.array(edges)


def _nodes_compact(f, zmax):
    """Quadrature nodes and weights on ``[0, R]`` for the profile."""
    edges = _panels(f, zmax)
    x, w = _gl(GL_NODES)
    nodes, weights = [], []
    alpha = f.edge_exponent
    for i, (a, b) in enumerate(zip(edges[:-1], edges[1:])):
        h = b - a
        if i == len(edges) - 2 and alpha is not None:
            # Weight (R - r)^alpha: r = a + h (1 + s)/2, R - r = h (1 - s)/2.
            s, ws = _gj(GL_NODES, float(alpha))
            r = a + h * (1.0 + s) / 2.0
            nodes.append(r)
            weights.append(("jacobi", ws * (h / 2.0) ** (alpha + 1.0), b - r, alpha))
            continue
        nodes.append(a + h * (1.0 + x) / 2.0)
        weights.append(("plain", w * h / 2.0))
    return nodes, weights


def _profile_weighted(f, nodes, weights):
    """Concatenate ``f0(r) * w`` over panels, dividing out the Jacobi weight."""
    rs, vals = [], []
    for r, spec in zip(nodes, weights):
        fr = f.profile(r)
        if spec[0] == "jacobi":
            _, wj, dist, alpha = spec
            with np.errstate(divide="ignore", invalid="ignore"):
                fr = fr / dist**alpha
            vals.append(fr * wj)
        else:
            vals.append(fr * spec[1])
        rs.append(r)
    return np.concatenate(rs), np.concatenate(vals)


def _quad_compact(f, z, derivative=False):
    z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    d = f.dim
    lam = _lam(d)
    zmax = float(np.max(np.abs(z))) if z.size else 0.0
    r, fw = _profile_weighted(f, *_nodes_compact(f, zmax))
    weight = fw * r ** (2.0 * lam + 1.0)
    const = (2.0 * math.pi) ** (lam + 1.0)
    out = np.empty(z.shape, dtype=np.complex128)
    for i, zi in enumerate(z):
        arg = 2.0 * math.pi * r * zi
        if derivative:
            k = bessel_kernel(lam + 1.0, arg)
            out[i] = const * np.sum(weight * (-(2.0 * math.pi * r) ** 2 * zi) * k)
        else:
            out[i] = const * np.sum(weight * bessel_kernel(lam, arg))
    return out


def _tail_radius(f, d):
    """Radius beyond which ``const * K(0) * int E(r) r^(d-1) dr`` is negligible."""
    lam = _lam(d)
    c = (2.0 * math.pi) ** (lam + 1.0) * _kernel0(lam)
    scale = abs(float(f.profile(0.0))) + 1e-300
    R = 1.0
    while R < 1e4:
        tail, _ = integrate.quad(lambda r: float(f.decay(r)) * r ** (d - 1), R, np.inf, limit=200)
        if c * tail <= TAIL_TOL * scale:
            return R
        R *= 1.5
    raise UnsupportedOperation("decay envelope too slow for truncated quadrature")


def _quad_noncompact(f, xi):
    with warnings.catch_warnings():
        # QAWF reports "bad integrand behavior" on slowly decaying tails
        # while still meeting the absolute tolerance.
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        return _quad_noncompact_impl(f, xi)


def _quad_noncompact_impl(f, xi):
    xi = np.abs(np.atleast_1d(np.asarray(xi, dtype=float)))
    d = f.dim
    if f.decay(1.0) is None:
        raise UnsupportedOperation(f"no decay information for {f!r}")
    out = np.empty(xi.shape)
    pending = []

    def prof(r):
        return float(f.profile(r))

    for i, t in enumerate(xi):
        if t == 0.0:
            if not f.integrable:
                out[i] = math.inf
                continue
            lam = _lam(d)
            const = (2.0 * math.pi) ** (lam + 1.0) * _kernel0(lam)
            val, _ = integrate.quad(lambda r: prof(r) * r ** (d - 1), 0.0, np.inf, limit=400,
                                    epsabs=1e-14, epsrel=1e-12)
            out[i] = const * val
            continue
        w = 2.0 * math.pi * t
        if d in (1, 3):
            g = prof if d == 1 else (lambda r: prof(r) * r)
            kind = "cos" if d == 1 else "sin"
            # Split off [0, c]: the profile may be non-smooth at the origin.
            c = 1.0 / t
            head, _ = integrate.quad(g, 0.0, c, weight=kind, wvar=w, limit=400,
                                     epsabs=1e-14, epsrel=1e-12)
            tail, _ = integrate.quad(g, c, np.inf, weight=kind, wvar=w, limit=400,
                                     epsabs=1e-14)
            val = head + tail
            out[i] = 2.0 * val if d == 1 else 2.0 / t * val
        else:
            pending.append(i)
    if pending:
        # Other dimensions: one truncated rule shared by all frequencies.
        R = _tail_radius(f, d)
        trunc = F.Analytic(f.profile, dim=d, support_radius=R, name="truncated")
        out[pending] = _quad_compact(trunc, xi[pending]).real
    return out


# -- public API ----------------------------------------------------------------

def _closed(f, xi):
    if isinstance(f, F.Convolution) and getattr(f, "_exact_hat", None) is not None:
        return f._exact_hat(xi)
    return f.closed_transform(xi)


def fourier_radial(f, xi, method="auto"):
    """Radial Fourier transform ``f_hat(xi)`` in ``f.dim`` dimensions.

    Parameters
    ----------
    f : RadialFunction
    xi : float or array_like
        Frequencies (only ``|xi|`` matters).
    method : {"auto", "exact", "quadrature"}
        ``"exact"`` requires a closed form; ``"quadrature"`` integrates the
        profile numerically even when a closed form exists.

    Returns
    -------
    float or ndarray
    """
    scalar = np.ndim(xi) == 0
    xi = np.abs(np.atleast_1d(np.asarray(xi, dtype=float)))
    if f.parity != 1:
        raise UnsupportedOperation("transform of an odd profile is not radial")
    if method not in ("auto", "exact", "quadrature"):
        raise ValueError(f"unknown method {method!r}")
    out = None
    if method in ("auto", "exact"):
        if _pp_exact_ok(f):
            out = _pp_transform(f)(xi).real
        else:
            out = _closed(f, xi)
        if out is None and method == "exact":
            raise UnsupportedOperation(f"no closed form transform for {f!r}")
    if out is None:
        out = _quadrature(f, xi)
    out = np.asarray(out, dtype=float)
    return float(out[0]) if scalar else out


def _quadrature(f, xi):
    if isinstance(f, F.Convolution):
        return fourier_radial(f.left, xi, "quadrature") * fourier_radial(f.right, xi, "quadrature")
    if isinstance(f, F.Mixture):
        ts, ws = f.measure.points()
        return sum(w * t**f.dim * fourier_radial(f.base, t * xi, "quadrature") for t, w in zip(ts, ws))
    if isinstance(f, F.Scaled):
        return f.amp * f.lam ** (-f.dim) * fourier_radial(f.child, xi / f.lam, "quadrature")
    if math.isfinite(f.support_radius):
        return _quad_compact(f, xi).real
    if not (f.integrable or f.dim in (1, 3)):
        raise UnsupportedOperation(f"{f!r} is not integrable in dimension {f.dim}")
    return _quad_noncompact(f, xi)


def analytic_extension(f, z, derivative=False):
    """Entire extension ``F(z)`` of the transform of a compactly supported ``f``.

    ``derivative=True`` returns ``F'(z)``. Raises :class:`RangeError` when
    ``2 pi |z| R`` exceeds the kernel's complex envelope.
    """
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    R = f.support_radius
    if not math.isfinite(R):
        raise UnsupportedOperation("entire extension needs compact support")
    if np.any(2.0 * math.pi * np.abs(z) * R > COMPLEX_ENVELOPE):
        raise RangeError(f"|z| must satisfy 2 pi |z| R <= {COMPLEX_ENVELOPE:g}")
    if f.parity != 1:
        raise UnsupportedOperation("transform of an odd profile is not radial")
    if _pp_exact_ok(f):
        t = _pp_transform(f)
        out = t.derivative(z) if derivative else t(z)
    elif isinstance(f, F.Scaled):
        inner = analytic_extension(f.child, z / f.lam, derivative)
        out = f.amp * f.lam ** (-f.dim) * inner * (1.0 / f.lam if derivative else 1.0)
    else:
        out = _quad_compact(f, z, derivative=derivative)
    real = z.imag == 0
    out = np.where(real, out.real + 0j, out)
    return out[0] if scalar else out
