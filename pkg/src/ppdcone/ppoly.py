"""Exact piecewise-polynomial algebra for radial profiles.

A profile is stored in the radial variable ``r = |x|`` as contiguous pieces
``[breaks[i], breaks[i+1])`` carrying monomial coefficients (low to high) in
the absolute variable ``r``. Coefficients and breakpoints are
:class:`fractions.Fraction` whenever the inputs are rational, so closed forms
such as ``(2-x)^5 (x^4 + 10 x^3 + ...) / 630`` are reproduced bit for bit;
float inputs simply propagate as floats.

``parity`` is +1 for even extensions to the real line and -1 for odd ones
(odd-order derivatives of even profiles).
"""

from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from . import _backend
from .errors import DomainError, SmoothnessError

ZERO = Fraction(0)


def exact(x):
    """Fraction for ints, Fractions and integral floats; other floats unchanged."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    x = float(x)
    if x.is_integer():
        return Fraction(int(x))
    return x


def _is_zero(c, scale=1.0):
    if isinstance(c, Fraction):
        return c == 0
    return abs(c) <= 1e-12 * max(1.0, abs(scale))


# -- dense polynomials: tuples of coefficients, low to high -----------------

def trim(p):
    p = list(p)
    while len(p) > 1 and (p[-1] == 0):
        p.pop()
    return tuple(p) if p else (ZERO,)


def padd(p, q):
    n = max(len(p), len(q))
    return trim(
        (p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)
    )


def pscale(p, c):
    return trim(c * a for a in p)


def pmul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return trim(out)


def pderiv(p, k=1):
    for _ in range(k):
        p = trim(i * p[i] for i in range(1, len(p))) if len(p) > 1 else (ZERO,)
    return p


def pinteg(p):
    """Antiderivative vanishing at 0."""
    out = [ZERO] + [a / (i + 1) if isinstance(a, float) else Fraction(a) / (i + 1) for i, a in enumerate(p)]
    return trim(out)


def peval(p, x):
    acc = 0
    for a in reversed(p):
        acc = acc * x + a
    return acc


def paffine(p, a, b):
    """Coefficients of ``p(a*x + b)``."""
    out = (ZERO,)
    power = (Fraction(1),)
    lin = trim((b, a))
    for c in p:
        out = padd(out, pscale(power, c))
        power = pmul(power, lin)
    return out


def reflect(p):
    """Coefficients of ``p(-x)``."""
    return trim(c if i % 2 == 0 else -c for i, c in enumerate(p))


# -- piecewise profiles ------------------------------------------------------

@dataclass(frozen=True)
class PPoly:
    """Piecewise polynomial profile on ``[breaks[0], breaks[-1])``, zero beyond."""

    breaks: tuple
    polys: tuple
    parity: int = 1

    def __post_init__(self):
        if len(self.breaks) != len(self.polys) + 1 or not self.polys:
            raise DomainError("need len(breaks) == len(polys) + 1 >= 2")
        for lo, hi in zip(self.breaks[:-1], self.breaks[1:]):
            if not lo < hi:
                raise DomainError("breakpoints must be strictly increasing")
        if self.breaks[0] < 0:
            raise DomainError("profiles live on r >= 0")
        if self.parity not in (1, -1):
            raise DomainError("parity must be +1 or -1")

    @property
    def support(self):
        return self.breaks[-1]

    @property
    def degree(self):
        return max(len(p) for p in self.polys) - 1

    def _eval_data(self):
        """Breaks, piece midpoints, and coefficients in ``r - midpoint`` (cached).

        The shift is done exactly before rounding; centred coefficients keep
        Horner's rounding error well below that of the absolute basis.
        """
        cached = self.__dict__.get("_eval_cache")
        if cached is None:
            deg = self.degree
            centers = [(a + b) / 2 for a, b in zip(self.breaks[:-1], self.breaks[1:])]
            m = np.zeros((len(self.polys), deg + 1))
            for i, (p, c) in enumerate(zip(self.polys, centers)):
                local = paffine(p, 1, c)
                m[i, : len(local)] = [float(v) for v in local]
            cached = (np.array([float(b) for b in self.breaks]),
                      np.array([float(c) for c in centers]), m)
            object.__setattr__(self, "_eval_cache", cached)
        return cached

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        breaks, centers, coefs = self._eval_data()
        out = _backend.ppoly_eval(breaks, coefs, centers, r.ravel())
        return out.reshape(r.shape)

    def piece_at(self, r):
        for i in range(len(self.polys)):
            if self.breaks[i] <= r < self.breaks[i + 1]:
                return i
        return None

    def value_exact(self, r):
        i = self.piece_at(r)
        return ZERO if i is None else peval(self.polys[i], r)

    def scale_magnitude(self):
        return max(float(abs(c)) for p in self.polys for c in p) or 1.0


def check_continuity(pp, tol=1e-12):
    """Raise when adjacent pieces disagree at an interior breakpoint."""
    scale = pp.scale_magnitude()
    for i in range(1, len(pp.polys)):
        b = pp.breaks[i]
        left, right = peval(pp.polys[i - 1], b), peval(pp.polys[i], b)
        if isinstance(left - right, Fraction):
            ok = left == right
        else:
            ok = abs(float(left - right)) <= tol * scale
        if not ok:
            raise DomainError(f"profile is discontinuous at r = {float(b):g}")


def merge_equal(breaks, polys):
    """Drop interior breakpoints separating identical polynomials."""
    nb, npl = [breaks[0]], []
    for i, p in enumerate(polys):
        if npl and npl[-1] == p:
            nb[-1] = breaks[i + 1]
        else:
            npl.append(p)
            nb.append(breaks[i + 1])
    return tuple(nb), tuple(npl)


def jumps(pp, k):
    """Jump of the k-th derivative of the extension at each breakpoint.

    Returns a list of ``(location, jump)``. The extension is ``parity *
    f0(-x)`` for ``x < 0`` and zero beyond the support.
    """
    out = []
    first = pderiv(pp.polys[0], k)
    if pp.breaks[0] == 0:
        v = peval(first, pp.breaks[0])
        # d^k/dx^k of parity*f0(-x) at 0- equals parity*(-1)^k f0^(k)(0+).
        out.append((pp.breaks[0], v - pp.parity * (-1) ** k * v))
    else:
        out.append((pp.breaks[0], peval(first, pp.breaks[0])))
    for i in range(1, len(pp.polys)):
        b = pp.breaks[i]
        out.append((b, peval(pderiv(pp.polys[i], k), b) - peval(pderiv(pp.polys[i - 1], k), b)))
    out.append((pp.breaks[-1], -peval(pderiv(pp.polys[-1], k), pp.breaks[-1])))
    return out


def smoothness(pp, max_order=12):
    """Largest k with a C^k extension, and the first point where order k+1 jumps."""
    scale = pp.scale_magnitude() * max(1.0, float(pp.support)) ** pp.degree
    for k in range(max_order + 1):
        for loc, jump in jumps(pp, k):
            if not _is_zero(jump, scale):
                return k - 1, loc
    return max_order, None


def derivative(pp, k):
    """k-th derivative of the profile; jumps of the k-th derivative are allowed."""
    if k < 0:
        raise DomainError("derivative order must be nonnegative")
    if k == 0:
        return pp
    s, loc = smoothness(pp, max_order=k)
    if k > s + 1:
        raise SmoothnessError(
            f"order-{k} derivative does not exist: order {s + 1} derivative jumps at "
            f"r = {float(loc):g}",
            point=loc,
        )
    polys = tuple(pderiv(p, k) for p in pp.polys)
    return PPoly(pp.breaks, polys, pp.parity * (-1) ** k)


def rescale(pp, lam):
    """Profile of ``f(lam * x)``."""
    lam = exact(lam)
    breaks = tuple(b / lam for b in pp.breaks)
    polys = tuple(trim(c * lam**i for i, c in enumerate(p)) for p in pp.polys)
    return PPoly(breaks, polys, pp.parity)


def _refine(pps):
    pts = set()
    for pp in pps:
        pts.update(pp.breaks)
    return sorted(pts)


def _poly_on(pp, lo, hi):
    for i in range(len(pp.polys)):
        if pp.breaks[i] <= lo and hi <= pp.breaks[i + 1]:
            return pp.polys[i]
    return (ZERO,)


def add(pps, weights=None):
    """Linear combination of profiles with common parity."""
    if weights is None:
        weights = [1] * len(pps)
    parity = pps[0].parity
    if any(pp.parity != parity for pp in pps):
        raise DomainError("cannot add profiles of different parity")
    pts = _refine(pps)
    if pts[0] != 0 and all(pp.breaks[0] == 0 for pp in pps):
        pts = [ZERO] + pts
    polys = []
    for lo, hi in zip(pts[:-1], pts[1:]):
        acc = (ZERO,)
        for w, pp in zip(weights, pps):
            acc = padd(acc, pscale(_poly_on(pp, lo, hi), w))
        polys.append(acc)
    breaks, polys = merge_equal(tuple(pts), tuple(polys))
    return PPoly(breaks, polys, parity)


def multiply(f, g):
    """Pointwise product, supported on the smaller support."""
    top = min(f.support, g.support)
    pts = [p for p in _refine([f, g]) if p <= top]
    polys = [pmul(_poly_on(f, lo, hi), _poly_on(g, lo, hi)) for lo, hi in zip(pts[:-1], pts[1:])]
    breaks, polys = merge_equal(tuple(pts), tuple(polys))
    return PPoly(breaks, polys, f.parity * g.parity)


def full_line(pp):
    """Pieces ``(lo, hi, poly)`` of the extension to the whole real line."""
    pieces = []
    for i in range(len(pp.polys) - 1, -1, -1):
        p = reflect(pp.polys[i])
        if pp.parity == -1:
            p = pscale(p, -1)
        pieces.append((-pp.breaks[i + 1], -pp.breaks[i], p))
    for i, p in enumerate(pp.polys):
        pieces.append((pp.breaks[i], pp.breaks[i + 1], p))
    return pieces


def _binom_shift(q):
    """Bivariate coefficients of ``q(x - y)`` as ``{(m, n): c}`` for x^m y^n."""
    out = {}
    for k, c in enumerate(q):
        if c == 0:
            continue
        for m in range(k + 1):
            n = k - m
            out[(m, n)] = out.get((m, n), 0) + c * comb(k, m) * (-1) ** n
    return out


def _pair_integral(p, q, lower, upper):
    """Polynomial in x of ``int_{lower}^{upper} p(y) q(x - y) dy``.

    ``lower``/``upper`` are ``('c', value)`` or ``('x', shift)`` meaning
    ``x - shift``.
    """
    qxy = _binom_shift(q)
    h = {}
    for (m, n), c in qxy.items():
        for i, a in enumerate(p):
            if a == 0:
                continue
            key = (m, n + i)
            h[key] = h.get(key, 0) + a * c
    result = (ZERO,)
    for sign, limit in ((1, upper), (-1, lower)):
        acc = (ZERO,)
        for (m, n), c in h.items():
            coef = c / (n + 1) if isinstance(c, float) else Fraction(c) / (n + 1)
            if limit[0] == "c":
                term = pscale((ZERO,) * m + (Fraction(1),), coef * limit[1] ** (n + 1))
            else:
                term = pscale(paffine((ZERO,) * (n + 1) + (Fraction(1),), 1, -limit[1]), coef)
                term = pmul(term, (ZERO,) * m + (Fraction(1),))
            acc = padd(acc, term)
        result = padd(result, pscale(acc, sign))
    return result


def convolve(f, g):
    """Exact convolution of two profiles on the real line (dimension one)."""
    fl, gl = full_line(f), full_line(g)
    contributions = []
    pts = set()
    for a, b, p in fl:
        for c, d, q in gl:
            bp = sorted({a + c, a + d, b + c, b + d})
            for lo, hi in zip(bp[:-1], bp[1:]):
                if hi <= 0:
                    continue
                lo = max(lo, ZERO)
                xm = (lo + hi) / 2
                lower = ("c", a) if a >= xm - d else ("x", d)
                upper = ("c", b) if b <= xm - c else ("x", c)
                lval = a if lower[0] == "c" else xm - d
                uval = b if upper[0] == "c" else xm - c
                if lval >= uval:
                    continue
                contributions.append((lo, hi, _pair_integral(p, q, lower, upper)))
                pts.update((lo, hi))
    pts = sorted(pts)
    polys = []
    for lo, hi in zip(pts[:-1], pts[1:]):
        acc = (ZERO,)
        for clo, chi, poly in contributions:
            if clo <= lo and hi <= chi:
                acc = padd(acc, poly)
        polys.append(acc)
    # Drop trailing zero pieces.
    while len(polys) > 1 and polys[-1] == (ZERO,):
        polys.pop()
        pts.pop()
    breaks, polys = merge_equal(tuple(pts), tuple(polys))
    return PPoly(breaks, polys, f.parity * g.parity)


def moments(pp, max_power):
    """``M_j = int_0^R f0(r) r^j dr`` for j = 0..max_power, as floats."""
    out = []
    for j in range(max_power + 1):
        acc = 0
        for i, p in enumerate(pp.polys):
            anti = pinteg((ZERO,) * j + tuple(p))
            acc += peval(anti, pp.breaks[i + 1]) - peval(anti, pp.breaks[i])
        out.append(float(acc))
    return np.array(out)
