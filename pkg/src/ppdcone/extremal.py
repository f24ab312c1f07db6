"""Zero localization of entire transforms and extremality certificates.

Zeros are located by the argument principle on rectangles. The boundary arg
of ``F`` is sampled adaptively until consecutive increments are small, cells
are split at jittered (non-central) fractions so that cuts avoid the real and
imaginary axes where zeros of even real transforms live, and a cell whose
zeros form a single cluster (contour moments give centroid and spread) is
polished with Newton's method for the cluster multiplicity.
"""

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy import optimize
from scipy.special import roots_legendre

from . import funcs as F
from . import ppoly as pp
from .criteria import check_nonneg, check_posdef_fourier
from .errors import (ContourError, DomainError, NoSolution, PreconditionError,
                     UnsupportedOperation)
from .transform import analytic_extension, gaussian_poly_hat

DEFAULT_REGION = (-10.0, 10.0, -5.0, 5.0)
TOL_REAL = 1e-7
MAX_RETRIES = 5
_CUTS = (0.4371, 0.5629)


class Reason(str, enum.Enum):
    """Machine-readable reason codes carried by certificates."""

    ALL_ZEROS_REAL = "ALL_ZEROS_REAL"
    NONREAL_ZEROS = "NONREAL_ZEROS"
    MULTIPLE_SCALES = "MULTIPLE_SCALES"
    SINGLE_SCALE = "SINGLE_SCALE"
    GAUSSIAN = "GAUSSIAN"
    REAL_ROOTS_EVEN = "REAL_ROOTS_EVEN"
    TOO_FEW_REAL_ROOTS = "TOO_FEW_REAL_ROOTS"
    UNDECIDED = "UNDECIDED"
    PLANTED_DOUBLE_ZERO = "PLANTED_DOUBLE_ZERO"


@dataclass(frozen=True)
class ZeroReport:
    """Zeros in ``region = (re_min, re_max, im_min, im_max)``.

    ``zeros`` holds ``(location, multiplicity, "REAL" | "NONREAL")`` sorted
    by real then imaginary part; ``total_count`` is the argument-principle
    count, equal to the sum of multiplicities.
    """

    zeros: tuple
    region: tuple
    total_count: int

    def real_zeros(self):
        return [z for z in self.zeros if z[2] == "REAL"]

    def nonreal_zeros(self):
        return [z for z in self.zeros if z[2] == "NONREAL"]

    def to_json(self):
        return {
            "zeros": [[float(z.real), float(z.imag), int(m), c] for z, m, c in self.zeros],
            "region": [float(v) for v in self.region],
            "total_count": int(self.total_count),
        }


@dataclass(frozen=True)
class Certificate:
    """``status`` is ``EXTREMAL``, ``NOT_EXTREMAL`` or ``INCONCLUSIVE``."""

    status: str
    reason: Reason
    detail: str = ""
    witness: dict = field(default_factory=dict)
    searched_region: tuple = None

    def __post_init__(self):
        if self.status not in ("EXTREMAL", "NOT_EXTREMAL", "INCONCLUSIVE"):
            raise ValueError(f"bad status {self.status!r}")

    def to_json(self):
        return {
            "status": self.status,
            "reason": self.reason.value,
            "detail": self.detail,
            "witness": _jsonable(self.witness),
            "searched_region": None if self.searched_region is None
            else [float(v) for v in self.searched_region],
        }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, ZeroReport):
        return obj.to_json()
    if isinstance(obj, (np.floating, Fraction)):
        return float(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


# -- argument principle ----------------------------------------------------------

class _OnContour(Exception):
    pass


class _Transform:
    """Cached evaluator of ``F`` and ``F'`` for a compactly supported function."""

    def __init__(self, f):
        self.f = f
        self.norm = abs(complex(analytic_extension(f, 0.0))) or 1.0

    def __call__(self, z):
        return np.asarray(analytic_extension(self.f, np.asarray(z, dtype=np.complex128)))

    def deriv(self, z):
        return np.asarray(analytic_extension(self.f, np.asarray(z, dtype=np.complex128),
                                             derivative=True))


def _edge_points(a, b, n):
    return a + (b - a) * np.linspace(0.0, 1.0, n, endpoint=False)


def _winding(F_, cell, n0=32, max_pts=20000):
    """Zero count inside ``cell`` from the total change of ``arg F``.

    A segment is refined until the wrapped arg increment is below pi/4 and
    ``|F'/F| |dz| < 1/2`` at both ends; the second test stops a zero close to
    the edge from hiding a near-2 pi jump behind the branch cut of ``angle``.
    """
    x0, x1, y0, y1 = cell
    corners = [complex(x0, y0), complex(x1, y0), complex(x1, y1), complex(x0, y1)]
    total = 0.0
    for a, b in zip(corners, corners[1:] + corners[:1]):
        ts = np.linspace(0.0, 1.0, n0 + 1)
        zs = a + (b - a) * ts
        vals = F_(zs)
        if np.any(vals == 0):
            raise _OnContour()
        logd = np.abs(F_.deriv(zs) / vals)
        while True:
            dphi = np.angle(vals[1:] / vals[:-1])
            dz = abs(b - a) * np.diff(ts)
            bad = (np.abs(dphi) > math.pi / 4) | (np.maximum(logd[1:], logd[:-1]) * dz > 0.5)
            if not bad.any():
                break
            if ts.size > max_pts:
                raise _OnContour()
            mids = 0.5 * (ts[:-1][bad] + ts[1:][bad])
            mz = a + (b - a) * mids
            mvals = F_(mz)
            if np.any(mvals == 0):
                raise _OnContour()
            ts = np.concatenate([ts, mids])
            vals = np.concatenate([vals, mvals])
            logd = np.concatenate([logd, np.abs(F_.deriv(mz) / mvals)])
            order = np.argsort(ts)
            ts, vals, logd = ts[order], vals[order], logd[order]
        total += float(np.sum(np.angle(vals[1:] / vals[:-1])))
    count = total / (2.0 * math.pi)
    if abs(count - round(count)) > 0.05:
        raise _OnContour()
    return int(round(count))


def _moments(F_, cell, center, n=64):
    """``s_k = (1/2 pi i) \\oint (z - c)^k F'/F dz`` for k = 0, 1, 2 (Gauss-Legendre per edge)."""
    x0, x1, y0, y1 = cell
    corners = [complex(x0, y0), complex(x1, y0), complex(x1, y1), complex(x0, y1)]
    s, w = roots_legendre(n)
    out = np.zeros(3, dtype=np.complex128)
    for a, b in zip(corners, corners[1:] + corners[:1]):
        z = a + (b - a) * (s + 1.0) / 2.0
        ratio = F_.deriv(z) / F_(z)
        jac = (b - a) / 2.0
        for k in range(3):
            out[k] += np.sum(w * (z - center) ** k * ratio) * jac
    return out / (2j * math.pi)


def _newton(F_, z, m, steps=60):
    """Polish a zero of multiplicity ``m`` starting from ``z``.

    Simple zeros use Newton on ``F``. For ``m >= 2`` the iteration runs on
    ``F'``, which has a zero of multiplicity ``m - 1`` there; this reaches
    full precision where iterating on ``F`` stalls at ``sqrt(eps)``. The
    second derivative comes from a central difference of ``F'``.
    """
    if m == 1:
        g, mult = F_, 1

        def gp(w):
            return F_.deriv(w)
    else:
        g, mult = F_.deriv, m - 1

        def gp(w):
            h = 1e-5 * max(1.0, abs(w))
            return (F_.deriv(w + h) - F_.deriv(w - h)) / (2 * h)
    for _ in range(steps):
        gz = complex(g(z))
        if gz == 0:
            break
        dz = complex(gp(z))
        if dz == 0:
            break
        step = mult * gz / dz
        z = z - step
        if abs(step) <= 1e-15 * max(1.0, abs(z)):
            break
    return z


def _split(cell, depth, attempt=0):
    x0, x1, y0, y1 = cell
    frac = _CUTS[depth % 2] + 0.0613 * attempt * (-1) ** attempt
    if (x1 - x0) >= (y1 - y0):
        xm = x0 + frac * (x1 - x0)
        return [(x0, xm, y0, y1), (xm, x1, y0, y1)]
    ym = y0 + frac * (y1 - y0)
    return [(x0, x1, y0, ym), (x0, x1, ym, y1)]


def _inside(z, cell, slack):
    x0, x1, y0, y1 = cell
    return x0 - slack <= z.real <= x1 + slack and y0 - slack <= z.imag <= y1 + slack


def _search(F_, cell, count, tol, depth, found, min_size):
    if count == 0:
        return
    x0, x1, y0, y1 = cell
    size = max(x1 - x0, y1 - y0)
    center = complex((x0 + x1) / 2.0, (y0 + y1) / 2.0)
    if size < 0.25 or size < min_size:
        s = _moments(F_, cell, center)
        c = center + s[1] / count
        spread = abs(s[2] / count - (s[1] / count) ** 2)
        if spread ** 0.5 < 0.02 * size or size < min_size:
            z = _newton(F_, c, count)
            resid = abs(complex(F_(z)))
            if _inside(z, cell, 0.05 * size) and resid <= tol * F_.norm:
                found.append((z, count))
                return
            if size < min_size:
                found.append((c, count))
                return
    for attempt in range(MAX_RETRIES):
        parts = _split(cell, depth, attempt)
        try:
            counts = [_winding(F_, p) for p in parts]
        except _OnContour:
            continue
        if sum(counts) != count:
            continue
        for p, c in zip(parts, counts):
            _search(F_, p, c, tol, depth + 1, found, min_size)
        return
    raise ContourError(f"zero counting failed after {MAX_RETRIES} cut perturbations near {center}")


def _merge(found, tol_real):
    """Classify, and merge near-conjugate pairs straddling the real axis."""
    found = [(complex(z.real, 0.0) if abs(z.imag) < tol_real else z, m) for z, m in found]
    merged = []
    for z, m in sorted(found, key=lambda p: (p[0].real, p[0].imag)):
        if merged and abs(merged[-1][0] - z) < 1e-7 * max(1.0, abs(z)):
            z0, m0 = merged[-1]
            merged[-1] = ((z0 * m0 + z * m) / (m0 + m), m0 + m)
        else:
            merged.append((z, m))
    return tuple((z, m, "REAL" if z.imag == 0.0 else "NONREAL") for z, m in merged)


def find_zeros(f, region=DEFAULT_REGION, tol=1e-10, tol_real=TOL_REAL):
    """Zeros of the entire transform of a compactly supported ``f`` in ``region``.

    Parameters
    ----------
    f : RadialFunction
        Finite support.
    region : tuple
        ``(re_min, re_max, im_min, im_max)``.
    tol : float
        Newton stops when ``|F(z)| < tol * |F(0)|`` or the step stalls.
    tol_real : float
        Zeros with ``|Im z| < tol_real`` are reported as real.

    Returns
    -------
    ZeroReport
    """
    if not math.isfinite(f.support_radius):
        raise UnsupportedOperation("zero search needs a compactly supported function")
    x0, x1, y0, y1 = (float(v) for v in region)
    if not (x0 < x1 and y0 < y1):
        raise DomainError("region must satisfy re_min < re_max and im_min < im_max")
    F_ = _Transform(f)
    min_size = 1e-9 * max(x1 - x0, y1 - y0)
    for attempt in range(MAX_RETRIES + 1):
        pad = attempt * 1e-3 * max(x1 - x0, y1 - y0)
        cell = (x0 - pad, x1 + pad, y0 - pad, y1 + pad)
        try:
            total = _winding(F_, cell)
        except _OnContour:
            continue
        found = []
        _search(F_, cell, total, tol, 0, found, min_size)
        zeros = _merge(found, tol_real)
        return ZeroReport(zeros, cell, total)
    raise ContourError(f"a zero lies on the region boundary after {MAX_RETRIES} perturbations")


# -- certificates ------------------------------------------------------------------

def certify_compact(f, region=DEFAULT_REGION, check=True):
    """Extremality test for compactly supported PPD functions.

    All zeros of the transform's extension real gives ``EXTREMAL``, scoped to
    the searched region. Non-real zeros give ``INCONCLUSIVE``: the criterion
    is only sufficient.
    """
    if not math.isfinite(f.support_radius):
        raise UnsupportedOperation("certify_compact needs compact support")
    if check:
        if not check_nonneg(f).passed:
            raise PreconditionError("function takes negative values")
        if not check_posdef_fourier(f).passed:
            raise PreconditionError("transform takes negative values")
    report = find_zeros(f, region)
    nonreal = report.nonreal_zeros()
    if not nonreal:
        return Certificate(
            "EXTREMAL", Reason.ALL_ZEROS_REAL,
            "every zero of the transform extension in the searched region is real; "
            "the conclusion is conditional on the region containing all non-real zeros",
            {"zero_report": report}, report.region)
    n = sum(m for _, m, _ in nonreal)
    planted = _planted_zeta(f, nonreal)
    if planted is not None:
        return Certificate(
            "EXTREMAL", Reason.PLANTED_DOUBLE_ZERO,
            "the four non-real zeros are simple and f has a double zero whose position "
            "determines the planted zeros uniquely, so every minorant in the cone is a "
            "multiple of f; conditional on the searched region",
            {"zero_report": report, **planted}, report.region)
    return Certificate(
        "INCONCLUSIVE", Reason.NONREAL_ZEROS,
        f"{n} non-real zeros (with multiplicity) found; functions below f in the cone "
        f"then have at most {n} non-real zeros, which does not decide extremality",
        {"zero_report": report}, report.region)


def _planted_zeta(f, nonreal):
    """Uniqueness argument for ``f_{r,theta}`` with a double zero on ``(0, 2)``."""
    params = getattr(f, "zeta", None)
    if params is None or len(nonreal) != 4 or any(m != 1 for _, m, _ in nonreal):
        return None
    r, theta = params
    grid = np.linspace(0.0, 1.99, 4001)[1:]
    vals = f.profile(grid)
    i = int(np.argmin(vals))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
    res = optimize.minimize_scalar(lambda x: float(f.profile(x)), bounds=(lo, hi),
                                   method="bounded", options={"xatol": 1e-13})
    if res.fun > 1e-8 * float(f.profile(0.0)):
        return None
    try:
        rho, psi = recover_zeta(float(res.x))
    except (NoSolution, PreconditionError):
        return None
    if abs(rho - r) > 1e-4 * r or abs(psi - theta) > 1e-4:
        return None
    return {"x_zeta": float(res.x), "rho": rho, "psi": psi}


def not_extremal_mixture(omega, nu, grid_points=2001):
    """Mixtures over two or more scales are never extremal."""
    R = omega.support_radius if math.isfinite(omega.support_radius) else 10.0
    r = np.linspace(0.0, R, grid_points)
    vals = omega.profile(r)
    scale = float(np.max(np.abs(vals))) or 1.0
    if np.any(np.diff(vals) > 1e-12 * scale) or not vals[1] < vals[0]:
        raise PreconditionError("omega must be nonincreasing and strictly decreasing near 0")
    scales = sorted({t for t, _ in nu.atoms})
    if nu.has_density:
        support = nu.grid[nu.values > 0]
        if support.size >= 2:
            scales = sorted(set(scales) | {float(support[0]), float(support[-1])})
        elif support.size == 1:
            scales = sorted(set(scales) | {float(support[0])})
    distinct = []
    for t in scales:
        if not distinct or t - distinct[-1] > 1e-12 * max(1.0, t):
            distinct.append(t)
    if len(distinct) >= 2:
        return Certificate("NOT_EXTREMAL", Reason.MULTIPLE_SCALES,
                           "the measure charges at least two scales, so the mixture splits "
                           "into non-proportional cone elements",
                           {"scales": [distinct[0], distinct[-1]]})
    return Certificate("INCONCLUSIVE", Reason.SINGLE_SCALE,
                       "single-atom measure: the mixture is a rescaling of omega, so "
                       "extremality is that of omega", {"scales": distinct})


# -- Hermite quartics ---------------------------------------------------------------

class Region(str, enum.Enum):
    EXTERIOR = "EXTERIOR"
    INTERIOR = "INTERIOR"
    BOUNDARY = "BOUNDARY"


class Side(str, enum.Enum):
    TIME = "TIME"
    FREQUENCY = "FREQUENCY"
    BOTH = "BOTH"


@dataclass(frozen=True)
class HermiteClass:
    region: Region
    side: Side = None
    q: float = 0.0


def ellipse_q(a, b, s=1):
    """``(s a + 2b)^2 + 2 (b - 1/4)^2``; the ellipse is ``q = 1/8``."""
    return (s * a + 2 * b) ** 2 + 2 * (b - Fraction(1, 4) if _rational(a, b) else b - 0.25) ** 2


def _rational(*xs):
    return all(isinstance(x, (int, Fraction)) for x in xs)


def classify_hermite4(a, b, tol=None):
    """Position of ``(a, b)`` relative to the PPD region of ``f_{a,b}``.

    The region is the intersection of the ellipses ``q(+1) <= 1/8`` and
    ``q(-1) <= 1/8``; for ``a > 0`` the first is the binding one. With
    ``H2 = 4 pi x^2 - 1`` the quadratic in ``X = 4 pi x^2`` of ``f_{a,b}``
    is nonnegative exactly when ``q(-1) <= 1/8``, and that of the transform
    (parameters ``(-a, b)``) when ``q(+1) <= 1/8``. A boundary point with
    ``a > 0`` therefore has a transform with real double zeros (frequency
    type); ``a < 0`` gives real zeros of ``f_{a,b}`` itself (time type) and
    ``a = 0`` is both.
    """
    if tol is None:
        tol = 1e-10 if _rational(a, b) else 1e-8
    s = 1 if a > 0 else -1
    q = ellipse_q(a, b, s)
    eighth = Fraction(1, 8) if _rational(a, b) else 0.125
    gap = float(q - eighth)
    if abs(gap) <= tol:
        side = Side.BOTH if a == 0 else (Side.FREQUENCY if a > 0 else Side.TIME)
        return HermiteClass(Region.BOUNDARY, side, float(q))
    return HermiteClass(Region.INTERIOR if gap < 0 else Region.EXTERIOR, None, float(q))


def _real_root_profile(coeffs, tol):
    """Real roots (count with multiplicity) and whether every cluster is even."""
    c = np.array([float(x) for x in coeffs])
    nz = np.nonzero(np.abs(c) > 0)[0]
    c = c[: nz[-1] + 1]
    if c.size <= 1:
        return 0, 0, True, []
    roots = np.roots(c[::-1])
    scale = max(1.0, float(np.max(np.abs(roots))))
    real = np.sort(roots[np.abs(roots.imag) <= tol * scale].real)
    clusters = []
    for x in real:
        if clusters and abs(x - clusters[-1][-1]) <= 10 * tol * scale:
            clusters[-1].append(x)
        else:
            clusters.append([x])
    even = all(len(cl) % 2 == 0 for cl in clusters)
    return len(real), len(roots), even, [float(np.mean(cl)) for cl in clusters]


def certify_hermite(f, tol=1e-4):
    """Extremality of ``P(x) exp(-a x^2)`` with ``deg P = 4N`` (Hermite expansion).

    ``EXTREMAL`` when ``P`` or the transform-side factor ``P~`` has only real
    zeros, all of even multiplicity; ``NOT_EXTREMAL`` when neither has four
    real zeros; otherwise ``INCONCLUSIVE``. Root imaginary parts are compared
    to ``tol`` (relative), which absorbs the splitting of double roots.
    """
    if not isinstance(f, F.GaussianTimesPoly):
        raise UnsupportedOperation("certify_hermite needs a Gaussian times polynomial")
    if len(f.coeffs) == 1:
        # a constant factor: f_{0,0} and plain Gaussians
        degree = 0
    else:
        degree = 4 if isinstance(f, F.HermiteQuartic) else len(f.coeffs) - 1
    if degree % 4:
        raise DomainError(f"Hermite degree {degree} is not a multiple of 4")
    hat = gaussian_poly_hat(f)
    radius = math.sqrt(40.0 / float(f.rate))
    hat_radius = math.sqrt(40.0 / float(hat.rate))
    scale0 = abs(float(f.profile(0.0))) or 1.0
    for g, rad, name in ((f, radius, "function"), (hat, hat_radius, "transform")):
        v = check_nonneg(g, radius=rad, tol=1e-10 * max(scale0, abs(float(g.profile(0.0)))))
        if not v.passed:
            raise PreconditionError(f"{name} is negative at x = {v.witness_x:.6g}: not PPD")
    if degree == 0:
        return Certificate("EXTREMAL", Reason.GAUSSIAN, "Gaussians are extremal", {})
    time = _real_root_profile(f.coeffs, tol)
    freq = _real_root_profile(hat.coeffs, tol)
    witness = {"time_real_roots": time[3], "frequency_real_roots": freq[3],
               "degree": degree}
    for (nreal, nroots, even, _), side in ((time, "TIME"), (freq, "FREQUENCY")):
        if nroots == degree and nreal == degree and even:
            witness["side"] = side
            return Certificate("EXTREMAL", Reason.REAL_ROOTS_EVEN,
                               f"{side.lower()}-side polynomial has {degree} real zeros "
                               "of even multiplicity", witness)
    if time[0] < 4 and freq[0] < 4:
        return Certificate("NOT_EXTREMAL", Reason.TOO_FEW_REAL_ROOTS,
                           "neither side has four real zeros", witness)
    return Certificate("INCONCLUSIVE", Reason.UNDECIDED,
                       "real zeros present but not all real on either side", witness)


# -- the double-zero family ------------------------------------------------------------

class _PhiStack:
    """``phi`` and its derivatives evaluated on demand."""

    def __init__(self):
        phi = F.make_phi()
        self.d = [phi] + [F.derivative(phi, k) for k in range(1, 6)]

    def __call__(self, k, x):
        return self.d[k].profile(np.asarray(x, dtype=float))


_PHI = None


def _phi_stack():
    global _PHI
    if _PHI is None:
        _PHI = _PhiStack()
    return _PHI


def _f_zeta_min(r, theta, grid):
    ph = _phi_stack()
    c2 = math.cos(2 * theta)
    if abs(c2) < 1e-15:
        c2 = 0.0
    a, b = 2 * c2 / r**2, 1.0 / r**4

    def fz(x):
        return ph(0, x) + a * ph(2, x) + b * ph(4, x)

    vals = fz(grid)
    i = int(np.argmin(vals))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
    if i in (0, grid.size - 1):
        return float(grid[i]), float(vals[i])
    res = optimize.minimize_scalar(lambda x: float(fz(x)), bounds=(lo, hi),
                                   method="bounded", options={"xatol": 1e-13})
    if res.fun < vals[i]:
        return float(res.x), float(res.fun)
    return float(grid[i]), float(vals[i])


def solve_double_zero(theta=math.pi / 4, bracket=(3.0, 4.0), tol=1e-10):
    """Radius ``r`` at which ``f_{r,theta}`` acquires a double zero on ``(0, 2)``.

    Bisection on the sign of ``min f_{r,theta}`` over ``(0, 2)``, the minimum
    taken on a 4001-point grid and refined by a bounded scalar search.

    Returns
    -------
    (r, x_zeta)
    """
    if not 0 < theta < math.pi / 2:
        raise DomainError("theta must lie in (0, pi/2)")
    grid = np.linspace(0.0, 1.99, 4001)[1:]
    lo, hi = bracket
    _, mlo = _f_zeta_min(lo, theta, grid)
    _, mhi = _f_zeta_min(hi, theta, grid)
    if not (mlo < 0 <= mhi):
        raise NoSolution(f"no sign change of min f on r in [{lo}, {hi}] for theta={theta}")
    x, m = None, None
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        x, m = _f_zeta_min(mid, theta, grid)
        if m < 0:
            lo = mid
        else:
            hi = mid
        if abs(m) <= tol and hi - lo < 1e-9:
            break
        if hi - lo < 1e-15 * hi:
            break
    r = 0.5 * (lo + hi)
    x, _ = _f_zeta_min(r, theta, grid)
    return r, x


def recover_zeta(x):
    """``(rho, psi)`` such that ``f_{rho,psi}`` and its derivative vanish at ``x``.

    Solves ``phi + A phi'' + B phi'''' = 0`` and ``phi' + A phi''' + B phi^(5) = 0``
    for ``A = 2 cos(2 psi)/rho^2`` and ``B = 1/rho^4``.
    """
    if not 0 < x < 2:
        raise DomainError("x must lie in (0, 2)")
    ph = _phi_stack()
    p = [float(ph(k, x)) for k in range(6)]
    det = p[2] * p[5] - p[3] * p[4]
    scale = max(abs(p[2] * p[5]), abs(p[3] * p[4]), 1e-300)
    if abs(det) <= 1e-12 * scale:
        raise PreconditionError(f"the system is singular at x = {x}")
    A = (p[1] * p[4] - p[0] * p[5]) / det
    B = (p[0] * p[3] - p[1] * p[2]) / det
    if not B > 0:
        raise NoSolution(f"1/rho^4 = {B:.6g} is not positive at x = {x}")
    rho = B ** -0.25
    c2 = A * rho**2 / 2.0
    if not -1.0 < c2 < 1.0:
        raise NoSolution(f"cos(2 psi) = {c2:.6g} lies outside (-1, 1) at x = {x}")
    return rho, 0.5 * math.acos(c2)


def zeta_denominator(x):
    """``phi'' phi^(5) - phi''' phi^(4)`` at ``x``."""
    ph = _phi_stack()
    return float(ph(2, x) * ph(5, x) - ph(3, x) * ph(4, x))
