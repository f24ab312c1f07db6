"""Sampling criteria for nonnegativity, positive definiteness and the three
mixture characterizations (Polya, Gneiting, complete monotonicity).

Each check scans a grid, refines around the worst point, and returns a
:class:`Verdict`. A failed verdict always carries a witness point. None of
these checks is a proof; they are reproducible numerical tests.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from . import funcs as F
from . import ppoly as pp
from .errors import DomainError, PreconditionError, UnsupportedOperation
from .transform import fourier_radial

EPS = np.finfo(float).eps
MAX_CM_ORDER = 8
GRID_POINTS = 2001


@dataclass(frozen=True)
class Verdict:
    """Outcome of a check.

    ``margin`` is the worst slack observed (negative when the condition is
    violated); ``witness_x``/``witness_value`` locate it.
    """

    passed: bool
    witness_x: float = None
    witness_value: float = None
    margin: float = 0.0
    notes: str = ""

    def __post_init__(self):
        if not self.passed and self.witness_x is None:
            raise ValueError("a failed verdict needs a witness")
        if not math.isfinite(self.margin):
            object.__setattr__(self, "margin", float(np.sign(self.margin) * np.finfo(float).max))

    def to_json(self):
        return {
            "passed": bool(self.passed),
            "witness_x": None if self.witness_x is None else float(self.witness_x),
            "witness_value": None if self.witness_value is None else float(self.witness_value),
            "margin": float(self.margin),
            "notes": self.notes,
        }


def _verdict(passed, x, value, margin, notes):
    return Verdict(bool(passed), float(x), float(value), float(margin), notes)


def _refine_min(fn, grid, vals):
    """Bounded scalar minimization in the cells around the grid minimum."""
    i = int(np.argmin(vals))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    best_x, best_v = grid[i], vals[i]
    if hi > lo:
        res = optimize.minimize_scalar(lambda x: float(fn(x)), bounds=(lo, hi), method="bounded",
                                       options={"xatol": 1e-12 * max(1.0, abs(hi))})
        if res.fun < best_v:
            best_x, best_v = res.x, res.fun
    return best_x, best_v


def _radius_grid(f, radius, n=GRID_POINTS):
    grid = np.linspace(0.0, radius, n)
    extra = [b for b in f.breakpoints if 0 < b < radius]
    return np.unique(np.concatenate([grid, extra]))


def check_nonneg(f, radius=None, tol=1e-12):
    """``f0 >= -tol`` on ``[0, radius]`` (default: the support, or 10)."""
    if not tol > 0:
        raise DomainError("tol must be positive")
    if radius is None:
        radius = f.support_radius if math.isfinite(f.support_radius) else 10.0
    grid = _radius_grid(f, radius)
    vals = f.profile(grid)
    x, v = _refine_min(f.profile, grid, vals)
    return _verdict(v >= -tol, x, v, v, f"grid of {grid.size} points on [0, {radius:g}]")


def _default_xi_max(f):
    if math.isfinite(f.support_radius):
        return 10.0 / f.support_radius
    return 5.0


def _cheap_transform(f):
    from .transform import _pp_exact_ok

    if _pp_exact_ok(f):
        return True
    try:
        return f.closed_transform(np.zeros(1)) is not None
    except UnsupportedOperation:
        return False


def check_posdef_fourier(f, xi_max=None, tol=1e-10, n=None):
    """Transform ``>= -tol * max|F|`` on a grid over ``[0, xi_max]`` (Bochner)."""
    if xi_max is None:
        xi_max = _default_xi_max(f)
    if n is None:
        n = GRID_POINTS if _cheap_transform(f) else 201
    grid = np.linspace(0.0, xi_max, n)

    def hat(x):
        return fourier_radial(f, x)

    vals = np.asarray(hat(grid), dtype=float)
    finite = np.isfinite(vals)
    scale = float(np.max(np.abs(vals[finite]))) if finite.any() else 1.0
    safe = np.where(finite, vals, np.inf)
    x, v = _refine_min(hat, grid, safe)
    margin = v / scale
    return _verdict(margin >= -tol, x, v, margin,
                    f"transform on {n} points in [0, {xi_max:g}], dim {f.dim}, scale {scale:.6g}")


def check_posdef_gram(f, n=8, trials=100, tol=1e-10, seed=0, box=None):
    """Smallest eigenvalue of random Gram matrices ``[f(x_j - x_k)]``.

    Points are uniform in ``[-box, box]^d`` (default: the support radius,
    or 3). This is a necessary-condition sampler.
    """
    if n < 2:
        raise DomainError("need n >= 2 points")
    if box is None:
        box = f.support_radius if math.isfinite(f.support_radius) else 3.0
    rng = np.random.default_rng(seed)
    worst, worst_trial = math.inf, 0
    scale = abs(float(f.profile(0.0))) or 1.0
    for trial in range(trials):
        pts = rng.uniform(-box, box, size=(n, f.dim))
        dist = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=-1)
        gram = f.profile(dist)
        gram = 0.5 * (gram + gram.T)
        lam = float(np.linalg.eigvalsh(gram)[0]) / scale
        if lam < worst:
            worst, worst_trial = lam, trial
    return _verdict(worst >= -tol, worst_trial, worst, worst,
                    f"seed={seed} n={n} trials={trials} box={box:g}; witness_x is the trial index")


# -- profile derivatives ---------------------------------------------------------

def _fd_derivative(f, k):
    """Central differences with step ``eps^(1/3) * scale``."""

    def d(r):
        r = np.asarray(r, dtype=float)
        h = EPS ** (1.0 / 3.0) * np.maximum(1.0, np.abs(r))
        if k == 1:
            return (f.profile(np.abs(r + h)) - f.profile(np.abs(r - h))) / (2 * h)
        return (f.profile(np.abs(r + h)) - 2 * f.profile(r) + f.profile(np.abs(r - h))) / h**2

    return d


def profile_derivative(f, k):
    """Callable ``r -> f0^(k)(r)``: exact where available, else central differences."""
    try:
        g = F.derivative(f, k)
        return g.profile
    except UnsupportedOperation:
        if isinstance(f, (F.PiecewisePoly, F.GaussianTimesPoly)):
            raise
        return _fd_derivative(f, k)


def _probe_radius(f, tol):
    """Where ``f -> 0`` is tested: 4x the support, or where the envelope drops below tol."""
    if math.isfinite(f.support_radius):
        return 4.0 * f.support_radius
    if f.decay(1.0) is None:
        return 1e4
    r = 1.0
    while r < 1e12 and float(f.decay(r)) >= tol:
        r *= 1.25
    return r


def _second_dd(x, y):
    """Second divided differences on a nonuniform grid."""
    d1 = np.diff(y) / np.diff(x)
    return 2.0 * np.diff(d1) / (x[2:] - x[:-2])


# -- Polya -------------------------------------------------------------------------

def check_polya(f, tol=1e-9):
    """Even, nonnegative, nonincreasing, convex on ``[0, inf)`` and vanishing at infinity."""
    if f.dim != 1:
        raise DomainError("the Polya criterion is one-dimensional")
    X = _probe_radius(f, tol)
    top = min(X, f.support_radius * 1.5) if math.isfinite(f.support_radius) else X
    uni, lg = np.linspace(0.0, top, GRID_POINTS), np.geomspace(top * 1e-6, top, GRID_POINTS)
    grid = np.unique(np.concatenate([uni, lg]))
    extra = [b for b in f.breakpoints]
    if math.isfinite(f.support_radius):
        extra.append(f.support_radius)
    grid = np.unique(np.concatenate([grid, extra]))
    vals = f.profile(grid)
    scale = float(np.max(np.abs(vals))) or 1.0
    notes = f"probe X={X:.6g}; grid {grid.size} points"
    # Nonnegativity.
    i = int(np.argmin(vals))
    if vals[i] < -tol * scale:
        return _verdict(False, grid[i], vals[i], vals[i] / scale, "negative value; " + notes)
    # Monotonicity.
    inc = np.diff(vals) / scale
    j = int(np.argmax(inc))
    if inc[j] > tol:
        return _verdict(False, grid[j + 1], vals[j + 1], -inc[j], "increasing; " + notes)
    # Convexity: normalized second divided differences, on the uniform and
    # the log grid separately (a union of both has near-coincident nodes
    # whose divided differences are dominated by rounding).
    wmin, wx = math.inf, 0.0
    for g in (uni, lg):
        slack = _convex_slack(g, f.profile(g), scale)
        k = int(np.argmin(slack))
        # One refinement pass around the worst slack.
        lo, hi = g[max(k - 2, 0)], g[min(k + 4, g.size - 1)]
        fine = np.linspace(lo, hi, 61)
        fslack = _convex_slack(fine, f.profile(fine), scale)
        kf = int(np.argmin(fslack))
        for cand_x, cand in ((g[k + 1], slack[k]), (fine[kf + 1], fslack[kf])):
            if cand < wmin:
                wmin, wx = float(cand), float(cand_x)
    if wmin < -tol:
        return _verdict(False, wx, float(f.profile(wx)), wmin, "not convex; " + notes)
    tail = float(f.profile(X))
    if tail >= tol:
        return _verdict(False, X, tail, -tail, "does not vanish at the probe; " + notes)
    return _verdict(True, wx, float(f.profile(wx)), wmin, notes)


def _convex_slack(x, y, scale):
    dd = _second_dd(x, y)
    h = (x[2:] - x[:-2]) / 2.0
    return dd * h * h / scale


POLYA_SPECTRAL_CONSTANT = 1.0 / math.pi**2


def polya_spectral_density(nu, xi):
    """``c * int (sin(pi t xi) / (t xi))^2 t dnu(t)`` with ``c = 1/pi^2``.

    The constant makes the value at ``xi -> 0`` equal ``int t dnu(t)``, the
    integral of ``int (1 - |x|/t)_+ dnu(t)``.
    """
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    ts, ws = nu.points()
    out = np.zeros(xi.shape)
    for t, w in zip(ts, ws):
        arg = t * xi
        with np.errstate(invalid="ignore", divide="ignore"):
            ratio = np.where(arg == 0, math.pi, np.sin(math.pi * arg) / np.where(arg == 0, 1, arg))
        out += w * t * ratio**2
    return POLYA_SPECTRAL_CONSTANT * out


def polya_kernel():
    """Unit triangle ``(1 - |x|)_+`` used in Polya mixtures."""
    return F.make_indicator_conv(1)


def recover_polya_measure(f, n_density=20001, tol=1e-9):
    """Measure ``nu`` with ``f(x) = int (1 - |x|/t)_+ dnu(t)``.

    ``dnu(t) = t f''(t) dt`` where ``f''`` is continuous, plus an atom of mass
    ``t * (f'(t+) - f'(t-))`` at each kink.
    """
    if not check_polya(f, tol).passed:
        raise PreconditionError("function does not satisfy the Polya conditions")
    if isinstance(f, F.PiecewisePoly):
        return _recover_piecewise(f, n_density)
    d2 = profile_derivative(f, 2)
    X = _probe_radius(f, tol * 1e-3)
    top = min(X, f.support_radius) if math.isfinite(f.support_radius) else X
    # Geometric spacing near the origin keeps the mass below the first node
    # negligible; uniform spacing carries the bulk.
    half = n_density // 2
    grid = np.unique(np.concatenate([np.geomspace(top * 1e-10, top / half, half),
                                     np.linspace(top / half, top, n_density - half)]))
    dens = np.clip(grid * d2(grid), 0.0, None)
    return F.ScaleMeasure((), grid, dens)


def _recover_piecewise(f, n_density):
    poly = f.folded()
    atoms = []
    breaks = poly.breaks
    scale = poly.scale_magnitude()
    for i in range(1, len(breaks)):
        b = breaks[i]
        left = pp.peval(pp.pderiv(poly.polys[i - 1]), b)
        right = pp.peval(pp.pderiv(poly.polys[i]), b) if i < len(poly.polys) else 0
        jump = right - left
        if abs(float(jump)) > 1e-8 * scale:
            atoms.append((float(b), float(b * jump)))
    densities = []
    for i, p in enumerate(poly.polys):
        d2 = pp.pderiv(p, 2)
        if any(c != 0 for c in d2):
            densities.append((float(breaks[i]), float(breaks[i + 1]), d2))
    if not densities:
        return F.ScaleMeasure(tuple(atoms))
    lo, hi = densities[0][0], densities[-1][1]
    grid = np.linspace(max(lo, hi / n_density), hi, n_density)
    vals = np.zeros_like(grid)
    for a, b, d2 in densities:
        sel = (grid >= a) & (grid <= b)
        coeffs = [float(c) for c in d2]
        vals[sel] = grid[sel] * np.polynomial.polynomial.polyval(grid[sel], coeffs)
    return F.ScaleMeasure(tuple(atoms), grid, np.clip(vals, 0.0, None))


# -- Gneiting ----------------------------------------------------------------------

def _gneiting_piecewise(f):
    """Exact ``h`` for a piecewise polynomial.

    With ``f0 = sum c_j x^j`` on a piece, ``x f0'' - f0' = sum j (j-2) c_j
    x^(j-1)``, so ``h = sum j (j-2) c_j x^(j-3)``. Evaluating this form avoids
    the cancellation between ``x f0''`` and ``f0'`` near the origin.
    """
    poly = f.folded()
    breaks = np.array([float(b) for b in poly.breaks])
    rows = [[(j - 3, float(j * (j - 2) * c)) for j, c in enumerate(p) if j * (j - 2) * c != 0]
            for p in poly.polys]

    def h(t):
        x = np.sqrt(np.asarray(t, dtype=float))
        out = np.zeros(x.shape)
        idx = np.searchsorted(breaks, x, side="right") - 1
        for i, row in enumerate(rows):
            sel = idx == i
            if sel.any():
                xs = x[sel]
                out[sel] = sum(a * xs**e for e, a in row) if row else 0.0
        return out

    return h


def gneiting_function(f):
    """``h(t) = (sqrt(t) f''(sqrt(t)) - f'(sqrt(t))) / t`` as a callable."""
    if isinstance(f, F.PiecewisePoly):
        # Existence of f'' (with jumps allowed) is checked by derivative().
        F.derivative(f, 2)
        return _gneiting_piecewise(f)
    d1, d2 = profile_derivative(f, 1), profile_derivative(f, 2)

    def h(t):
        x = np.sqrt(np.asarray(t, dtype=float))
        return (x * d2(x) - d1(x)) / (x * x)

    return h


def check_gneiting(f, tol=1e-9, n=GRID_POINTS):
    """Gneiting's conditions: ``f(0) > 0``, ``f -> 0``, and ``h`` convex on ``(0, inf)``.

    Convexity is tested by second divided differences of ``h`` on a log grid
    in ``t = x^2``, each normalized by ``t^2 / max|h|`` over the stencil, so
    the slack is scale free.
    """
    if f.dim != 1:
        raise DomainError("the Gneiting criterion is one-dimensional")
    f0 = float(f.profile(0.0))
    if not f0 > 0:
        return _verdict(False, 0.0, f0, f0, "f(0) <= 0")
    X = _probe_radius(f, tol)
    tail = float(f.profile(X))
    if tail >= tol * f0:
        return _verdict(False, X, tail, -tail, f"does not vanish at probe X={X:.6g}")
    h = gneiting_function(f)
    top = min(X, f.support_radius) if math.isfinite(f.support_radius) else X
    t_hi = top**2 * (1 - 1e-9)
    t = np.geomspace(min(1e-8, t_hi * 1e-8), t_hi, n)
    slack, where = _gneiting_slack(h, t)
    k = int(np.argmin(slack))
    lo, hi = t[max(k - 2, 0)], t[min(k + 4, t.size - 1)]
    fine = np.geomspace(lo, hi, 31)
    fslack, fwhere = _gneiting_slack(h, fine)
    kf = int(np.argmin(fslack))
    if fslack[kf] < slack[k]:
        wt, wmin = fwhere[kf], fslack[kf]
    else:
        wt, wmin = where[k], slack[k]
    notes = f"log grid t in [{t[0]:.3g}, {t[-1]:.6g}] ({t.size} points); witness_x is sqrt(t)"
    passed = wmin >= -tol
    return _verdict(passed, math.sqrt(wt), float(h(wt)), wmin, notes)


def _gneiting_slack(h, t):
    vals = h(t)
    dd = _second_dd(t, vals)
    mid = t[1:-1]
    # Local scale max(|h|, |t h'|): stays away from zero where h crosses zero.
    slope = np.abs(np.diff(vals) / np.diff(t))
    local = np.maximum.reduce([np.abs(vals[:-2]), np.abs(vals[1:-1]), np.abs(vals[2:]),
                               mid * slope[:-1], mid * slope[1:]])
    local = np.where(local > 0, local, 1.0)
    slack = dd * mid * mid / local
    slack = np.where(np.isfinite(slack), slack, 0.0)
    return slack, mid


# -- complete monotonicity -----------------------------------------------------------

def _cm_callable(g):
    """``(value_fn, deriv_fn or None)`` for ``g(t)``."""
    if isinstance(g, F.RadialFunction):
        derivs = getattr(g, "cm_derivs", None)

        def val(t):
            return g.profile(np.sqrt(np.asarray(t, dtype=float)))

        return val, derivs
    return (lambda t: np.asarray(g(np.asarray(t)))), None


def _cauchy_derivative(val, k, t, n=64):
    """k-th derivative by the trapezoid rule on the circle ``|z - t| = t/2``.

    Needs ``val`` to accept complex arguments and be analytic in that disk,
    which holds for completely monotone functions (analytic in Re z > 0).
    """
    theta = 2.0 * np.pi * np.arange(n) / n
    rho = t / 2.0
    z = t[:, None] + rho[:, None] * np.exp(1j * theta)[None, :]
    vals = np.asarray(val(z), dtype=np.complex128)
    coef = (vals * np.exp(-1j * k * theta)[None, :]).mean(axis=1)
    return (math.factorial(k) * coef / rho**k).real


def _complex_ok(val):
    try:
        with warnings.catch_warnings():
            # a callable that casts to float discards the imaginary part
            warnings.simplefilter("error", np.exceptions.ComplexWarning)
            probe = np.asarray(val(np.array([1.0 + 0.25j])))
    except (TypeError, ValueError, np.exceptions.ComplexWarning):
        return False
    return np.iscomplexobj(probe) and np.all(np.isfinite(probe))


def _fd_high(val, k, t):
    """k-th derivative by a centred binomial stencil; step scaled to ``t``."""
    if k == 0:
        return val(t)
    h = t * min(0.5 / k, EPS ** (1.0 / (k + 2)))
    acc = np.zeros_like(t)
    for j in range(k + 1):
        acc += (-1) ** j * math.comb(k, j) * val(t + (k / 2.0 - j) * h)
    return acc / h**k


def check_completely_monotone(g, order_cap=MAX_CM_ORDER, tol=1e-6, n=201):
    """``(-1)^k g^(k)(t) >= 0`` for ``k = 0..order_cap`` on a log grid in ``[1e-3, 1e3]``.

    ``g`` is a callable on ``(0, inf)`` or a radial function (then
    ``g(t) = f0(sqrt(t))``, with exact derivatives when the function carries
    them). Each value is normalized by ``k! max|g| / t^k`` (Cauchy scale).
    """
    if order_cap > MAX_CM_ORDER:
        raise DomainError(f"order_cap must be <= {MAX_CM_ORDER}")
    if order_cap < 0:
        raise DomainError("order_cap must be nonnegative")
    val, exact = _cm_callable(g)
    t = np.geomspace(1e-3, 1e3, n)
    g0 = np.abs(val(t))
    worst, wx, wv, wk = math.inf, t[0], 0.0, 0
    if exact is not None:
        how = "analytic derivatives"
    elif _complex_ok(val):
        how = "Cauchy integrals on circles |z - t| = t/2"
        exact = lambda k, tt: _cauchy_derivative(val, k, tt)  # noqa: E731
    else:
        how = "central differences"
    for k in range(order_cap + 1):
        dk = exact(k, t) if exact is not None else _fd_high(val, k, t)
        scale = math.factorial(k) * np.maximum(g0, 1e-300) / t**k
        slack = (-1) ** k * dk / scale
        i = int(np.argmin(slack))
        if slack[i] < worst:
            worst, wx, wv, wk = float(slack[i]), float(t[i]), float(dk[i]), k
    notes = f"orders 0..{order_cap} by {how}; worst order {wk}"
    return _verdict(worst >= -tol, wx, wv, worst, notes)

