"""Acceptance suite: ten end-to-end criteria at their stated tolerances.

Each test prints a single ``PASS`` or ``FAIL`` line naming its criterion
(visible with ``pytest -s`` or in the captured output of a failure). The
whole file runs in well under five minutes.
"""

import contextlib
import math
import time
from fractions import Fraction

import numpy as np
import pytest
from scipy import special

from ppdcone import criteria as C
from ppdcone import extremal as E
from ppdcone import funcs as F
from ppdcone.errors import PreconditionError
from ppdcone.transform import fourier_radial

R_STAR = 3.342775
X_ZETA = 1.303
THETA = math.pi / 4


@pytest.fixture
def criterion(capsys):
    """Context manager printing one PASS/FAIL line for a numbered criterion."""
    @contextlib.contextmanager
    def run(number, title):
        ok = False
        try:
            yield
            ok = True
        finally:
            with capsys.disabled():
                print(f"\n[acceptance {number:2d}] {'PASS' if ok else 'FAIL'}  {title}")
    return run


def m_alpha_hat(alpha, d, xi):
    nu = d / 2 + alpha
    return math.gamma(alpha + 1) / math.pi**alpha * special.jv(nu, 2 * math.pi * xi) / xi**nu


def boundary_points(n):
    """``n`` points on the boundary of the Hermite-4 PPD region, mirrored in ``a``."""
    out = []
    for t in np.linspace(0, 2 * np.pi, 8 * n, endpoint=False):
        b = 0.25 + math.sin(t) / 4
        a = math.cos(t) / math.sqrt(8) - 2 * b
        if a >= 0 and E.ellipse_q(a, b, -1) <= 0.125 + 1e-12:
            out.append((a, b))
    out = out[:: max(1, len(out) // (n // 2))][: n // 2]
    return out + [(-a, b) for a, b in out]


def sup_error(f, g, x):
    return float(np.max(np.abs(f.profile(x) - g.profile(x))))


def test_01_counterexample_numerics(criterion):
    with criterion(1, "double-zero counterexample r* and x_zeta"):
        t0 = time.perf_counter()
        r, x = E.solve_double_zero(THETA)
        elapsed = time.perf_counter() - t0
        assert abs(r - R_STAR) < 5e-4
        assert abs(x - X_ZETA) < 5e-3
        assert elapsed < 10


def test_02_phi_fourth_derivative_roots(criterion):
    with criterion(2, "sign changes of the fourth derivative of phi"):
        d4 = F.derivative(F.make_phi(), 4)
        x = np.linspace(0, 2, 20001)
        v = d4.profile(x)
        idx = np.nonzero(np.sign(v[:-1]) * np.sign(v[1:]) < 0)[0]
        roots = x[idx]
        assert len(roots) == 2
        assert abs(roots[0] - 0.441) < 5e-3
        assert abs(roots[1] - 1.462) < 5e-3


def test_03_planted_zero_recovery(criterion):
    with criterion(3, "planted complex zeros and recover_zeta"):
        r, x = E.solve_double_zero(THETA)
        rep = E.find_zeros(F.make_f_zeta(r, THETA))
        nonreal = rep.nonreal_zeros()
        assert len(nonreal) == 4 and all(m == 1 for _, m, _ in nonreal)
        w = r / (2 * math.pi) * np.exp(1j * THETA)
        for target in (w, -w, w.conjugate(), -w.conjugate()):
            assert min(abs(target - z) for z, _, _ in nonreal) < 1e-5
        rho, psi = E.recover_zeta(x)
        assert abs(rho - r) < 1e-4
        assert abs(psi - THETA) < 1e-4


def test_04_transform_golden_values(criterion):
    with criterion(4, "Gaussian, m_alpha*m_alpha and triangle transforms"):
        xi = np.linspace(0, 3, 301)
        g = fourier_radial(F.gaussian(), xi)
        assert np.max(np.abs(g - np.exp(-np.pi * xi**2))) < 1e-8

        xi = np.linspace(4 / 200, 4, 200)
        for alpha in (1, 2):
            for d in (1, 3):
                got = fourier_radial(F.make_m_alpha_sq(alpha, d), xi, method="quadrature")
                ref = m_alpha_hat(alpha, d, xi) ** 2
                # relative error, floored at 1e-9 of the peak: next to the double zeros
                # of ref the relative error of any float evaluation is unbounded
                floor = 1e-9 * m_alpha_hat(alpha, d, 1e-9) ** 2
                assert np.max(np.abs(got - ref) / np.maximum(np.abs(ref), floor)) < 1e-6

        xi = np.linspace(1e-3, 4, 400)
        tri = F.make_indicator_conv(2)
        ref = (np.sin(2 * np.pi * xi) / (np.pi * xi)) ** 2
        for method in ("auto", "quadrature"):
            assert np.max(np.abs(fourier_radial(tri, xi, method=method) - ref)) < 1e-8


def test_05_hermite_region(criterion):
    with criterion(5, "Hermite-4 region boundary and classification"):
        assert abs(float(E.ellipse_q(0.0, 0.0, 1)) - 0.125) < 1e-12
        assert abs(float(E.ellipse_q(-1.0, 1 / 3, 1)) - 0.125) < 1e-12
        B, I, X = E.Region.BOUNDARY, E.Region.INTERIOR, E.Region.EXTERIOR
        assert E.classify_hermite4(0, 0).region is B
        assert E.classify_hermite4(0, Fraction(1, 6)).region is B
        assert E.classify_hermite4(0, 1 / 6).region is B
        assert E.classify_hermite4(0, 0.1).region is I
        assert E.classify_hermite4(-1, Fraction(1, 3)).region is X
        assert E.classify_hermite4(0, 0.25).region is X
        for a in np.linspace(-1, 1, 41):
            for b in np.linspace(-0.25, 0.75, 41):
                # the side of a boundary point flips with a; the region does not
                assert E.classify_hermite4(a, b).region is E.classify_hermite4(-a, b).region


def test_06_certificate_catalogue(criterion):
    with criterion(6, "compact catalogue certificates and a two-atom mixture"):
        for f in (F.make_indicator_conv(2), *(F.make_m_alpha_sq(a, 1) for a in (0, 1, 2))):
            cert = E.certify_compact(f)
            assert cert.status == "EXTREMAL"
            assert not cert.witness["zero_report"].nonreal_zeros()
        mix = E.not_extremal_mixture(F.make_indicator_conv(2), F.ScaleMeasure(((1, 1), (3, 1))))
        assert mix.status == "NOT_EXTREMAL"


def test_07_gneiting_threshold(criterion):
    with criterion(7, "Gneiting criterion thresholds"):
        assert C.check_gneiting(F.exp_pow(1.7)).passed
        assert not C.check_gneiting(F.exp_pow(1.95)).passed
        lo, hi = 1.7, 1.95
        while hi - lo > 1e-5:
            mid = 0.5 * (lo + hi)
            if C.check_gneiting(F.exp_pow(mid)).passed:
                lo = mid
            else:
                hi = mid
        assert abs(0.5 * (lo + hi) - 1.8417) < 5e-3
        assert C.check_gneiting(F.wendland33()).passed
        assert C.check_gneiting(F.linnik(1.5)).passed


def test_08_polya_round_trip(criterion):
    with criterion(8, "Polya measure round trip and examples"):
        kernel = C.polya_kernel()
        rng = np.random.default_rng(2024)
        x = np.linspace(0, 12, 2401)
        for _ in range(5):
            t = np.sort(rng.choice(np.arange(1, 81), size=5, replace=False) / 8)
            m = rng.uniform(0.1, 2.0, size=5)
            f = F.mixture(kernel, F.ScaleMeasure(tuple(zip(t, m))))
            back = F.mixture(kernel, C.recover_polya_measure(f))
            assert sup_error(f, back, x) < 1e-6

        f = F.exp_pow(1.0)  # the Polya mixture with density t exp(-t)
        nu = C.recover_polya_measure(f)
        assert nu.has_density
        back = F.mixture(kernel, nu)
        assert sup_error(f, back, np.linspace(0, 20, 2001)) < 1e-6

        assert C.check_polya(F.exp_pow(0.5)).passed
        assert C.check_polya(F.exp_pow(1.0)).passed
        assert not C.check_polya(F.gaussian()).passed


def _symmetric(report, tol=1e-8):
    pts = [z for z, m, _ in report.zeros for _ in range(m)]
    return all(min(abs(img - w) for w in pts) < tol
               for z in pts for img in (-z, z.conjugate()))


def test_09_property_suites(criterion):
    with criterion(9, "symmetry, scaling, convolution, CM and Gaussian-limit properties"):
        rng = np.random.default_rng(7)
        # zero-set symmetry on random rectangles
        for make in (F.make_phi, F.make_wu, lambda: F.make_f_zeta(4, THETA)):
            w, h = rng.uniform(2.5, 4.5), rng.uniform(1.5, 3.0)
            assert _symmetric(E.find_zeros(make(), (-w, w, -h, h)))

        # certificate status is invariant under scaling
        region = (-4.0, 4.0, -2.0, 2.0)
        for f in (F.make_indicator_conv(2), F.make_f_zeta(4, THETA)):
            base = E.certify_compact(f, region).status
            for lam in (0.5, 2.0):
                scaled = E.certify_compact(F.scale(f, lam), tuple(lam * v for v in region))
                assert scaled.status == base

        # convolution theorem, both sides by quadrature on random pairs
        pool = [F.make_indicator_conv(2), F.make_m_alpha(1), F.make_wu(), F.make_phi()]
        xi = np.sort(rng.uniform(0.01, 3, 40))
        for _ in range(4):
            i, j = rng.integers(0, len(pool), 2)
            f, g = pool[i], pool[j]
            lhs = fourier_radial(F.convolve(f, g), xi, method="quadrature")
            rhs = (fourier_radial(f, xi, method="quadrature")
                   * fourier_radial(g, xi, method="quadrature"))
            floor = 1e-9 * abs(rhs).max()
            assert np.max(np.abs(lhs - rhs) / np.maximum(np.abs(rhs), floor)) < 1e-6

        # completely monotone g gives positive definite g(|x|^2) in every dimension
        assert C.check_completely_monotone(F.exp_pow(1.0)).passed
        assert C.check_completely_monotone(lambda t: np.exp(-math.pi * t)).passed
        for d in (1, 2, 3):
            assert C.check_posdef_fourier(F.exp_pow(1.0, d), n=60).passed
            assert C.check_posdef_fourier(F.gaussian(dim=d), n=60).passed

        # m_lambda approaches the Gaussian after rescaling
        lam = 1e4
        x = np.linspace(0, 3, 601)
        m = F.make_m_alpha(lam)
        err = np.abs(m.profile(math.sqrt(math.pi) * x / math.sqrt(lam)) - np.exp(-math.pi * x**2))
        assert err.max() < 1e-3


def test_10_hermite_certificates(criterion):
    with criterion(10, "certify_hermite against classify_hermite4 and a product"):
        rng = np.random.default_rng(11)
        pts = boundary_points(100)
        center = (0.0, 1 / 12)
        for a, b in pts[:100]:
            s = rng.choice([rng.uniform(0.2, 0.95), rng.uniform(1.05, 1.6)])
            pts.append((center[0] + s * (a - center[0]), center[1] + s * (b - center[1])))
        assert len(pts) == 200
        for a, b in pts:
            boundary = E.classify_hermite4(a, b).region is E.Region.BOUNDARY
            try:
                extremal = E.certify_hermite(F.make_hermite_quartic(a, b)).status == "EXTREMAL"
            except PreconditionError:  # outside the region: not PPD at all
                extremal = False
            assert boundary == extremal, (a, b)

        time_side = [(a, b) for a, b in pts[:100] if a < -0.05]
        (a1, b1), (a2, b2) = time_side[0], time_side[len(time_side) // 2]
        assert E.classify_hermite4(a1, b1).side is E.Side.TIME
        g = F.product(F.make_hermite_quartic(a1, b1), F.make_hermite_quartic(a2, b2))
        assert E.certify_hermite(g).status == "EXTREMAL"
