import json
import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import brentq
from scipy.special import jv

from ppdcone import extremal as E
from ppdcone import funcs as F
from ppdcone.errors import (ContourError, DomainError, NoSolution, PreconditionError,
                            UnsupportedOperation)
from ppdcone.transform import analytic_extension, gaussian_poly_hat

R_STAR = 3.342775


@pytest.fixture(scope="module")
def double_zero():
    return E.solve_double_zero(math.pi / 4)


@pytest.fixture(scope="module")
def zeta_report(double_zero):
    r, _ = double_zero
    return E.find_zeros(F.make_f_zeta(r, math.pi / 4))


def assert_symmetric(report, tol=1e-8):
    pts = [z for z, m, _ in report.zeros for _ in range(m)]
    for z in pts:
        for image in (-z, z.conjugate()):
            assert min(abs(image - w) for w in pts) < tol, (z, image)


# -- zero finding -----------------------------------------------------------------------

def test_triangle_zeros_are_half_integers():
    rep = E.find_zeros(F.make_indicator_conv(2), (-5.25, 5.25, -2, 2))
    assert rep.total_count == 40
    assert len(rep.zeros) == 20
    locs = sorted(z.real for z, _, _ in rep.zeros)
    expected = sorted([k / 2 for k in range(1, 11)] + [-k / 2 for k in range(1, 11)])
    np.testing.assert_allclose(locs, expected, atol=1e-10)
    assert all(m == 2 and c == "REAL" for _, m, c in rep.zeros)
    assert sum(m for _, m, _ in rep.zeros) == rep.total_count


def test_phi_zeros_are_doubled_bessel_zeros():
    rep = E.find_zeros(F.make_phi(), (-5.25, 5.25, -2, 2))
    assert not rep.nonreal_zeros()
    assert all(m == 2 for _, m, _ in rep.zeros)
    # phi_hat is a multiple of (J_{5/2}(2 pi xi) / xi^{5/2})^2
    grid = np.linspace(0.05, 5.25, 4000)
    vals = jv(2.5, 2 * np.pi * grid)
    roots = [brentq(lambda x: jv(2.5, 2 * np.pi * x), a, b)
             for a, b, u, v in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]) if u * v < 0]
    positive = sorted(z.real for z, _, _ in rep.zeros if z.real > 0)
    np.testing.assert_allclose(positive, roots, atol=1e-9)
    assert sum(m for _, m, _ in rep.zeros) == rep.total_count


def test_planted_zeros(double_zero, zeta_report):
    r, _ = double_zero
    target = r / (2 * math.pi) * np.exp(1j * math.pi / 4)
    nonreal = zeta_report.nonreal_zeros()
    assert len(nonreal) == 4 and all(m == 1 for _, m, _ in nonreal)
    for z in (target, -target, target.conjugate(), -target.conjugate()):
        assert min(abs(z - w) for w, _, _ in nonreal) < 1e-6
    assert sum(m for _, m, _ in zeta_report.zeros) == zeta_report.total_count
    assert_symmetric(zeta_report)


@pytest.mark.parametrize("make", [F.make_phi, F.make_wu, lambda: F.make_m_alpha_sq(1, 3),
                                  lambda: F.make_f_zeta(4, math.pi / 4)])
def test_zero_set_symmetry(make):
    rep = E.find_zeros(make(), (-4, 4, -3, 3))
    assert_symmetric(rep)
    # no zero on the imaginary axis away from the origin
    assert all(abs(z.real) > 1e-6 for z, _, _ in rep.zeros)


def test_polished_zeros_are_zeros():
    f = F.make_f_zeta(4, math.pi / 4)
    rep = E.find_zeros(f, (-4, 4, -3, 3))
    scale = abs(analytic_extension(f, 0.0))
    for z, m, _ in rep.zeros:
        assert abs(analytic_extension(f, z)) < 1e-9 * scale


def test_find_zeros_errors():
    with pytest.raises(UnsupportedOperation):
        E.find_zeros(F.gaussian())
    with pytest.raises(DomainError):
        E.find_zeros(F.make_phi(), (1, 0, -1, 1))


def test_contour_through_zero_is_perturbed():
    # the edge Re z = 0.5 passes through a double zero of the triangle transform
    rep = E.find_zeros(F.make_indicator_conv(2), (-0.5, 0.5, -1, 1))
    assert rep.region != (-0.5, 0.5, -1, 1)
    assert rep.total_count == 4


def test_contour_error_after_retries(monkeypatch):
    def always_on_contour(*args, **kwargs):
        raise E._OnContour

    monkeypatch.setattr(E, "_winding", always_on_contour)
    with pytest.raises(ContourError):
        E.find_zeros(F.make_phi(), (-1, 1, -1, 1))


def test_zero_report_json():
    rep = E.find_zeros(F.make_indicator_conv(2), (-1.25, 1.25, -1, 1))
    js = json.loads(json.dumps(rep.to_json()))
    assert set(js) == {"zeros", "region", "total_count"}
    for row in js["zeros"]:
        assert len(row) == 4 and row[3] in ("REAL", "NONREAL") and isinstance(row[2], int)


# -- certificates -----------------------------------------------------------------------

@pytest.mark.parametrize("make", [lambda: F.make_indicator_conv(2),
                                  lambda: F.make_m_alpha_sq(0),
                                  lambda: F.make_m_alpha_sq(1),
                                  lambda: F.make_m_alpha_sq(2)])
def test_certify_catalogue_extremal(make):
    cert = E.certify_compact(make())
    assert cert.status == "EXTREMAL"
    assert cert.reason is E.Reason.ALL_ZEROS_REAL
    assert not cert.witness["zero_report"].nonreal_zeros()
    assert cert.searched_region is not None


def test_certify_f_zeta_r4_inconclusive():
    cert = E.certify_compact(F.make_f_zeta(4, math.pi / 4))
    assert cert.status == "INCONCLUSIVE"
    assert cert.reason is E.Reason.NONREAL_ZEROS
    assert len(cert.witness["zero_report"].nonreal_zeros()) == 4


def test_certify_planted_double_zero(double_zero):
    r, x = double_zero
    cert = E.certify_compact(F.make_f_zeta(r, math.pi / 4))
    assert cert.status == "EXTREMAL"
    assert cert.reason is E.Reason.PLANTED_DOUBLE_ZERO
    assert cert.witness["x_zeta"] == pytest.approx(x, abs=1e-6)


def test_certify_precondition():
    with pytest.raises(PreconditionError):
        E.certify_compact(F.make_f_zeta(3, math.pi / 4))
    with pytest.raises(UnsupportedOperation):
        E.certify_compact(F.gaussian())


@pytest.mark.parametrize("lam", [0.5, 2.0])
@pytest.mark.parametrize("make", [lambda: F.make_indicator_conv(2),
                                  lambda: F.make_f_zeta(4, math.pi / 4)])
def test_certificate_scaling_invariance(make, lam):
    f = make()
    region = (-4.0, 4.0, -2.0, 2.0)
    base = E.certify_compact(f, region)
    scaled = E.certify_compact(F.scale(f, lam), tuple(lam * v for v in region))
    assert scaled.status == base.status


def test_certificate_json():
    cert = E.certify_compact(F.make_indicator_conv(2), (-2.25, 2.25, -1, 1))
    js = json.loads(json.dumps(cert.to_json()))
    assert js["status"] == "EXTREMAL" and js["reason"] == "ALL_ZEROS_REAL"
    assert js["witness"]["zero_report"]["total_count"] == 16
    with pytest.raises(ValueError):
        E.Certificate("MAYBE", E.Reason.UNDECIDED)


# -- mixtures ---------------------------------------------------------------------------

def test_mixture_certificates():
    tri = F.make_indicator_conv(2)
    two = E.not_extremal_mixture(tri, F.ScaleMeasure(((1, 1), (3, 1))))
    assert two.status == "NOT_EXTREMAL" and two.witness["scales"] == [1, 3]
    one = E.not_extremal_mixture(tri, F.ScaleMeasure.dirac(2))
    assert one.status == "INCONCLUSIVE"
    t = np.linspace(1e-3, 40, 4001)
    dens = E.not_extremal_mixture(tri, F.ScaleMeasure((), t, t * np.exp(-t)))
    assert dens.status == "NOT_EXTREMAL"


def test_mixture_precondition():
    with pytest.raises(PreconditionError):
        E.not_extremal_mixture(F.make_hermite_quartic(0.3, 0), F.ScaleMeasure.dirac(1))


# -- Hermite quartics -------------------------------------------------------------------

def boundary_points(n):
    """Points of the boundary of the PPD region, half on each side of a = 0."""
    out = []
    for t in np.linspace(0, 2 * np.pi, 4 * n, endpoint=False):
        b = 0.25 + math.sin(t) / 4
        a = math.cos(t) / math.sqrt(8) - 2 * b
        if a >= 0 and ellipse_ok(a, b):
            out.append((a, b))
    out = out[:: max(1, len(out) // (n // 2))][: n // 2]
    return out + [(-a, b) for a, b in out]


def ellipse_ok(a, b):
    return E.ellipse_q(a, b, -1) <= 0.125 + 1e-12 and E.ellipse_q(a, b, 1) <= 0.125 + 1e-12


def test_classify_examples():
    assert E.classify_hermite4(0, 0).region is E.Region.BOUNDARY
    assert E.classify_hermite4(0, 0).side is E.Side.BOTH
    c = E.classify_hermite4(0, Fraction(1, 6))
    assert c.region is E.Region.BOUNDARY and c.side is E.Side.BOTH
    assert E.classify_hermite4(0, 0.1).region is E.Region.INTERIOR
    assert E.classify_hermite4(-1, Fraction(1, 3)).region is E.Region.EXTERIOR
    assert E.classify_hermite4(0, 0.25).region is E.Region.EXTERIOR
    # the ellipse with s = +1 passes through both (0, 0) and (-1, 1/3)
    assert E.ellipse_q(0, 0, 1) == Fraction(1, 8)
    assert E.ellipse_q(-1, Fraction(1, 3), 1) == Fraction(1, 8)
    assert abs(E.ellipse_q(-1.0, 1 / 3, 1) - 0.125) < 1e-12


def test_classify_symmetry_and_duality():
    for a in np.linspace(-1, 1, 41):
        for b in np.linspace(-0.25, 0.75, 41):
            c, d = E.classify_hermite4(a, b), E.classify_hermite4(-a, b)
            assert c.region == d.region
    for a, b in boundary_points(40):
        c, d = E.classify_hermite4(a, b), E.classify_hermite4(-a, b)
        assert c.region is E.Region.BOUNDARY
        if a > 0:
            assert c.side is E.Side.FREQUENCY and d.side is E.Side.TIME


def test_side_matches_real_double_zeros():
    # time type: f itself has a real double zero; frequency type: its transform does
    for a, b in boundary_points(20):
        if a == 0:
            continue
        f = F.make_hermite_quartic(a, b)
        side = E.classify_hermite4(a, b).side
        x = np.linspace(0, 3, 30001)
        fmin = f.profile(x).min()
        hmin = gaussian_poly_hat(f).profile(x).min()
        if side is E.Side.TIME:
            assert abs(fmin) < 1e-6 and hmin > -1e-12
        else:
            assert abs(hmin) < 1e-6 and fmin > -1e-12


def test_certify_hermite_examples():
    cert = E.certify_hermite(F.make_hermite_quartic(0, Fraction(1, 6)))
    assert cert.status == "EXTREMAL" and cert.reason is E.Reason.REAL_ROOTS_EVEN
    cert = E.certify_hermite(F.make_hermite_quartic(0, 0.1))
    assert cert.status == "NOT_EXTREMAL"
    cert = E.certify_hermite(F.make_hermite_quartic(0, 0))
    assert cert.status == "EXTREMAL" and cert.reason is E.Reason.GAUSSIAN
    with pytest.raises(PreconditionError):
        E.certify_hermite(F.make_hermite_quartic(0, 0.25))
    with pytest.raises(DomainError):
        E.certify_hermite(F.GaussianTimesPoly((1, 0, 1), math.pi))
    with pytest.raises(UnsupportedOperation):
        E.certify_hermite(F.make_phi())


def test_certify_hermite_agrees_with_classifier():
    center = (0.0, 1 / 12)  # interior: both ellipse forms equal 1/12 there
    pts = boundary_points(60)
    probes = pts + [(center[0] + s * (a - center[0]), center[1] + s * (b - center[1]))
                    for a, b in pts[::2] for s in (0.5, 0.9, 1.1)]
    for a, b in probes:
        boundary = E.classify_hermite4(a, b).region is E.Region.BOUNDARY
        try:
            extremal = E.certify_hermite(F.make_hermite_quartic(a, b)).status == "EXTREMAL"
        except PreconditionError:
            extremal = False
        assert boundary == extremal, (a, b)


def test_product_of_time_type_quartics():
    (a1, b1), (a2, b2) = [(a, b) for a, b in boundary_points(20) if a < -0.05][:2]
    assert E.classify_hermite4(a1, b1).side is E.Side.TIME
    g = F.product(F.make_hermite_quartic(a1, b1), F.make_hermite_quartic(a2, b2))
    assert len(g.coeffs) - 1 == 8
    cert = E.certify_hermite(g)
    assert cert.status == "EXTREMAL" and cert.witness["side"] == "TIME"


# -- double-zero solver -----------------------------------------------------------------

def test_solve_double_zero(double_zero):
    r, x = double_zero
    assert abs(r - R_STAR) < 5e-4
    assert abs(x - 1.303) < 5e-3
    f = F.make_f_zeta(r, math.pi / 4)
    assert abs(f.profile(x)) < 1e-8
    assert abs(F.derivative(f, 1).profile(x)) < 1e-6


def test_double_zero_bracketing(double_zero):
    r, _ = double_zero
    grid = np.linspace(1e-4, 1.999, 40001)
    assert F.make_f_zeta(r + 0.1, math.pi / 4).profile(grid).min() > 0
    assert F.make_f_zeta(r - 0.1, math.pi / 4).profile(grid).min() < 0


def test_solve_double_zero_errors():
    with pytest.raises(DomainError):
        E.solve_double_zero(0.0)
    with pytest.raises(NoSolution):
        E.solve_double_zero(math.pi / 4, bracket=(3.5, 4.0))


def test_recover_zeta(double_zero):
    r, x = double_zero
    rho, psi = E.recover_zeta(x)
    assert abs(rho - r) < 1e-4 and abs(psi - math.pi / 4) < 1e-4
    with pytest.raises(NoSolution):
        E.recover_zeta(0.1)
    with pytest.raises(DomainError):
        E.recover_zeta(2.0)


def test_recover_zeta_other_angle():
    r, x = E.solve_double_zero(0.6, bracket=(2.0, 6.0))
    rho, psi = E.recover_zeta(x)
    assert rho == pytest.approx(r, abs=1e-4) and psi == pytest.approx(0.6, abs=1e-4)


def test_zeta_denominator_sign():
    vals = [E.zeta_denominator(x) for x in (0.0, 0.5, 1.0, 1.5, 1.9)]
    assert all(v != 0 for v in vals)
    assert len({np.sign(v) for v in vals}) == 1
