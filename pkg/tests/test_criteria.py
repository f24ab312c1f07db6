import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ppdcone import criteria as C
from ppdcone import funcs as F
from ppdcone.errors import DomainError, PreconditionError
from ppdcone.transform import fourier_radial


def parabola():
    """``1 - x^2`` as a black box: not positive definite."""
    return F.Analytic(lambda r: 1.0 - r * r, name="parabola", integrable=False)


# -- nonnegativity ----------------------------------------------------------------------

def test_nonneg_examples():
    assert C.check_nonneg(F.make_phi()).passed
    assert C.check_nonneg(F.gaussian()).passed
    v = C.check_nonneg(F.make_f_zeta(3, math.pi / 4))
    assert not v.passed
    assert 0 < v.witness_x < 2 and v.witness_value < 0
    with pytest.raises(DomainError):
        C.check_nonneg(F.make_phi(), tol=0)


def test_nonneg_witness_is_the_minimum():
    # f_zeta at r = 3 dips below zero between its two roots; the witness is the refined minimum
    f = F.make_f_zeta(3, math.pi / 4)
    v = C.check_nonneg(f)
    x = np.linspace(0, 2, 200001)
    assert v.witness_value <= f.profile(x).min() + 1e-15


# -- positive definiteness --------------------------------------------------------------

def test_posdef_fourier_examples():
    assert C.check_posdef_fourier(F.make_wu()).passed
    assert C.check_posdef_fourier(F.make_m_alpha_sq(1, 1)).passed
    v = C.check_posdef_fourier(F.make_hermite_quartic(0, 0.25))
    assert not v.passed and v.witness_value < 0
    # the witness is a genuine negative value of the transform: f_{0,1/4} is its own transform
    assert F.make_hermite_quartic(0, 0.25).profile(v.witness_x) < 0


def test_posdef_gram_examples():
    assert C.check_posdef_gram(F.gaussian(), n=8, trials=100).passed
    assert C.check_posdef_gram(F.make_indicator_conv(2), n=8, trials=100).passed
    v = C.check_posdef_gram(parabola(), n=4, trials=100, seed=1)
    assert not v.passed
    assert "seed=1" in v.notes


def test_parabola_three_point_counterexample():
    # independent oracle: points 0, 1, 2 give the Gram matrix [[1,0,-3],[0,1,0],[-3,0,1]]
    pts = np.array([0.0, 1.0, 2.0])
    gram = parabola().profile(np.abs(pts[:, None] - pts[None, :]))
    assert np.linalg.eigvalsh(gram)[0] == pytest.approx(-2.0)


def test_gram_is_reproducible():
    a = C.check_posdef_gram(parabola(), n=4, trials=20, seed=7)
    b = C.check_posdef_gram(parabola(), n=4, trials=20, seed=7)
    assert a == b
    with pytest.raises(DomainError):
        C.check_posdef_gram(F.gaussian(), n=1)


CATALOGUE = [
    ("triangle", lambda: F.make_indicator_conv(2)),
    ("wu", F.make_wu),
    ("phi", F.make_phi),
    ("m0sq", lambda: F.make_m_alpha_sq(0)),
    ("m1sq", lambda: F.make_m_alpha_sq(1)),
    ("m2sq", lambda: F.make_m_alpha_sq(2)),
    ("gaussian", F.gaussian),
    ("hermite_inside", lambda: F.make_hermite_quartic(0, 0.1)),
    ("wendland33", F.wendland33),
    ("linnik1", lambda: F.linnik(1.0)),
    ("exp_pow0.5", lambda: F.exp_pow(0.5)),
    ("exp_pow1", lambda: F.exp_pow(1.0)),
    ("exp_pow1.5", lambda: F.exp_pow(1.5)),
    ("exp_pow2", lambda: F.exp_pow(2.0)),
]


@pytest.mark.parametrize("name, make", CATALOGUE, ids=[c[0] for c in CATALOGUE])
def test_catalogue_is_positive_definite(name, make):
    f = make()
    assert C.check_posdef_fourier(f).passed
    assert C.check_posdef_gram(f, n=8, trials=50).passed
    assert C.check_nonneg(f).passed


# -- Polya ------------------------------------------------------------------------------

def test_polya_examples():
    assert C.check_polya(F.make_indicator_conv(2)).passed
    assert C.check_polya(F.exp_pow(1.0)).passed
    assert C.check_polya(F.exp_pow(0.5)).passed
    v = C.check_polya(F.gaussian())
    assert not v.passed
    # convexity breaks left of the inflection point x^2 = 1/(2 pi)
    assert v.witness_x < 1 / math.sqrt(2 * math.pi) + 1e-3
    with pytest.raises(DomainError):
        C.check_polya(F.gaussian(dim=2))


def test_polya_rejects_increasing_and_nonvanishing():
    assert not C.check_polya(F.make_hermite_quartic(0.3, 0)).passed
    assert not C.check_polya(F.Analytic(lambda r: 1 / (1 + r) + 1, name="plus_one")).passed


def test_recover_triangle_single_atom():
    nu = C.recover_polya_measure(F.make_indicator_conv(2))
    assert not nu.has_density
    (t, m), = nu.atoms
    assert t == pytest.approx(2) and m == pytest.approx(2)
    f = F.mixture(C.polya_kernel(), nu)
    x = np.linspace(0, 3, 301)
    np.testing.assert_allclose(f.profile(x), F.make_indicator_conv(2).profile(x), atol=1e-10)


def test_recover_exponential_density():
    nu = C.recover_polya_measure(F.exp_pow(1.0))
    assert nu.has_density
    t = np.array([0.5, 1.0, 3.0])
    np.testing.assert_allclose(np.interp(t, nu.grid, nu.values), t * np.exp(-t), rtol=1e-6)
    f = F.mixture(C.polya_kernel(), nu)
    x = np.linspace(0, 20, 401)
    assert np.max(np.abs(f.profile(x) - np.exp(-x))) < 1e-6


def test_recover_requires_polya():
    with pytest.raises(PreconditionError):
        C.recover_polya_measure(F.gaussian())


@settings(max_examples=20, deadline=None)
@given(st.lists(st.tuples(st.integers(1, 40), st.integers(1, 20)), min_size=1, max_size=5,
                unique_by=lambda p: p[0]))
def test_polya_atom_round_trip(pairs):
    atoms = tuple((k / 8, m / 4) for k, m in pairs)
    f = F.mixture(C.polya_kernel(), F.ScaleMeasure(atoms))
    nu = C.recover_polya_measure(f)
    got = sorted(nu.atoms)
    want = sorted(atoms)
    assert len(got) == len(want)
    for (t1, m1), (t2, m2) in zip(got, want):
        assert t1 == pytest.approx(t2, abs=1e-8) and m1 == pytest.approx(m2, abs=1e-8)


def test_polya_spectral_density_matches_transform():
    nu = F.ScaleMeasure(((1.0, 1.0), (2.5, 0.5)))
    f = F.mixture(C.polya_kernel(), nu)
    xi = np.linspace(0, 3, 31)
    np.testing.assert_allclose(C.polya_spectral_density(nu, xi), fourier_radial(f, xi), atol=1e-12)


# -- Gneiting ---------------------------------------------------------------------------

def test_gneiting_examples():
    assert C.check_gneiting(F.wendland33()).passed
    assert C.check_gneiting(F.exp_pow(1.7)).passed
    assert not C.check_gneiting(F.exp_pow(1.95)).passed
    assert C.check_gneiting(F.linnik(1.5)).passed


def test_gneiting_closed_form_of_h():
    # h(t) for exp(-x^beta) computed by hand
    beta = 1.5
    h = C.gneiting_function(F.exp_pow(beta))
    t = np.array([0.04, 0.7, 3.0])
    x = np.sqrt(t)
    d1 = -beta * x ** (beta - 1) * np.exp(-x**beta)
    d2 = (beta**2 * x ** (2 * beta - 2) - beta * (beta - 1) * x ** (beta - 2)) * np.exp(-x**beta)
    np.testing.assert_allclose(h(t), (x * d2 - d1) / t, rtol=1e-12)


def test_gneiting_piecewise_h_is_exact():
    w = F.wendland33()
    h = C.gneiting_function(w)
    # wendland33 = 1 - 6x^2 + 8x^3 - 3x^4, so h = 24 - 24 x on (0, 1)
    t = np.array([0.01, 0.25, 0.81])
    np.testing.assert_allclose(h(t), 24 - 24 * np.sqrt(t), rtol=1e-14)


def test_gneiting_wu_itself_passes():
    assert C.check_gneiting(F.make_wu()).passed


@pytest.mark.parametrize("make", [F.wendland33, lambda: F.exp_pow(1.7), lambda: F.linnik(1.5),
                                  F.make_wu])
def test_gneiting_implies_ppd(make):
    f = make()
    assert C.check_gneiting(f).passed
    assert C.check_posdef_fourier(f, n=50).passed
    assert C.check_nonneg(f).passed


# -- complete monotonicity --------------------------------------------------------------

def test_cm_examples():
    assert C.check_completely_monotone(lambda t: np.exp(-t)).passed
    assert C.check_completely_monotone(F.inverse_multiquadric(1.0, 0.5)).passed
    v = C.check_completely_monotone(lambda t: t)
    assert not v.passed and v.witness_x is not None
    with pytest.raises(DomainError):
        C.check_completely_monotone(lambda t: np.exp(-t), order_cap=9)


def test_cm_derivative_routes_agree():
    # analytic derivatives, Cauchy integrals and finite differences on the same function
    g = F.exp_pow(1.0)  # g(t) = exp(-sqrt(t))
    analytic = C.check_completely_monotone(g, order_cap=4)
    cauchy = C.check_completely_monotone(lambda t: np.exp(-np.sqrt(t)), order_cap=4)
    real_only = C.check_completely_monotone(lambda t: np.exp(-np.sqrt(np.asarray(t, dtype=float))),
                                            order_cap=3, tol=1e-3)
    assert analytic.passed and cauchy.passed and real_only.passed
    assert "analytic" in analytic.notes and "Cauchy" in cauchy.notes
    assert "central" in real_only.notes


def test_cm_detects_non_monotone_oscillation():
    assert not C.check_completely_monotone(lambda t: np.exp(-t) * (2 + np.cos(t))).passed


CM_CASES = [
    # (g on (0, inf), radial f(x) = g(|x|^2), dimension)
    *[(F.exp_pow(1.0), lambda d: F.exp_pow(1.0, d), d) for d in (1, 2, 3)],
    *[(lambda t: np.exp(-math.pi * t), lambda d: F.gaussian(dim=d), d) for d in (1, 2, 3)],
    # power-law tails: the transform covers d = 1 and 3 only
    *[(F.inverse_multiquadric(1.0, 2.0), lambda d: F.inverse_multiquadric(1.0, 2.0, d), d)
      for d in (1, 3)],
]


@pytest.mark.parametrize("g, make, d", CM_CASES)
def test_cm_implies_posdef_in_every_dimension(g, make, d):
    assert C.check_completely_monotone(g).passed
    assert C.check_posdef_fourier(make(d), n=60).passed


# -- verdict plumbing -------------------------------------------------------------------

def test_verdict_json_and_invariants():
    v = C.check_nonneg(F.make_f_zeta(3, math.pi / 4))
    js = v.to_json()
    assert set(js) == {"passed", "witness_x", "witness_value", "margin", "notes"}
    assert js["passed"] is False
    with pytest.raises(ValueError):
        C.Verdict(False)
    assert math.isfinite(C.Verdict(True, margin=-math.inf).margin)
