import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate, special

from stripcalc.errors import QuadratureDivergence, SupportViolation, UnstableConjugation
from stripcalc.euclid import (CartesianField, EuclidGroup, apply_multiplier, char_ball_integral,
                              drift_kernel, finite_propagation_check, heat_kernel,
                              kernel_of_multiplier, plancherel_check, sphere_area)
from stripcalc.grid import GridFunction, SpectralObject
from stripcalc.paley_wiener import bump


def test_group_basics():
    G = EuclidGroup(2, (3.0, 4.0))
    assert G.drift_norm == 5.0 and G.b_X == 2.5
    assert (G.d0, G.d_inf, G.delta) == (2, 2, 1)
    assert G.chi(np.array(1.0), np.array(0.0)) == pytest.approx(np.e ** 3)
    assert EuclidGroup(3).v == (0.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        EuclidGroup(2, (1.0,))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-3, 3), min_size=2, max_size=2),
       st.lists(st.floats(-5, 5), min_size=2, max_size=2))
def test_character_bound(v, x):
    G = EuclidGroup(2, tuple(v))
    assert G.chi(*map(np.array, x)) <= np.exp(G.drift_norm * np.hypot(*x)) * (1 + 1e-12)


# radial kernels --------------------------------------------------------------------

@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("t", [0.1, 1.0])
def test_heat_kernel_matches_closed_form(n, t):
    r = np.linspace(0, 6 * np.sqrt(t), 61)
    k = kernel_of_multiplier(lambda lam: np.exp(-t * lam ** 2), n, r).values
    exact = (4 * np.pi * t) ** (-n / 2) * np.exp(-r ** 2 / (4 * t))
    assert np.allclose(k.real, exact, rtol=1e-6, atol=0)
    assert np.allclose(heat_kernel(r, t, n), exact, rtol=1e-14)


def test_kernel_from_grid_function():
    F = GridFunction.sample(lambda lam: np.exp(-lam ** 2), 16.0, 1 / 32, "even")
    r = np.linspace(0, 8, 33)
    k = kernel_of_multiplier(F, 1, r).values
    assert np.allclose(k.real, np.exp(-r ** 2 / 4) / (2 * np.sqrt(np.pi)), rtol=1e-6)


def test_kernel_of_zero():
    k = kernel_of_multiplier(GridFunction.zeros(8.0, 1 / 16), 2, np.linspace(0, 3, 7))
    assert not k.values.any()


def test_kernel_requires_decay():
    F = GridFunction.sample(lambda lam: np.ones_like(lam), 8.0, 1 / 16, "even")
    with pytest.raises(QuadratureDivergence):
        kernel_of_multiplier(F, 1, [0.0, 1.0])


@pytest.mark.parametrize("t", [0.1, 1.0])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_heat_kernel_has_unit_mass(n, t):
    r = np.linspace(0, 12 * np.sqrt(t), 2001)
    k = kernel_of_multiplier(lambda lam: np.exp(-t * lam ** 2), n, r).values.real
    mass = integrate.simpson(k * sphere_area(n) * r ** (n - 1), x=r)
    assert mass == pytest.approx(1.0, abs=1e-8)


# kernels with drift -----------------------------------------------------------------

def test_drift_kernel_without_drift_is_radial_kernel():
    F = lambda lam: np.exp(-lam ** 2)
    field = drift_kernel(F, EuclidGroup(1), half_width=4.0, step=1 / 8)
    k = kernel_of_multiplier(F, 1, np.abs(field.axes[0])).values
    assert np.array_equal(field.values, k)
    assert np.allclose(field.values, field.values[::-1], rtol=0, atol=1e-16)


def test_drift_kernel_closed_form():
    field = drift_kernel(lambda lam: np.exp(-lam ** 2), EuclidGroup(1, (2.0,)), 6.0, 1 / 16)
    x = field.axes[0]
    exact = np.exp(-x) * np.exp(-x ** 2 / 4) / (2 * np.sqrt(np.pi))
    assert np.allclose(field.values.real, exact, rtol=1e-8, atol=0)


def test_drift_kernel_mass_against_weighted_quadrature():
    G = EuclidGroup(1, (2.0,))
    field = drift_kernel(lambda lam: np.exp(-lam ** 2), G, 16.0, 1 / 32)
    x = field.axes[0]
    mass = integrate.simpson(field.values.real * G.chi(x), x=x)
    k = lambda s: np.exp(-s ** 2 / 4) / (2 * np.sqrt(np.pi))
    oracle = integrate.quad(lambda s: np.exp(s) * k(s), -40, 40, epsabs=0, epsrel=1e-13,
                            limit=200)[0]
    assert mass == pytest.approx(oracle, rel=1e-9)
    assert oracle == pytest.approx(np.e, rel=1e-12)  # exp(|v|^2/4) for the heat kernel at t=1


def test_drift_kernel_two_dimensions():
    G = EuclidGroup(2, (1.0, 0.0))
    field = drift_kernel(lambda lam: np.exp(-lam ** 2), G, 3.0, 1 / 4)
    x, y = field.mesh()
    exact = np.exp(-x / 2) * np.exp(-(x ** 2 + y ** 2) / 4) / (4 * np.pi)
    assert np.allclose(field.values.real, exact, rtol=1e-6, atol=0)


# finite propagation --------------------------------------------------------------------

@pytest.mark.parametrize("r", [1, 2, 4])
def test_finite_propagation_for_triangle(r):
    F = SpectralObject.from_fourier(lambda xi: np.maximum(1 - np.abs(xi) / r, 0), 64.0, 1 / 16,
                                    ((-r, r),))
    rep = finite_propagation_check(F, r)
    assert rep.passed and rep.leaked_fraction < 1e-6
    # the bulk of the kernel fills the ball: support radius scales linearly with r
    assert r * (1 - rep.eps) <= rep.support_radius <= r * (1 + rep.eps)


def test_finite_propagation_rejects_unbounded_support():
    F = SpectralObject.from_fourier(lambda xi: np.exp(-xi ** 2), 32.0, 1 / 16)
    with pytest.raises(SupportViolation):
        finite_propagation_check(F, 2.0)


def test_finite_propagation_in_two_dimensions():
    F = SpectralObject.from_fourier(lambda xi: bump(xi / 2), 64.0, 1 / 16, ((-2.0, 2.0),))
    assert finite_propagation_check(F, 2.0, n=2).passed


# Plancherel ----------------------------------------------------------------------------

def test_plancherel_gaussian_closed_form():
    rep = plancherel_check(lambda lam: np.exp(-lam ** 2), 1)
    # spectral side: (int_0^inf exp(-2 lam^2) dlam / pi)^(1/2)
    assert rep.spectral_norm == pytest.approx((1 / (8 * np.pi)) ** 0.25, rel=1e-12)
    assert rep.kernel_norm == pytest.approx(rep.spectral_norm, rel=1e-6)


def test_plancherel_zero():
    rep = plancherel_check(GridFunction.zeros(8.0, 1 / 16), 1)
    assert rep.kernel_norm == rep.spectral_norm == 0.0


@pytest.mark.parametrize("n", [1, 2, 3])
def test_plancherel_scaling(n):
    F = lambda lam: np.exp(-lam ** 2) * (1 + lam ** 2)
    a = plancherel_check(F, n)
    b = plancherel_check(lambda lam: F(lam / 2), n)
    assert b.spectral_norm / a.spectral_norm == pytest.approx(2 ** (n / 2), rel=1e-10)
    assert b.kernel_norm == pytest.approx(b.spectral_norm, rel=1e-6)


# ball integrals ------------------------------------------------------------------------

def test_ball_integral_closed_form():
    assert char_ball_integral(EuclidGroup(1, (1.0,)), 2.0) == pytest.approx(2 * np.sinh(2),
                                                                            rel=1e-8)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_ball_integral_without_drift_is_volume(n):
    vol = np.pi ** (n / 2) / special.gamma(n / 2 + 1) * 1.7 ** n
    assert char_ball_integral(EuclidGroup(n), 1.7) == pytest.approx(vol, rel=1e-10)


def test_ball_integral_growth_in_plane():
    G = EuclidGroup(2, (0.6, 0.8))
    ratios = [char_ball_integral(G, r) / (r * np.exp(r)) for r in (2, 4, 8, 16)]
    assert max(ratios) / min(ratios) < 10
    assert all(b <= a for a, b in zip(ratios, ratios[1:]))


def test_ball_integral_against_cartesian_quadrature():
    G = EuclidGroup(2, (1.0, 0.0))
    oracle = integrate.dblquad(lambda y, x: np.exp(x), -2, 2, lambda x: -np.sqrt(4 - x * x),
                               lambda x: np.sqrt(4 - x * x), epsabs=0, epsrel=1e-12)[0]
    assert char_ball_integral(G, 2.0) == pytest.approx(oracle, rel=1e-9)


# applying multipliers -------------------------------------------------------------------

def _bump_field(n=1, half=4.0, step=1 / 16, center=0.0):
    return CartesianField.on_box(lambda *c: np.exp(-4 * sum((ci - center) ** 2 for ci in c)),
                                 half, step, n)


@pytest.mark.parametrize("v", [(0.0,), (2.0,), (-1.0,)])
def test_identity_multiplier(v):
    g = _bump_field()
    out = apply_multiplier(lambda lam: np.ones_like(lam), g, EuclidGroup(1, v))
    assert np.abs(out.values - g.values).max() < 1e-10


def test_no_drift_is_plain_fourier_multiplier():
    g = _bump_field(2, 3.0, 1 / 8)
    M = lambda lam: 1 / (1 + lam ** 2)
    out = apply_multiplier(M, g, EuclidGroup(2))
    fx = [2 * np.pi * np.fft.fftfreq(a.size, a[1] - a[0]) for a in g.axes]
    X, Y = np.meshgrid(*fx, indexing="ij")
    ref = np.fft.ifft2(np.fft.fft2(g.values) * M(np.hypot(X, Y)))
    assert np.abs(out.values - ref).max() < 1e-14


def test_multiplier_matches_kernel_convolution():
    G = EuclidGroup(1, (2.0,))
    g = _bump_field(1, 12.0, 1 / 32, center=0.0)
    g = g.with_values(np.where(np.abs(g.axes[0]) <= 2, g.values, 0))
    out = apply_multiplier(lambda lam: np.exp(-lam ** 2), g, G)
    x = out.axes[0]
    # against Lebesgue measure F(D_X) convolves with k_X(u) = exp(-<v,u>/2) k(u)
    k = lambda u: np.exp(-u ** 2 / 4) / (2 * np.sqrt(np.pi))
    y = g.axes[0]
    sel = np.abs(x) <= 6
    ref = (np.exp(-(x[sel, None] - y)) * k(x[sel, None] - y) * g.values).sum(1)
    ref *= y[1] - y[0]
    assert np.abs(out.values[sel] - ref).max() < 1e-8 * np.abs(ref).max()


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2 ** 31 - 1), st.floats(-2.0, 2.0))
def test_contraction_in_weighted_l2(seed, v):
    rng = np.random.default_rng(seed)
    G = EuclidGroup(1, (v,))
    x = np.arange(-128, 129) / 16
    vals = rng.standard_normal(x.size) * np.exp(-x ** 2 / 4)
    g = CartesianField((x,), np.where(np.abs(x) < 3, vals, 0.0))
    M = lambda lam: np.exp(1j * np.log1p(lam ** 2)) / (1 + 0.1 * lam ** 2)
    out = apply_multiplier(M, g, G, pad=8.0)
    w_in = np.sum(np.abs(g.values) ** 2 * G.chi(x))
    xo = out.axes[0]
    w_out = np.sum(np.abs(out.values) ** 2 * G.chi(xo))
    assert w_out <= w_in * (1 + 1e-10)


def test_conjugation_guard():
    g = CartesianField.on_box(lambda x: np.ones_like(x), 20.0, 1 / 8)
    with pytest.raises(UnstableConjugation):
        apply_multiplier(lambda lam: np.exp(-lam ** 2), g, EuclidGroup(1, (4.0,)))
