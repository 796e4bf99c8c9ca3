import io
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from stripcalc.errors import BadRadius, Overflow, QuadratureDivergence, ZeroDrift
from stripcalc.grid import GridFunction
from stripcalc.solvable import (LogValue, SolvableGroup, ball_integral_sweep,
                                char_ball_integral_solvable, classify_character,
                                plancherel_weight, plancherel_weight_norm, regime_normalizer,
                                write_sweep_csv)

RADII = (4, 8, 12, 16)


def test_group_basics():
    G = SolvableGroup(3, -2.0)
    assert G.b_X == 1.0
    assert G.chi(1.0) == pytest.approx(np.exp(-2.0))
    assert G.modular(1.0) == pytest.approx(np.exp(-3.0))
    with pytest.raises(ZeroDrift):
        SolvableGroup(2, 0.0)


@pytest.mark.parametrize("alpha,Q,varpi,sign", [
    (1.0, 2, Fraction(1), 1), (-1.0, 2, Fraction(1, 2), 0), (-2.0, 2, Fraction(0), -1),
    (-1.5, 3, Fraction(1, 2), 0), (-3.0, 3, Fraction(0), -1), (-0.5, 3, Fraction(1), 1),
])
def test_character_regimes(alpha, Q, varpi, sign):
    info = classify_character(alpha, Q)
    assert (info.varpi, info.sign) == (varpi, sign)
    assert info.b_X == abs(alpha) / 2


def test_left_haar_flag():
    assert classify_character(-3.0, 3).left_haar
    assert not classify_character(-2.0, 3).left_haar
    with pytest.raises(ZeroDrift):
        classify_character(0.0, 3)


# Plancherel weight -----------------------------------------------------------------

@pytest.mark.parametrize("Q", [1, 2, 3, 5])
def test_weight_is_continuous_at_one(Q):
    w = plancherel_weight(np.array([1 - 1e-12, 1.0, 1 + 1e-12]), Q)
    assert np.allclose(w, 1.0, atol=1e-10)


def test_weight_exponents():
    assert plancherel_weight(0.5, 1) == pytest.approx(0.125)
    assert plancherel_weight(2.0, 1) == pytest.approx(4.0)
    assert plancherel_weight(2.0, 3) == pytest.approx(16.0)


def test_weight_norm_of_zero():
    assert plancherel_weight_norm(GridFunction.zeros(16.0, 1 / 16), 3) == 0.0


def test_weight_norm_against_quadrature():
    oracle = np.sqrt(integrate.quad(lambda l: np.exp(-2 * l) * l ** 2, 0, 1, epsabs=0)[0]
                     + integrate.quad(lambda l: np.exp(-2 * l) * l ** 3, 1, np.inf, epsabs=0)[0])
    assert plancherel_weight_norm(lambda lam: np.exp(-lam), 3) == pytest.approx(oracle, abs=1e-8)


def test_weight_norm_of_sampled_function():
    F = GridFunction.sample(lambda lam: np.exp(-lam ** 2), 16.0, 1 / 64, "even")
    exact = plancherel_weight_norm(lambda lam: np.exp(-lam ** 2), 2)
    assert plancherel_weight_norm(F, 2) == pytest.approx(exact, rel=1e-8)


def test_weight_norm_rejects_non_decaying_input():
    F = GridFunction.sample(lambda lam: np.ones_like(lam), 8.0, 1 / 16, "even")
    with pytest.raises(QuadratureDivergence):
        plancherel_weight_norm(F, 2)


@settings(max_examples=20, deadline=None)
@given(st.floats(0.1, 1.0), st.integers(1, 4))
def test_weight_norm_monotone_in_modulus(c, Q):
    F = lambda lam: np.exp(-lam ** 2)
    assert plancherel_weight_norm(lambda lam: c * F(lam), Q) <= plancherel_weight_norm(F, Q) * (
        1 + 1e-12)


# ball integrals ---------------------------------------------------------------------

def test_log_value():
    v = LogValue(np.log(1234.5))
    assert v.value == pytest.approx(1234.5)
    assert (v.exponent, round(v.mantissa, 4)) == (3, 1.2345)
    with pytest.raises(Overflow):
        LogValue(1000.0).value


@pytest.mark.parametrize("Q,alpha,r", [(2, -1.0, 2.0), (2, -2.0, 3.0), (3, 0.5, 2.0),
                                        (1, -0.25, 1.5)])
def test_ball_integral_against_double_quadrature(Q, alpha, r):
    # plain form: int_{-r}^{r} exp(alpha u) int_0^{A(u)} s^(Q/2-1) ds du
    A = lambda u: np.exp(u) * (np.cosh(r) - np.cosh(u))
    oracle = integrate.dblquad(lambda s, u: np.exp(alpha * u) * s ** (Q / 2 - 1), -r, r,
                               lambda u: 0.0, A, epsabs=0, epsrel=1e-10)[0]
    got = char_ball_integral_solvable(SolvableGroup(Q, alpha), r, "plain").value
    assert got == pytest.approx(oracle, rel=1e-7)


def test_weighted_form_against_double_quadrature():
    Q, alpha, r = 2, 1.0, 3.0
    A = lambda u: np.exp(u) * (np.cosh(r) - np.cosh(u))
    oracle = integrate.dblquad(lambda s, u: np.exp(alpha * u) / (1 + s), -r, r, lambda u: 0.0, A,
                               epsabs=0, epsrel=1e-10)[0]
    got = char_ball_integral_solvable(SolvableGroup(Q, alpha), r, "weighted").value
    assert got == pytest.approx(oracle, rel=1e-7)


@pytest.mark.parametrize("r", [0.5, 31.0])
def test_radius_range(r):
    with pytest.raises(BadRadius):
        char_ball_integral_solvable(SolvableGroup(2, -1.0), r)


@pytest.mark.parametrize("Q,alpha", [(2, 1.0), (2, -1.0), (2, -2.0), (3, -1.5), (3, -4.0),
                                     (4, 1.0)])
def test_normalized_ratios_are_bounded(Q, alpha):
    ratios = [row.ratio for row in ball_integral_sweep(SolvableGroup(Q, alpha), RADII)]
    assert max(ratios) / min(ratios) < 10


@pytest.mark.parametrize("Q,alpha", [(2, 1.0), (2, -1.0), (2, -2.0), (3, -4.0)])
def test_log_slope_approaches_drift(Q, alpha):
    G = SolvableGroup(Q, alpha)
    d = 0.05
    slope = (char_ball_integral_solvable(G, 16 + d).log
             - char_ball_integral_solvable(G, 16 - d).log) / (2 * d)
    # remove the derivative of the polynomial prefactor (1+r), r or 1
    predicted = (regime_normalizer(G, 16 + d).log - regime_normalizer(G, 16 - d).log) / (2 * d)
    prefactor = predicted - abs(alpha)
    assert slope - prefactor == pytest.approx(abs(alpha), rel=0.05)
    if classify_character(alpha, Q).varpi == 0:
        assert slope == pytest.approx(abs(alpha), rel=0.05)


def test_plain_integral_is_symmetric_and_convex_in_alpha():
    # exp(alpha u) against a kernel that is symmetric under alpha -> -Q - alpha
    Q, r = 2, 8.0
    alphas = np.array([-3.0, -2.0, -1.5, -1.0, -0.5, 0.5, 1.0])
    logs = np.array([char_ball_integral_solvable(SolvableGroup(Q, a), r, "plain").log
                     for a in alphas])
    mirror = {a: l for a, l in zip(alphas, logs)}
    for a in (-3.0, -1.5):
        assert mirror[a] == pytest.approx(mirror[-Q - a], rel=1e-9)
    assert logs.argmin() == list(alphas).index(-Q / 2)


def test_sweep_csv():
    rows = ball_integral_sweep(SolvableGroup(2, -1.0), RADII)
    buf = io.StringIO()
    write_sweep_csv(rows, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "Q,alpha,r,log_I,normalized_ratio,regime"
    assert len(lines) == 5 and lines[1].endswith("varpi=1/2")
