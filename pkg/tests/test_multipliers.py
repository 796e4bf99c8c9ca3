import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from stripcalc.errors import BadExponent, DomainViolation
from stripcalc.verifier import (custom, gaussian, identity, imaginary_power, in_parabola,
                                parabola_map, resolvent_power, strip_width)
from stripcalc.verifier.multipliers import MultiplierSpec


def test_families_on_real_axis():
    x = np.linspace(-5, 5, 101)
    assert np.allclose(imaginary_power(2.0, 1.0)(x), (1 + x ** 2) ** 2j)
    assert np.allclose(resolvent_power(1.5, 2.0)(x), (4 + x ** 2) ** -1.5)
    assert np.allclose(gaussian(2.0)(x), np.exp(-x ** 2 / 4))
    assert np.all(identity()(x) == 1)


def test_validity_and_constructors():
    assert imaginary_power(1.0, 0.5).validity == 0.5
    assert resolvent_power(1.0, 2.0).decay_rate == 2.0
    assert gaussian().validity == np.inf
    for bad in (lambda: imaginary_power(1.0, 0.0), lambda: resolvent_power(1.0, -1.0),
                lambda: MultiplierSpec("nope"), lambda: MultiplierSpec("custom")):
        with pytest.raises(ValueError):
            bad()


def test_on_spectrum_recovers_zeta_power():
    zeta = np.array([1.5, 3.0 + 2.0j, 10.0 - 1.0j])
    M = resolvent_power(1.0, 1.0)
    assert np.allclose(M.on_spectrum(zeta, 1.0), 1 / zeta)


@pytest.mark.parametrize("p,expected", [(1, 1.0), (4 / 3, 0.5), ("inf", 1.0), (4, 0.5)])
def test_strip_width(p, expected):
    assert strip_width(p, 2.0) == pytest.approx(expected)


def test_strip_width_rejects_two():
    with pytest.raises(BadExponent):
        strip_width(2, 1.0)


def test_polynomial_composition_trace():
    # M(zeta) = zeta with b_X = 1: M_X(z) = 1 + z^2
    M = custom(lambda z: 1 + z ** 2)
    tr = parabola_map(M, 4 / 3, 2.0, np.linspace(-3, 3, 13))
    x, y = tr.x, tr.width
    assert np.allclose(tr.upper, 1 + x ** 2 - y ** 2 + 2j * x * y, atol=1e-14)
    assert np.allclose(tr.lower, 1 + x ** 2 - y ** 2 - 2j * x * y, atol=1e-14)


@pytest.mark.parametrize("p", [1, 4 / 3, 1.1, 3, "inf"])
@pytest.mark.parametrize("drift", [0.5, 2.0, 3.0])
def test_strip_boundary_maps_onto_parabola(p, drift):
    tr = parabola_map(gaussian(), p, drift)
    b_X = drift / 2
    assert tr.on_boundary
    assert np.all(in_parabola(tr.image_upper, b_X, tr.width))
    # equality at the vertex
    vertex = tr.image_upper[np.argmin(np.abs(tr.x))]
    assert vertex.real == pytest.approx(b_X ** 2 - tr.width ** 2, abs=1e-14)
    inv_p = 0.0 if p == "inf" else 1 / p
    assert tr.width == pytest.approx(abs(2 * inv_p - 1) * b_X)


def test_p_equals_one_gives_b_X():
    assert parabola_map(gaussian(), 1, 2.0).width == pytest.approx(1.0)


def test_domain_violation():
    with pytest.raises(DomainViolation):
        parabola_map(imaginary_power(1.0, 0.2), 1, 2.0)


@settings(max_examples=50, deadline=None)
@given(st.floats(-30, 30), st.floats(0.0, 0.999), st.floats(0.2, 3.0))
def test_strip_interior_lands_inside_parabola(x, frac, b_X):
    W = b_X * 0.8
    zeta = b_X ** 2 + (x + 1j * frac * W) ** 2
    assert in_parabola(np.array([zeta]), b_X, W)[0]


def test_point_left_of_vertex_is_outside():
    assert not in_parabola(np.array([-1.0 + 0j]), 1.0, 0.5)[0]


def test_boundary_sup():
    M = imaginary_power(1.0, 2.0)
    # |(b^2 + z^2)^{i}| = exp(-arg(b^2 + z^2)) on the line Im z = W
    W = 0.5
    x = np.linspace(-200, 200, 4001)
    expected = np.max(np.exp(-np.angle(4 + (x + 1j * W) ** 2)))
    assert M.boundary_sup(W) == pytest.approx(expected)
