import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from stripcalc.errors import BadRadius
from stripcalc.euclid import CartesianField, EuclidGroup
from stripcalc.verifier.atoms import (atom_invariants, atom_suite, bmo_norm, h1_atomwise_bound,
                                      hormander_constants, l1_mu, make_atom)
from stripcalc.verifier.multipliers import identity, imaginary_power

FLAT = EuclidGroup(1, (0.0,))
DRIFT = EuclidGroup(1, (2.0,))
SEED = 20240101


@pytest.fixture(scope="module")
def suite():
    return atom_suite(DRIFT, 20, seed=SEED)


def test_step_atom_by_hand():
    a = make_atom("standard", 0.0, 1.0, FLAT, profile="steps")
    # 129 samples of step 1/64 on [-1, 1]; sign profile, mean already zero
    assert a.mu_ball == pytest.approx(129 / 64)
    top = 1 / np.sqrt(2 * 129 / 64)
    assert top == pytest.approx(0.498058, abs=1e-6)
    x = a.field.axes[0]
    np.testing.assert_allclose(a.field.values.real, top * np.sign(x), atol=1e-15)
    # continuum limit: +-1/2 on the two halves of [-1, 1]
    assert abs(top - 0.5) < 1 / 64


def test_suite_invariants():
    for G in (FLAT, DRIFT, EuclidGroup(2, (1.0, -0.5))):
        count = 100 if G.n == 1 else 20
        for a in atom_suite(G, count, seed=SEED):
            inv = atom_invariants(a, G)
            assert inv.support_ok
            assert inv.l2_ratio <= 1 + 1e-10
            if a.kind == "standard":
                assert inv.mean <= 1e-10


def test_global_atoms_keep_their_mean():
    a = make_atom("global", 0.5, 1.0, DRIFT)
    assert atom_invariants(a, DRIFT).mean > 0.1


@pytest.mark.parametrize("radius", [0.0, -1.0, 1.5])
def test_bad_radius(radius):
    with pytest.raises(BadRadius):
        make_atom("standard", 0.0, radius, FLAT)


def test_bad_arguments():
    with pytest.raises(ValueError):
        make_atom("other", 0.0, 1.0, FLAT)
    with pytest.raises(ValueError):
        make_atom("standard", (0.0, 0.0), 1.0, FLAT)
    with pytest.raises(ValueError):
        make_atom("standard", 0.0, 1.0, FLAT, profile="zigzag")


@settings(max_examples=25, deadline=None)
@given(st.floats(-3, 3), st.floats(0.05, 1.0), st.floats(-2, 2))
def test_atom_l1_bounded_by_one(center, radius, v):
    # Cauchy-Schwarz: ||a||_1 <= ||a||_2 mu(B)^(1/2) <= 1
    G = EuclidGroup(1, (v,))
    a = make_atom("standard", center, radius, G, profile="bumps")
    assert l1_mu(a.field, G) <= 1 + 1e-10


def test_identity_bound(suite):
    b = h1_atomwise_bound(identity(), DRIFT, suite)
    assert b.suite_sup <= 1 + 1e-8
    assert b.hormander.N2 == pytest.approx(0.0, abs=1e-12)
    assert b.hormander.N1 < 1e-8


@pytest.mark.parametrize("gamma, expected", [(0.5, 2.3534308776960797),
                                             (1.0, 3.391220850898214),
                                             (2.0, 5.365658270868859)])
def test_imaginary_power_regression(suite, gamma, expected):
    b = h1_atomwise_bound(imaginary_power(gamma, 2.0), DRIFT, suite, constants=False)
    assert b.suite_sup == pytest.approx(expected, rel=1e-6)


def test_bound_grows_with_gamma(suite):
    sups = [h1_atomwise_bound(imaginary_power(g, 2.0), DRIFT, suite, constants=False).suite_sup
            for g in (0.5, 1.0, 2.0, 4.0)]
    assert all(a < b for a, b in zip(sups, sups[1:]))


def test_hormander_constants_finite():
    c = hormander_constants(imaginary_power(1.0, 2.0), DRIFT)
    assert np.isfinite(c.N1) and c.N1 > 0
    assert np.isfinite(c.N2)


def _line(step=1 / 256, half=4.0):
    m = int(round(half / step))
    return step * np.arange(-m, m + 1)


def test_bmo_zero():
    x = _line()
    assert bmo_norm(CartesianField((x,), np.zeros(x.size, complex)), DRIFT).value == 0.0


@pytest.mark.parametrize("G", [FLAT, DRIFT])
def test_bmo_constant(G):
    x = _line()
    res = bmo_norm(CartesianField((x,), np.ones(x.size, complex)), G)
    assert res.oscillation == pytest.approx(0.0, abs=1e-12)
    assert res.local_l2 == pytest.approx(1.0)


@pytest.mark.parametrize("step", [1 / 256, 1 / 1024])
def test_bmo_sign(step):
    # for +-1 on the two halves of a ball the weighted variance is 1 - m^2 <= 1,
    # with equality for balanced halves, so the norm tends to 1 + 1
    x = _line(step)
    res = bmo_norm(CartesianField((x,), np.sign(x).astype(complex)), DRIFT)
    assert res.local_l2 == pytest.approx(1.0)
    assert 2 - step < res.value <= 2


def test_bmo_explicit_radii():
    x = _line(1 / 64)
    g = CartesianField((x,), np.sign(x).astype(complex))
    full = bmo_norm(g, FLAT)
    small = bmo_norm(g, FLAT, radii=[1 / 32])
    assert small.oscillation <= full.oscillation + 1e-15
    assert small.local_l2 == full.local_l2
