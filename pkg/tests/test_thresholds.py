import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from stripcalc.errors import BadExponent, ZeroDrift
from stripcalc.verifier import AssumptionParams, smoothness_threshold
from stripcalc.verifier.thresholds import as_fraction, exponent_factor

F = Fraction


@pytest.mark.parametrize("n,p,expected", [(1, 1, F(1)), (3, 1, F(2)), (3, F(4, 3), F(1))])
def test_poly_threshold(n, p, expected):
    res = smoothness_threshold(p, variant="poly", n=n, delta=1)
    assert res.s_min == expected
    assert res.s_min == abs(1 / F(p) - F(1, 2)) * (n + 1)


@pytest.mark.parametrize("n", range(1, 8))
def test_poly_threshold_at_p1(n):
    assert smoothness_threshold(1, variant="poly", n=n).s_min == F(n + 1, 2)


@pytest.mark.parametrize("Q,alpha,p", [
    (3, -4, 1), (3, -1, 1), (3, F(-3, 2), 1), (2, 1, F(4, 3)), (2, -1, 3), (5, -7, "inf"),
])
def test_solvable_threshold(Q, alpha, p):
    a = F(alpha)
    sgn = (a + F(Q, 2) > 0) - (a + F(Q, 2) < 0)
    factor = F(1, 2) if p == "inf" else abs(1 / F(p) - F(1, 2))
    expected = factor * max(Q + 1, 3 + sgn)
    assert smoothness_threshold(p, variant="solvable", Q=Q, alpha=alpha).s_min == expected


def test_solvable_example_value():
    assert smoothness_threshold(1, variant="solvable", Q=3, alpha=-4).s_min == 2


def test_solvable_rejects_trivial_character():
    with pytest.raises(ZeroDrift):
        smoothness_threshold(1, variant="solvable", Q=3, alpha=0)


def test_exponent_factor():
    assert exponent_factor(F(4, 3)) == F(1, 4)
    assert exponent_factor(4 / 3) == F(1, 4)
    assert exponent_factor("inf") == exponent_factor(math.inf) == F(1, 2)
    for bad in (2, F(1, 2), 0.5):
        with pytest.raises(BadExponent):
            exponent_factor(bad)


def test_general_threshold():
    res = smoothness_threshold(F(3, 2), AssumptionParams(2, 1, 0, 1, 1))
    assert res.factor == F(1, 6)
    assert res.s_min == 2 * F(1, 6) * max(F(1), F(1), F(3, 2))
    assert res.q == 6 and res.strip_width == F(1, 3)


@pytest.mark.parametrize("kwargs", [dict(beta=1), dict(sigma=F(1, 2)), dict(varpi=-1),
                                    dict(gamma=-1), dict(W=0)])
def test_assumption_params_validation(kwargs):
    with pytest.raises(ValueError):
        AssumptionParams(**kwargs)


def test_as_fraction():
    assert as_fraction("4/3") == F(4, 3)
    assert as_fraction(0.6) == F(3, 5)
    assert as_fraction(2) == F(2)
    with pytest.raises(TypeError):
        as_fraction(object())


exponents = st.fractions(min_value=1, max_value=50).filter(lambda p: p != 2)


@given(exponents)
def test_duality_symmetry(p):
    q = p / (p - 1) if p != 1 else "inf"
    params = AssumptionParams(3, 2, F(1, 2), F(1, 3), 2)
    for variant, kw in [("general", {}), ("poly", dict(n=3)),
                        ("solvable", dict(Q=3, alpha=-1))]:
        a = smoothness_threshold(p, params, variant, **kw)
        b = smoothness_threshold(q, params, variant, **kw)
        assert a.s_min == b.s_min


@given(exponents, exponents)
def test_monotone_towards_two(p1, p2):
    # on [1, 2) the threshold shrinks as p approaches 2
    lo, hi = sorted((p1, p2))
    if hi < 2:
        assert (smoothness_threshold(hi, variant="poly", n=2).s_min
                <= smoothness_threshold(lo, variant="poly", n=2).s_min)
    if lo > 2:
        assert (smoothness_threshold(lo, variant="poly", n=2).s_min
                <= smoothness_threshold(hi, variant="poly", n=2).s_min)
