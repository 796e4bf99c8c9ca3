"""Smoothness thresholds for ``L^p`` boundedness, in exact rational arithmetic."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real
from typing import NamedTuple

from ..errors import BadExponent

__all__ = ["AssumptionParams", "ThresholdResult", "smoothness_threshold", "as_fraction",
           "exponent_factor"]


def as_fraction(x) -> Fraction:
    """Exact rational for ints, Fractions, decimal strings like ``"4/3"`` or ``"1.5"``.

    Floats are rounded to the nearest fraction with denominator at most ``10^6``,
    so ``4/3`` typed as a float still maps to ``Fraction(4, 3)``.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, Real):
        return Fraction(float(x)).limit_denominator(10 ** 6)
    raise TypeError(f"cannot convert {x!r} to a fraction")


@dataclass(frozen=True)
class AssumptionParams:
    """Exponents of the kernel assumptions.

    Attributes
    ----------
    beta : Lebesgue exponent of the assumptions, ``>= 2``.
    sigma : smoothness, ``> 1/beta``.
    varpi : kernel growth exponent, ``>= 0``.
    gamma : Plancherel weight exponent, ``>= 0``.
    W : strip half width, ``> 0``.
    """

    beta: Fraction | float = 2
    sigma: Fraction | float = 1
    varpi: Fraction | float = 0
    gamma: Fraction | float = 1
    W: Fraction | float = 1

    def __post_init__(self) -> None:
        for name in ("beta", "sigma", "varpi", "gamma", "W"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        if self.beta < 2:
            raise ValueError("beta must be >= 2")
        if self.sigma <= 1 / self.beta:
            raise ValueError("sigma must exceed 1/beta")
        if self.varpi < 0 or self.gamma < 0:
            raise ValueError("varpi and gamma must be non-negative")
        if self.W <= 0:
            raise ValueError("W must be positive")


class ThresholdResult(NamedTuple):
    s_min: Fraction  # strict lower bound on the smoothness
    factor: Fraction  # |1/p - 1/2|
    q: Fraction | None  # with 1/q = |2/p - 1| / beta (general variant only)
    strip_width: Fraction | None  # |2/p - 1| W (general variant only)


def _inverse_p(p) -> Fraction:
    if isinstance(p, float) and math.isinf(p) or p == "inf":
        return Fraction(0)
    pf = as_fraction(p)
    if pf < 1:
        raise BadExponent(f"p must lie in [1, inf], got {p!r}")
    return 1 / pf


def exponent_factor(p) -> Fraction:
    """``|1/p - 1/2|``; raises :class:`BadExponent` for ``p = 2`` or ``p < 1``."""
    inv = _inverse_p(p)
    if inv == Fraction(1, 2):
        raise BadExponent("p = 2 is excluded: every bounded function is an L^2 multiplier")
    return abs(inv - Fraction(1, 2))


def _sgn(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def smoothness_threshold(p, params: AssumptionParams | None = None, variant: str = "general",
                         *, n: int | None = None, d0: int | None = None,
                         d_inf: int | None = None, delta=1, Q: int | None = None,
                         alpha=None) -> ThresholdResult:
    """Smoothness threshold ``s_min`` for the given exponent.

    Variants
    --------
    ``general``:  ``2 |1/p-1/2| max{sigma, varpi+1, gamma+1/beta}``
    ``poly``:     ``|1/p-1/2| max{d0, d_inf - delta + 2}`` (``n`` sets ``d0 = d_inf``)
    ``solvable``: ``|1/p-1/2| max{Q+1, 3 + sgn(alpha + Q/2)}``
    """
    factor = exponent_factor(p)
    if variant == "general":
        if params is None:
            raise ValueError("the general variant needs AssumptionParams")
        inner = max(params.sigma, params.varpi + 1, params.gamma + 1 / params.beta)
        two_factor = 2 * factor
        return ThresholdResult(2 * factor * inner, factor, params.beta / two_factor,
                               two_factor * params.W)
    if variant == "poly":
        d0 = n if d0 is None else d0
        d_inf = n if d_inf is None else d_inf
        if d0 is None or d_inf is None:
            raise ValueError("the poly variant needs n or (d0, d_inf)")
        inner = max(Fraction(d0), Fraction(d_inf) - as_fraction(delta) + 2)
        return ThresholdResult(factor * inner, factor, None, None)
    if variant == "solvable":
        if Q is None or alpha is None:
            raise ValueError("the solvable variant needs Q and alpha")
        a = as_fraction(alpha)
        if a == 0:
            from ..errors import ZeroDrift
            raise ZeroDrift("alpha = 0 is the trivial character")
        inner = max(Fraction(Q + 1), Fraction(3 + _sgn(a + Fraction(Q, 2))))
        return ThresholdResult(factor * inner, factor, None, None)
    raise ValueError(f"unknown variant {variant!r}")
