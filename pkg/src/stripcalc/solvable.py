"""Rank-one solvable extensions ``N x| A`` with a positive character.

Characters are ``chi_alpha(z, u) = exp(alpha u)``, the modular function is
``exp(-Q u)`` and the drift parameter is ``b_X = |alpha| / 2``. The ball
integral of ``chi_alpha`` reduces to

    I(r) = int_{-r}^{r} exp(alpha u) int_0^{A(u)} s^(Q/2-1) ds du,
    A(u) = exp(u) (cosh r - cosh u),

whose growth is ``r^(2 varpi) exp(|alpha| r)``-like with the regime ``varpi``
depending on the sign of ``alpha + Q/2``. For ``alpha > -Q/2`` the unweighted
integral grows like ``exp((alpha + Q) r)``; the ``(1+r) exp(|alpha| r)``
behaviour holds for the weighted inner integrand ``s^(Q/2-1) / (1 + s^(Q/2))``.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np
from scipy import integrate

from .errors import BadRadius, Overflow, QuadratureDivergence, ZeroDrift
from .grid import GridFunction

__all__ = [
    "SolvableGroup", "CharacterInfo", "classify_character", "plancherel_weight",
    "plancherel_weight_norm", "LogValue", "char_ball_integral_solvable", "regime_normalizer",
    "BallIntegralRow", "ball_integral_sweep", "write_sweep_csv",
]


@dataclass(frozen=True)
class SolvableGroup:
    """``N x| A`` with homogeneous dimension ``Q`` and character exponent ``alpha``."""

    Q: int
    alpha: float

    def __post_init__(self) -> None:
        if self.Q < 1:
            raise ValueError("Q must be a positive integer")
        if self.alpha == 0:
            raise ZeroDrift("alpha = 0 is the trivial character")

    @property
    def b_X(self) -> float:
        return 0.5 * abs(self.alpha)

    def chi(self, u):
        return np.exp(self.alpha * np.asarray(u, dtype=float))

    def modular(self, u):
        return np.exp(-self.Q * np.asarray(u, dtype=float))


class CharacterInfo(NamedTuple):
    alpha: float
    Q: int
    b_X: float
    varpi: Fraction  # kernel-growth exponent: 1, 1/2 or 0
    sign: int  # sign of alpha + Q/2
    left_haar: bool  # chi = modular function, so mu_X is a left Haar measure
    description: str


def classify_character(alpha: float, Q: int) -> CharacterInfo:
    """Describe the character ``exp(alpha u)`` and its growth regime.

    Raises
    ------
    ZeroDrift
        If ``alpha == 0``.
    """
    if alpha == 0:
        raise ZeroDrift("alpha = 0 is the trivial character")
    s = Fraction(alpha).limit_denominator(10 ** 9) + Fraction(Q, 2)
    sign = (s > 0) - (s < 0)
    varpi = {1: Fraction(1), 0: Fraction(1, 2), -1: Fraction(0)}[sign]
    left_haar = alpha == -Q
    desc = f"chi(z,u) = exp({alpha:g} u), b_X = {abs(alpha) / 2:g}, varpi = {varpi}"
    if left_haar:
        desc += "; chi equals the modular function (intrinsic hypoelliptic Laplacian)"
    return CharacterInfo(float(alpha), int(Q), abs(alpha) / 2.0, varpi, sign, left_haar, desc)


def plancherel_weight(lam, Q: int) -> np.ndarray:
    """``lam^3`` for ``lam <= 1`` and ``lam^(Q+1)`` for ``lam >= 1``."""
    lam = np.asarray(lam, dtype=float)
    return np.where(lam <= 1.0, lam ** 3, lam ** (Q + 1))


def plancherel_weight_norm(F, Q: int, lam_max: float | None = None) -> float:
    """``(int_0^inf |F(lam)|^2 w(lam) dlam / lam)^(1/2)`` with the weight above.

    ``F`` may be a :class:`GridFunction` (integrated up to its half width) or a
    vectorised callable (integrated to infinity).

    Raises
    ------
    QuadratureDivergence
        If ``F`` does not decay or the quadrature fails to converge.
    """
    if isinstance(F, GridFunction):
        if not F.decays():
            raise QuadratureDivergence("multiplier does not decay on its grid")
        f = lambda lam: complex(F(np.array([lam]))[0])
        upper = F.L if lam_max is None else lam_max
    else:
        f = lambda lam: complex(np.asarray(F(np.array([lam])))[0])
        upper = np.inf if lam_max is None else lam_max
    g = lambda lam: abs(f(lam)) ** 2 * plancherel_weight(lam, Q) / lam if lam > 0 else 0.0
    try:
        lo, e1 = integrate.quad(g, 0.0, 1.0, epsabs=0.0, epsrel=1e-12, limit=200)
        hi, e2 = integrate.quad(g, 1.0, upper, epsabs=0.0, epsrel=1e-12, limit=400)
    except integrate.IntegrationWarning as exc:  # pragma: no cover - only with -W error
        raise QuadratureDivergence(str(exc)) from exc
    total = lo + hi
    if not np.isfinite(total) or (total > 0 and (e1 + e2) > 1e-6 * total):
        raise QuadratureDivergence("Plancherel-weight quadrature did not converge")
    return float(np.sqrt(total))


class LogValue(NamedTuple):
    """A positive number stored as its natural logarithm."""

    log: float

    @property
    def mantissa(self) -> float:
        return float(10.0 ** (self.log / np.log(10.0) - self.exponent))

    @property
    def exponent(self) -> int:
        return int(np.floor(self.log / np.log(10.0)))

    @property
    def value(self) -> float:
        if self.log > np.log(np.finfo(float).max):
            raise Overflow(f"exp({self.log:.1f}) does not fit in double precision")
        return float(np.exp(self.log))


def _log_sinh(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore"):
        return x + np.log1p(-np.exp(-2.0 * x)) - np.log(2.0)


def _log_integrand(u: np.ndarray, r: float, alpha: float, Q: int, weighted: bool) -> np.ndarray:
    """Logarithm of the outer integrand (inner integral done in closed form)."""
    u = np.asarray(u, dtype=float)
    # log A = u + log(cosh r - cosh u) = u + log 2 + log sinh((r+u)/2) + log sinh((r-u)/2)
    log_a = u + np.log(2.0) + _log_sinh(0.5 * (r + u)) + _log_sinh(0.5 * (r - u))
    y = 0.5 * Q * log_a
    if weighted:
        # (2/Q) log(1 + A^(Q/2))
        with np.errstate(divide="ignore"):
            inner = np.log(np.logaddexp(0.0, y))
    else:
        inner = y
    return alpha * u + np.log(2.0 / Q) + inner


def char_ball_integral_solvable(G: SolvableGroup, r: float, weighting: str = "auto",
                                epsrel: float = 1e-10) -> LogValue:
    """Logarithm of the ``chi_alpha`` ball integral.

    Parameters
    ----------
    G : SolvableGroup
    r : float
        Radius in ``[1, 30]``.
    weighting : {"auto", "plain", "weighted"}
        ``plain`` integrates ``s^(Q/2-1)``; ``weighted`` integrates
        ``s^(Q/2-1) / (1 + s^(Q/2))``. ``auto`` uses the weighted form only in
        the regime ``alpha > -Q/2``, where the plain integral outgrows
        ``exp(|alpha| r)`` exponentially.

    The inner integral is evaluated in closed form and the outer one by
    adaptive quadrature after factoring out the maximum of the integrand.
    """
    if not 1.0 <= r <= 30.0:
        raise BadRadius("radius must lie in [1, 30]")
    if weighting == "auto":
        weighting = "weighted" if classify_character(G.alpha, G.Q).sign > 0 else "plain"
    if weighting not in ("plain", "weighted"):
        raise ValueError("weighting must be 'auto', 'plain' or 'weighted'")
    weighted = weighting == "weighted"
    probe = np.linspace(-r, r, 4001)[1:-1]
    shift = float(_log_integrand(probe, r, G.alpha, G.Q, weighted).max())
    f = lambda u: float(np.exp(_log_integrand(np.array([u]), r, G.alpha, G.Q, weighted)[0] - shift))
    # split the range so the adaptive rule sees the boundary layers separately
    edges = np.unique(np.concatenate([np.linspace(-r, r, 17), [0.0]]))
    # absolute tolerance scaled by a trapezoid estimate of the total
    scale = float(np.trapezoid(np.exp(_log_integrand(probe, r, G.alpha, G.Q, weighted) - shift),
                           probe))
    val = err = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        # full_output silences the extrapolation warning at the integrable log
        # singularity u = r of the weighted form; the error check below decides
        part, perr, *_ = integrate.quad(f, a, b, epsabs=epsrel * scale / 16, epsrel=epsrel,
                                        limit=200, full_output=1)
        val += part
        err += perr
    if err > 1e-6 * val:
        raise QuadratureDivergence(f"ball integral error estimate {err / val:.1e} too large")
    if not np.isfinite(val) or val <= 0:
        raise Overflow("ball integral could not be represented")
    return LogValue(float(np.log(val) + shift))


def regime_normalizer(G: SolvableGroup, r: float) -> LogValue:
    """Predicted growth: ``(1+r) e^{|a|r}``, ``r e^{|a|r}`` or ``e^{|a|r}`` by regime."""
    varpi = classify_character(G.alpha, G.Q).varpi
    a = abs(G.alpha) * r
    if varpi == 1:
        return LogValue(a + np.log1p(r))
    if varpi == Fraction(1, 2):
        return LogValue(a + np.log(r))
    return LogValue(a)


class BallIntegralRow(NamedTuple):
    Q: int
    alpha: float
    r: float
    log_I: float
    ratio: float
    regime: str


def ball_integral_sweep(G: SolvableGroup, radii: Sequence[float] = (4, 8, 12, 16),
                        weighting: str = "auto") -> list[BallIntegralRow]:
    """Ball integrals and normalised ratios over a sweep of radii."""
    info = classify_character(G.alpha, G.Q)
    rows = []
    for r in radii:
        logI = char_ball_integral_solvable(G, float(r), weighting)
        norm = regime_normalizer(G, float(r))
        rows.append(BallIntegralRow(G.Q, G.alpha, float(r), logI.log,
                                    float(np.exp(logI.log - norm.log)), f"varpi={info.varpi}"))
    return rows


def write_sweep_csv(rows: Sequence[BallIntegralRow], fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["Q", "alpha", "r", "log_I", "normalized_ratio", "regime"])
    for row in rows:
        w.writerow([row.Q, repr(row.alpha), repr(row.r), repr(row.log_I), repr(row.ratio),
                    row.regime])
