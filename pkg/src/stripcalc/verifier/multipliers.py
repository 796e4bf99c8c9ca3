"""Strip multipliers ``M_X(z) = M(b_X^2 + z^2)`` and the parabola-to-strip map."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from ..errors import DomainViolation
from .thresholds import exponent_factor

__all__ = ["MultiplierSpec", "imaginary_power", "resolvent_power", "gaussian", "custom",
           "identity", "StripTraces", "parabola_map", "strip_width", "in_parabola"]

_FAMILIES = ("imaginary_power", "resolvent_power", "gaussian", "identity", "custom")


@dataclass(frozen=True, eq=False)
class MultiplierSpec:
    """An even strip multiplier in the variable ``z``.

    ``imaginary_power``: ``(b^2 + z^2)^(i g)``; ``resolvent_power``:
    ``(b^2 + z^2)^(-u)``; ``gaussian``: ``exp(-z^2 / s^2)``; ``identity``: 1;
    ``custom``: a user callable. With ``b = b_X`` these are ``M(zeta)`` for
    ``zeta^(i g)``, ``zeta^(-u)`` composed with ``zeta = b_X^2 + z^2``.

    Attributes
    ----------
    family : str
    b : float
        Offset; the power families are singular at ``z = +-i b``.
    param : float
        ``g``, ``u`` or ``s`` according to the family.
    validity : float
        Half width of the open strip on which the function is holomorphic.
    """

    family: str
    b: float = 0.0
    param: float = 0.0
    validity: float = np.inf
    func: Callable | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if self.family not in _FAMILIES:
            raise ValueError(f"unknown multiplier family {self.family!r}")
        if self.b < 0:
            raise ValueError("b must be non-negative")
        if self.family == "custom" and self.func is None:
            raise ValueError("custom multipliers need a callable")
        if self.validity <= 0:
            raise ValueError("validity half width must be positive")

    def __call__(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        if self.family == "identity":
            return np.ones(z.shape, dtype=complex)
        if self.family == "gaussian":
            return np.exp(-(z / self.param) ** 2)
        if self.family == "custom":
            return np.asarray(self.func(z), dtype=complex) * np.ones(z.shape)
        base = self.b ** 2 + z ** 2
        with np.errstate(divide="ignore", invalid="ignore"):
            if self.family == "imaginary_power":
                return np.exp(1j * self.param * np.log(base))
            return np.exp(-self.param * np.log(base))

    def on_spectrum(self, zeta, b_X: float) -> np.ndarray:
        """``M(zeta)`` recovered from the strip form via ``z = sqrt(zeta - b_X^2)``."""
        return self(np.sqrt(np.asarray(zeta, dtype=complex) - b_X ** 2))

    @property
    def decay_rate(self) -> float:
        """Exponential decay rate of the convolution kernel of ``M(D)``."""
        return self.validity

    def boundary_sup(self, width: float, x_max: float = 200.0, n: int = 4001) -> float:
        """Max of ``|M|`` on the lines ``Im z = +-width``, ``|Re z| <= x_max``."""
        x = np.linspace(-x_max, x_max, n)
        vals = np.abs(self(x + 1j * width))
        return float(np.nanmax(vals))


def imaginary_power(gamma: float, b: float) -> MultiplierSpec:
    if b <= 0:
        raise ValueError("imaginary powers need b > 0")
    return MultiplierSpec("imaginary_power", b, gamma, b)


def resolvent_power(u: float, b: float) -> MultiplierSpec:
    if b <= 0:
        raise ValueError("resolvent powers need b > 0")
    return MultiplierSpec("resolvent_power", b, u, b)


def gaussian(s: float = 1.0) -> MultiplierSpec:
    return MultiplierSpec("gaussian", 0.0, s)


def identity() -> MultiplierSpec:
    return MultiplierSpec("identity")


def custom(func: Callable, validity: float = np.inf) -> MultiplierSpec:
    return MultiplierSpec("custom", 0.0, 0.0, validity, func)


def strip_width(p, drift_norm: float):
    """``W_{X,p} = |1/p - 1/2| |X|`` (exact when the inputs are rational)."""
    return float(exponent_factor(p)) * drift_norm


def in_parabola(zeta, b_X: float, width: float, tol: float = 1e-12) -> np.ndarray:
    """Closed parabolic region ``x >= y^2 / (4 W^2) + b_X^2 - W^2``.

    This is the image of the strip ``|Im z| <= W`` under ``z -> b_X^2 + z^2``;
    for ``W = |2/p - 1| b_X`` and ``W = b_X sin(phi)`` it reads
    ``x > y^2 / (4 b_X^2 sin^2 phi) + b_X^2 cos^2 phi``.
    """
    zeta = np.asarray(zeta, dtype=complex)
    bound = zeta.imag ** 2 / (4.0 * width ** 2) + b_X ** 2 - width ** 2
    return zeta.real >= bound - tol * np.maximum(1.0, np.abs(bound))


class StripTraces(NamedTuple):
    x: np.ndarray
    width: float
    upper: np.ndarray  # M_X(x + i W)
    lower: np.ndarray  # M_X(x - i W)
    image_upper: np.ndarray  # b_X^2 + (x + i W)^2 in the parabola's plane
    on_boundary: bool  # all images on the parabola's boundary


def parabola_map(M: MultiplierSpec, p, drift_norm: float, x=None) -> StripTraces:
    """Boundary traces of ``M_X`` on the strip of half width ``W_{X,p}``.

    Raises
    ------
    DomainViolation
        If ``W_{X,p}`` is not inside the strip where ``M`` is holomorphic.
    """
    W = strip_width(p, drift_norm)
    b_X = 0.5 * drift_norm
    if W >= M.validity:
        raise DomainViolation(
            f"strip half width {W:g} reaches the singular set (validity {M.validity:g})")
    x = np.linspace(-20.0, 20.0, 801) if x is None else np.asarray(x, dtype=float)
    zu = x + 1j * W
    image = b_X ** 2 + zu ** 2
    # boundary of the strip maps onto the boundary of the parabola
    bound = image.imag ** 2 / (4.0 * W ** 2) + b_X ** 2 - W ** 2 if W > 0 else image.real
    on_boundary = bool(np.allclose(image.real, bound, rtol=1e-12, atol=1e-12))
    return StripTraces(x, W, M(zu), M(x - 1j * W), image, on_boundary)
