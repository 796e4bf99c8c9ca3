"""Sampled functions on symmetric grids and their discrete Fourier transforms.

The Fourier convention throughout the package is

    F^(xi) = integral F(x) exp(-i x xi) dx,

approximated on a symmetric grid ``x_j = -L + j h`` by ``h * sum_j F(x_j) exp(-i x_j xi)``.
Grids always have an odd number of points, so ``x = 0`` is a sample and the
discrete transform is evaluated on the symmetric frequency grid
``xi_k = 2 pi k / (N h)`` for ``k = -(N-1)/2, ..., (N-1)/2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.interpolate import make_interp_spline

from .errors import NonDecayingInput, SupportViolation

PARITIES = ("even", "odd", "none")

# fraction of the grid treated as "boundary" by the decay test
BOUNDARY_FRACTION = 0.05
DECAY_TOL = 1e-8
SUPPORT_TOL = 1e-10


def _grid_size(L: float, h: float) -> int:
    if L <= 0 or h <= 0:
        raise ValueError("half width and step must be positive")
    m = L / h
    if abs(m - round(m)) > 1e-9 * max(1.0, m):
        raise ValueError(f"L/h must be an integer, got {m!r}")
    return int(round(m))


def grid_points(L: float, h: float) -> np.ndarray:
    """Symmetric sample points ``-L, -L+h, ..., L``."""
    m = _grid_size(L, h)
    return h * np.arange(-m, m + 1, dtype=float)


def frequency_points(L: float, h: float) -> np.ndarray:
    """Frequencies dual to :func:`grid_points`, in ascending order."""
    m = _grid_size(L, h)
    n = 2 * m + 1
    return 2.0 * np.pi * np.arange(-m, m + 1, dtype=float) / (n * h)


def dft(values: np.ndarray, h: float) -> np.ndarray:
    """Continuous-normalised DFT of centred samples (ascending frequency order)."""
    return h * np.fft.fftshift(np.fft.fft(np.fft.ifftshift(values, axes=-1), axis=-1), axes=-1)


def idft(fourier: np.ndarray, h: float) -> np.ndarray:
    """Inverse of :func:`dft`."""
    return np.fft.fftshift(np.fft.ifft(np.fft.ifftshift(fourier, axes=-1), axis=-1), axes=-1) / h


def lq_norm(values: np.ndarray, h: float, q: float) -> float:
    """Discrete ``L^q`` norm ``(h sum |f|^q)^(1/q)``; ``q = inf`` gives the max."""
    a = np.abs(values)
    if np.isinf(q):
        return float(a.max(initial=0.0))
    if q <= 0:
        raise ValueError("q must be positive")
    if not a.any():
        return 0.0
    scale = a.max()
    return float(scale * (h * np.sum((a / scale) ** q)) ** (1.0 / q))


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Complex samples of a function on the grid ``{-L, -L+h, ..., L}``.

    Parameters
    ----------
    L : float
        Half width of the interval.
    h : float
        Step; ``L/h`` must be an integer.
    values : ndarray
        Samples, length ``2 L/h + 1``.
    parity : {"even", "odd", "none"}
        Declared symmetry, checked to relative accuracy ``1e-12``.
    """

    L: float
    h: float
    values: np.ndarray
    parity: str = "none"

    def __post_init__(self) -> None:
        m = _grid_size(self.L, self.h)
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != (2 * m + 1,):
            raise ValueError(f"expected {2 * m + 1} samples, got shape {vals.shape}")
        if self.parity not in PARITIES:
            raise ValueError(f"parity must be one of {PARITIES}")
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        if self.parity != "none":
            sign = 1.0 if self.parity == "even" else -1.0
            scale = max(np.abs(vals).max(initial=0.0), np.finfo(float).tiny)
            if np.abs(vals - sign * vals[::-1]).max(initial=0.0) > 1e-12 * scale:
                raise ValueError(f"samples are not {self.parity}")

    # construction -----------------------------------------------------
    @classmethod
    def sample(cls, f: Callable[[np.ndarray], np.ndarray], L: float, h: float,
               parity: str = "none") -> "GridFunction":
        """Sample a vectorised callable on the grid.

        For declared parity the samples are symmetrised, so round-off in ``f``
        cannot violate the invariant.
        """
        x = grid_points(L, h)
        vals = np.asarray(f(x), dtype=complex) * np.ones_like(x)
        if parity == "even":
            vals = 0.5 * (vals + vals[::-1])
        elif parity == "odd":
            vals = 0.5 * (vals - vals[::-1])
        return cls(L, h, vals, parity)

    @classmethod
    def zeros(cls, L: float, h: float) -> "GridFunction":
        return cls(L, h, np.zeros(2 * _grid_size(L, h) + 1), "even")

    # geometry ---------------------------------------------------------
    @property
    def m(self) -> int:
        return _grid_size(self.L, self.h)

    @property
    def size(self) -> int:
        return 2 * self.m + 1

    @property
    def x(self) -> np.ndarray:
        return grid_points(self.L, self.h)

    @property
    def xi(self) -> np.ndarray:
        return frequency_points(self.L, self.h)

    def with_values(self, values: np.ndarray, parity: str | None = None) -> "GridFunction":
        return GridFunction(self.L, self.h, values, self.parity if parity is None else parity)

    # checks -----------------------------------------------------------
    def boundary_level(self) -> float:
        """Largest modulus on the outer 5% of the grid, relative to the overall max."""
        a = np.abs(self.values)
        top = a.max(initial=0.0)
        if top == 0.0:
            return 0.0
        k = max(1, int(np.ceil(BOUNDARY_FRACTION * self.size / 2)))
        edge = max(a[:k].max(), a[-k:].max())
        return float(edge / max(top, 1.0))

    def decays(self, tol: float = DECAY_TOL) -> bool:
        return self.boundary_level() < tol

    def require_decay(self, tol: float = DECAY_TOL, what: str = "input") -> None:
        level = self.boundary_level()
        if level >= tol:
            raise NonDecayingInput(
                f"{what} has boundary level {level:.3e} >= {tol:.1e}; enlarge the grid")

    # transforms -------------------------------------------------------
    def fourier(self, support: Sequence[tuple[float, float]] | None = None) -> "SpectralObject":
        return SpectralObject(self.L, self.h, dft(self.values, self.h), support)

    def norm(self, q: float = 2.0) -> float:
        return lq_norm(self.values, self.h, q)

    @cached_property
    def _splines(self):
        x = self.x
        return (make_interp_spline(x, self.values.real, k=5),
                make_interp_spline(x, self.values.imag, k=5))

    def __call__(self, pts, extension: str = "zero") -> np.ndarray:
        """Quintic-spline evaluation with ``zero`` or ``edge`` extension beyond ``[-L, L]``."""
        pts = np.asarray(pts, dtype=float)
        inside = np.abs(pts) <= self.L
        out = np.zeros(pts.shape, dtype=complex)
        if inside.any():
            sr, si = self._splines
            p = pts[inside]
            out[inside] = sr(p) + 1j * si(p)
        if extension == "edge":
            out[pts > self.L] = self.values[-1]
            out[pts < -self.L] = self.values[0]
        elif extension != "zero":
            raise ValueError("extension must be 'zero' or 'edge'")
        return out

    def derivative(self, order: int = 1, method: str = "spectral") -> "GridFunction":
        """Derivative of the given order.

        ``spectral`` multiplies the transform by ``(i xi)^order`` and requires
        boundary decay; ``fd`` uses repeated fourth-order central differences.
        """
        if order == 0:
            return self
        parity = self.parity
        if parity != "none" and order % 2:
            parity = "odd" if parity == "even" else "even"
        if method == "spectral":
            self.require_decay(what="function to differentiate")
            vals = idft(dft(self.values, self.h) * (1j * self.xi) ** order, self.h)
        elif method == "fd":
            vals = self.values
            for _ in range(order):
                vals = _central_difference(vals, self.h)
        else:
            raise ValueError("method must be 'spectral' or 'fd'")
        return GridFunction(self.L, self.h, _clean_parity(vals, parity), parity)


def _central_difference(v: np.ndarray, h: float) -> np.ndarray:
    d = np.empty_like(v)
    d[2:-2] = (v[:-4] - 8 * v[1:-3] + 8 * v[3:-1] - v[4:]) / (12 * h)
    d[:2] = (-3 * v[:2] + 4 * v[1:3] - v[2:4]) / (2 * h)
    d[-2:] = (3 * v[-2:] - 4 * v[-3:-1] + v[-4:-2]) / (2 * h)
    return d


def _clean_parity(vals: np.ndarray, parity: str) -> np.ndarray:
    if parity == "even":
        return 0.5 * (vals + vals[::-1])
    if parity == "odd":
        return 0.5 * (vals - vals[::-1])
    return vals


def _normalise_support(support) -> tuple[tuple[float, float], ...] | None:
    if support is None:
        return None
    support = tuple(support)
    if len(support) == 2 and all(np.isscalar(s) for s in support):
        support = (support,)
    out = []
    for a, b in support:
        if b < a:
            raise ValueError("support interval with b < a")
        out.append((float(a), float(b)))
    return tuple(out)


def symmetric_support(a: float, b: float) -> tuple[tuple[float, float], ...]:
    """The union ``[-b, -a] U [a, b]``."""
    return ((-b, -a), (a, b))


def support_mask(xi: np.ndarray, support, pad: float = 0.0) -> np.ndarray:
    """Boolean mask of frequencies inside a union of closed intervals."""
    support = _normalise_support(support)
    if support is None:
        return np.ones(xi.shape, dtype=bool)
    mask = np.zeros(xi.shape, dtype=bool)
    for a, b in support:
        mask |= (xi >= a - pad) & (xi <= b + pad)
    return mask


@dataclass(frozen=True, eq=False)
class SpectralObject:
    """Samples of a Fourier transform on the frequency grid dual to ``(L, h)``.

    Parameters
    ----------
    L, h : float
        Grid parameters of the time-side function.
    values : ndarray
        Samples of ``F^`` at :func:`frequency_points`.
    support : sequence of (a, b), optional
        Declared support. Samples outside it must be below ``1e-10`` relative
        to the largest sample. ``None`` declares the full band.
    """

    L: float
    h: float
    values: np.ndarray
    support: tuple[tuple[float, float], ...] | None = field(default=None)

    def __post_init__(self) -> None:
        m = _grid_size(self.L, self.h)
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != (2 * m + 1,):
            raise ValueError(f"expected {2 * m + 1} samples, got shape {vals.shape}")
        support = _normalise_support(self.support)
        object.__setattr__(self, "support", support)
        if support is not None:
            # allow half a frequency step of slack for samples sitting on an endpoint
            outside = ~support_mask(self.xi_of(m), support, pad=1e-12)
            top = np.abs(vals).max(initial=0.0)
            if top > 0 and np.abs(vals[outside]).max(initial=0.0) > SUPPORT_TOL * top:
                raise SupportViolation("Fourier samples exceed 1e-10 outside the declared support")
            vals = np.where(outside, 0.0, vals)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def xi_of(self, m: int) -> np.ndarray:
        return 2.0 * np.pi * np.arange(-m, m + 1, dtype=float) / ((2 * m + 1) * self.h)

    @property
    def xi(self) -> np.ndarray:
        return frequency_points(self.L, self.h)

    @classmethod
    def from_fourier(cls, fhat: Callable[[np.ndarray], np.ndarray], L: float, h: float,
                     support=None) -> "SpectralObject":
        """Sample ``fhat`` on the frequency grid, zeroing it outside ``support``."""
        xi = frequency_points(L, h)
        vals = np.asarray(fhat(xi), dtype=complex) * np.ones_like(xi)
        vals = np.where(support_mask(xi, support), vals, 0.0)
        return cls(L, h, vals, support)

    def to_grid(self, parity: str = "none") -> GridFunction:
        vals = _clean_parity(idft(self.values, self.h), parity)
        return GridFunction(self.L, self.h, vals, parity)

    def scaled(self, factor: np.ndarray | float, support=None) -> "SpectralObject":
        return SpectralObject(self.L, self.h, self.values * factor,
                              self.support if support is None else support)

    def derivative(self, order: int) -> "SpectralObject":
        return SpectralObject(self.L, self.h, self.values * (1j * self.xi) ** order, self.support)

    def mass_in(self, a: float, b: float) -> float:
        """Largest relative modulus of the samples in the open interval ``(a, b)``."""
        xi = self.xi
        top = np.abs(self.values).max(initial=0.0)
        if top == 0:
            return 0.0
        inner = (xi > a) & (xi < b)
        return float(np.abs(self.values[inner]).max(initial=0.0) / top)


def fourier_at(F: GridFunction, xi: Iterable[float] | float) -> np.ndarray:
    """Direct Riemann-sum transform of ``F`` at arbitrary frequencies."""
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    x = F.x
    return F.h * np.exp(-1j * np.outer(xi, x)) @ F.values
