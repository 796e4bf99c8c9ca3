"""Band cutoffs, local/global splitting, strip shifts and Paley-Wiener decay checks.

The cutoff ``omega`` is an even smooth function with ``omega = 1`` on
``[-1/4, 1/4]``, ``omega = 0`` outside ``[-3/4, 3/4]`` and integer translates
summing to one. From it

* ``omega_h(t) = omega(t - h + 1) + omega(t + h - 1)`` (band ``h``),
* ``eta^ = omega + omega_2`` (equal to 1 on ``[-1, 1]``, 0 outside ``[-7/4, 7/4]``).

A multiplier ``M`` splits as ``M = M_loc + sum_{h >= 3} P_h`` with
``M_loc^ = eta^ M^`` and ``P_h^ = omega_h M^``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import BadBandIndex, SupportViolation, UnstableShift
from .grid import GridFunction, SpectralObject, idft, lq_norm, symmetric_support
from .spaces import DyadicCutoff, weighted_sobolev_norm

__all__ = [
    "smooth_step", "CutoffFamily", "make_cutoff_family", "local_global_split", "band_piece",
    "strip_shift", "shift_gain", "poisson_kernel", "spectral_localization_check",
    "LocalizationReport", "pw_decay_check", "PWDecayPoint", "pw_decay_fit", "PWDecayFit",
]


def smooth_step(u) -> np.ndarray:
    """C-infinity step: 0 for ``u <= 0``, 1 for ``u >= 1``, with ``s(u) + s(1-u) = 1``."""
    u = np.asarray(u, dtype=float)

    def f(v):
        out = np.zeros_like(v)
        pos = v > 0
        out[pos] = np.exp(-1.0 / v[pos])
        return out

    a, b = f(u), f(1.0 - u)
    return a / (a + b)


@dataclass(frozen=True)
class CutoffFamily:
    """The band cutoffs ``omega``, ``omega_h`` and the local cutoff ``eta^``."""

    flat: float = 0.25  # omega == 1 on [-flat, flat]

    def _raw(self, t) -> np.ndarray:
        t = np.abs(np.asarray(t, dtype=float))
        return 1.0 - smooth_step((t - self.flat) / (1.0 - 2.0 * self.flat))

    def omega(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        # normalise by the integer-translate sum (identically 1 up to rounding)
        raw = self._raw(t)
        total = sum(self._raw(t - j) for j in (-2, -1, 0, 1, 2))
        return np.divide(raw, total, out=np.zeros_like(raw), where=raw > 0)

    def omega_h(self, h: int, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return self.omega(t - h + 1) + self.omega(t + h - 1)

    def eta_hat(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return self.omega(t) + self.omega_h(2, t)

    def translate_sum(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        lo = int(np.floor(t.min())) - 2
        hi = int(np.ceil(t.max())) + 2
        return sum(self.omega(t - j) for j in range(lo, hi + 1))

    def eta(self, x, n_nodes: int = 4001) -> np.ndarray:
        """Inverse transform of ``eta^`` at the points ``x`` (by quadrature)."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        xi = np.linspace(0.0, 2.0, n_nodes)
        w = np.full(n_nodes, xi[1] - xi[0])
        w[0] = w[-1] = w[0] / 2
        return (np.cos(np.outer(x, xi)) * (w * self.eta_hat(xi))).sum(axis=1) / np.pi


def make_cutoff_family() -> CutoffFamily:
    return CutoffFamily()


def local_global_split(M: GridFunction, cut: CutoffFamily | None = None
                       ) -> tuple[GridFunction, GridFunction]:
    """Split ``M`` into its local part ``eta * M`` and the remainder.

    Raises
    ------
    NonDecayingInput
        If ``M`` does not decay at the grid boundary.
    """
    cut = cut or make_cutoff_family()
    M.require_decay(what="multiplier to split")
    spectrum = M.fourier()
    parity = M.parity
    local = SpectralObject(M.L, M.h, spectrum.values * cut.eta_hat(spectrum.xi), ((-2.0, 2.0),))
    M_loc = local.to_grid(parity)
    M_glob = M.with_values(M.values - M_loc.values, parity)
    return M_loc, M_glob


def band_piece(M: GridFunction, h: int, cut: CutoffFamily | None = None) -> SpectralObject:
    """Band ``h`` of ``M``: ``P_h^ = omega_h M^`` supported in ``+-[h-2, h]``."""
    if int(h) != h or h < 3:
        raise BadBandIndex(f"band index must be an integer >= 3, got {h!r}")
    cut = cut or make_cutoff_family()
    M.require_decay(what="multiplier to decompose")
    spectrum = M.fourier()
    return SpectralObject(M.L, M.h, spectrum.values * cut.omega_h(int(h), spectrum.xi),
                          symmetric_support(h - 2, h))


class ShiftGain(NamedTuple):
    noise_gain: float  # max of exp(-t xi) over the retained band
    signal_gain: float  # max |F^| exp(-t xi) / max |F^|
    amplification: float  # noise_gain / signal_gain


def _retained(F: SpectralObject, floor: float) -> np.ndarray:
    a = np.abs(F.values)
    top = a.max(initial=0.0)
    return a > floor * top


def shift_gain(F: SpectralObject, t: float, floor: float = 1e-15) -> ShiftGain:
    """Noise amplification of the complex shift by ``i t``.

    Samples below ``floor`` times the maximum are treated as zero, so only
    the retained band can amplify round-off.
    """
    keep = _retained(F, floor)
    if not keep.any():
        return ShiftGain(1.0, 1.0, 1.0)
    xi = F.xi[keep]
    a = np.abs(F.values[keep])
    expo = -t * xi
    shift = expo.max()
    noise = np.exp(shift)
    signal = np.max(a * np.exp(expo - shift)) / a.max() * noise
    return ShiftGain(float(noise), float(signal), float(noise / signal))


def strip_shift(F: SpectralObject, t: float, guard: float = 1e12,
                floor: float = 1e-15) -> GridFunction:
    """Samples of ``x -> F(x + i t)`` from the transform ``F^(xi) exp(-t xi)``.

    Raises
    ------
    UnstableShift
        If the amplification of round-off relative to the signal exceeds ``guard``.
    """
    if t == 0:
        return F.to_grid()
    gain = shift_gain(F, t, floor)
    if gain.amplification > guard:
        raise UnstableShift(
            f"shift by {t} amplifies noise by {gain.amplification:.2e} > {guard:.1e}")
    keep = _retained(F, floor)
    vals = np.where(keep, F.values * np.exp(-t * F.xi), 0.0)
    return GridFunction(F.L, F.h, idft(vals, F.h))


def poisson_kernel(W: float, L: float, h: float) -> GridFunction:
    """Poisson kernel ``(W/pi) / (x^2 + W^2)``, whose transform is ``exp(-W|xi|)``."""
    if W <= 0:
        raise ValueError("W must be positive")
    return GridFunction.sample(lambda x: (W / np.pi) / (x ** 2 + W ** 2), L, h, "even")


class LocalizationReport(NamedTuple):
    lhs: float  # ||G||_q
    rhs: float  # R^-k ||G^(k)||_q
    ratio: float  # lhs / rhs, nan when degenerate
    degenerate: bool


def spectral_localization_check(G: SpectralObject, R: float, k: int, q: float = 2.0,
                                tol: float = 1e-10) -> LocalizationReport:
    """Compare ``||G||_q`` with ``R^-k ||G^(k)||_q`` for ``G^`` vanishing on ``(-R, R)``."""
    if G.mass_in(-R, R) > tol:
        raise SupportViolation(f"transform has mass inside (-{R}, {R})")
    lhs = lq_norm(G.to_grid().values, G.h, q)
    if k == 0:
        return LocalizationReport(lhs, lhs, 1.0 if lhs > 0 else float("nan"), lhs == 0)
    rhs = R ** (-k) * lq_norm(G.derivative(k).to_grid().values, G.h, q)
    if rhs == 0:
        return LocalizationReport(lhs, rhs, float("nan"), True)
    return LocalizationReport(lhs, rhs, lhs / rhs, False)


class PWDecayPoint(NamedTuple):
    param: float  # R or h
    lhs: float
    rhs: float
    normalized: float  # lhs / (param^-sigma exp(-W param) rhs)


def _support_start(F: SpectralObject) -> float:
    if F.support is None:
        raise SupportViolation("a declared Fourier support is required")
    starts = [max(a, 0.0) for a, b in F.support if b > 0]
    return min(starts) if starts else np.inf


def pw_decay_check(F: SpectralObject, sigma: float, b: float, W: float, q: float = 2.0,
                   variant: str = "supported_beyond_R", *, R: float | None = None,
                   h: int | None = None, psi: DyadicCutoff | None = None,
                   cut: CutoffFamily | None = None, guard: float = 1e12) -> PWDecayPoint:
    """One point of a Paley-Wiener decay sweep.

    ``LHS = ||(1+|.|)^b G||_q`` where ``G = F`` (variant ``supported_beyond_R``)
    or ``G = F_h`` (variant ``band_h``); ``RHS`` is the weighted Sobolev norm
    of ``F(. + iW)`` with smoothness ``sigma``, weight ``b - sigma`` and
    ``r = q``.
    """
    if W <= 0:
        raise ValueError("W must be positive")
    if variant == "supported_beyond_R":
        if R is None:
            R = _support_start(F)
        if F.mass_in(-R, R) > 1e-10:
            raise SupportViolation(f"transform has mass inside (-{R}, {R})")
        G = F.to_grid()
        param = float(R)
    elif variant == "band_h":
        if h is None:
            raise ValueError("band_h variant needs the band index h")
        G = band_piece(F.to_grid(), h, cut).to_grid()
        param = float(h)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    lhs = lq_norm((1.0 + np.abs(G.x)) ** b * G.values, G.h, q)
    shifted = strip_shift(F, W, guard=guard)
    rhs = weighted_sobolev_norm(shifted, sigma, b - sigma, q, q, psi, extension="zero")
    scale = param ** (-sigma) * np.exp(-W * param) * rhs
    return PWDecayPoint(param, lhs, rhs, lhs / scale if scale > 0 else float("nan"))


class PWDecayFit(NamedTuple):
    points: tuple[PWDecayPoint, ...]
    slope: float  # fitted coefficient of param in log(lhs/rhs) + sigma log(param)
    fitted_W: float
    spread: float  # max/min of the normalised ratios


def pw_decay_fit(points: Sequence[PWDecayPoint], sigma: float) -> PWDecayFit:
    """Least-squares fit of ``log(lhs/rhs) + sigma log(param) = c - W param``."""
    pts = tuple(points)
    if len(pts) < 2:
        raise ValueError("need at least two sweep points")
    p = np.array([pt.param for pt in pts])
    y = np.log([pt.lhs / pt.rhs for pt in pts]) + sigma * np.log(p)
    slope = float(np.polyfit(p, y, 1)[0])
    ratios = np.array([pt.normalized for pt in pts])
    return PWDecayFit(pts, slope, -slope, float(ratios.max() / ratios.min()))


def bump(u) -> np.ndarray:
    """Standard C-infinity bump ``exp(1 - 1/(1-u^2))`` on ``(-1, 1)``."""
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    inside = np.abs(u) < 1
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - u[inside] ** 2))
    return out


def symmetric_band(a: float, b: float, L: float, h: float) -> SpectralObject:
    """Even spectral object with smooth bumps on ``+-[a, b]``."""
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return SpectralObject.from_fourier(
        lambda xi: bump((np.abs(xi) - mid) / half), L, h, symmetric_support(a, b))


__all__ += ["bump", "symmetric_band", "ShiftGain"]
