"""Function-space norms on sampled multipliers and the dyadic cutoff system.

Norms implemented here:

* Bessel potential norm ``||J^sigma F||_q`` with ``J^sigma`` the Fourier
  multiplier ``(1 + xi^2)^(sigma/2)``;
* the weighted dyadic Sobolev norm
  ``( sum_k [2^(k(tau + 1/q)) ||F(2^k .) psi_k||_{sigma,q}]^r )^(1/r)``;
* the weighted derivative norms (sup, ``L^q`` and strip versions);
* scale-invariant local Sobolev norms ``sup_t ||F(t .) psi||_{s,q}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .grid import GridFunction, dft, grid_points, idft, lq_norm

__all__ = [
    "DyadicCutoff", "make_dyadic_cutoff", "bessel_potential", "bessel_norm",
    "weighted_sobolev_norm", "weighted_sobolev_terms", "pointwise_norms",
    "sloc_norm", "SlocNorm", "DyadicTerms",
]


def _log_bump(t: np.ndarray, width: float, sharpness: float) -> np.ndarray:
    u = np.asarray(t, dtype=float) / width
    out = np.zeros_like(u)
    inside = np.abs(u) < 1
    out[inside] = np.exp(-sharpness / (1.0 - u[inside] ** 2))
    return out


@dataclass(frozen=True)
class DyadicCutoff:
    """Smooth dyadic cutoff ``psi`` supported in ``[1/4, 4]``.

    ``psi(lam) = beta(lam) / sum_j beta(2^j lam)`` where ``beta`` is a smooth
    bump in ``log2(lam)`` of half width ``width`` (at most 2). Negative
    arguments give 0; the symmetric blocks are :meth:`even` and :meth:`low`.
    """

    width: float = 2.0
    sharpness: float = 1.0

    def __post_init__(self) -> None:
        if not 0.5 < self.width <= 2.0:
            raise ValueError("width must lie in (1/2, 2] so that the dyadic sum is positive")

    def _beta_log(self, t: np.ndarray) -> np.ndarray:
        return _log_bump(t, self.width, self.sharpness)

    def _periodic_sum(self, t: np.ndarray) -> np.ndarray:
        frac = t - np.floor(t)
        return sum(self._beta_log(frac + j) for j in range(-3, 4))

    def __call__(self, lam) -> np.ndarray:
        lam = np.asarray(lam, dtype=float)
        out = np.zeros(lam.shape)
        pos = lam > 0
        if pos.any():
            t = np.log2(lam[pos])
            out[pos] = self._beta_log(t) / self._periodic_sum(t)
        return out

    def even(self, lam) -> np.ndarray:
        """``psi(lam) + psi(-lam)``, the block used at scales ``k > 0``."""
        return self(np.abs(np.asarray(lam, dtype=float)))

    def low(self, lam) -> np.ndarray:
        """``sum_{eps, j >= 0} psi(eps 2^j lam)``: the block used at ``k = 0``.

        Computed as ``1 - sum_{j >= 1} psi(2^-j |lam|)``, which equals 1 near 0
        and vanishes for ``|lam| >= 4``.
        """
        a = np.abs(np.asarray(lam, dtype=float))
        out = np.ones(a.shape)
        big = a > 0.25
        if big.any():
            acc = np.zeros(big.sum())
            ab = a[big]
            jmax = int(np.ceil(np.log2(ab.max()))) + 3
            for j in range(1, max(jmax, 1) + 1):
                acc += self(ab / 2.0 ** j)
            out[big] = 1.0 - acc
        return np.clip(out, 0.0, 1.0)

    def block(self, k: int, lam) -> np.ndarray:
        return self.low(lam) if k == 0 else self.even(lam)

    def dyadic_sum(self, lam) -> np.ndarray:
        """``sum_j psi(2^j lam)`` over the nonzero terms (should be 1 for ``lam > 0``)."""
        lam = np.asarray(lam, dtype=float)
        t = np.log2(lam)
        lo = int(np.floor(-t.max() - 3))
        hi = int(np.ceil(-t.min() + 3))
        return sum(self(lam * 2.0 ** j) for j in range(lo, hi + 1))


def make_dyadic_cutoff(width: float = 2.0, sharpness: float = 1.0) -> DyadicCutoff:
    """Return the standard dyadic cutoff (or a variant for cutoff-stability studies)."""
    return DyadicCutoff(width, sharpness)


def bessel_potential(values: np.ndarray, h: float, sigma: float) -> np.ndarray:
    """Apply ``(1 + xi^2)^(sigma/2)`` spectrally to centred samples."""
    if sigma == 0:
        return np.asarray(values, dtype=complex)
    n = values.shape[-1]
    m = (n - 1) // 2
    xi = 2.0 * np.pi * np.arange(-m, m + 1) / (n * h)
    return idft(dft(values, h) * (1.0 + xi ** 2) ** (sigma / 2.0), h)


def bessel_norm(F: GridFunction, sigma: float, q: float, check: bool = True) -> float:
    """Bessel potential norm ``||J^sigma F||_{L^q}`` on the grid.

    Parameters
    ----------
    F : GridFunction
        Must decay at the grid boundary when ``sigma > 0``.
    sigma : float
        Smoothness order, ``>= 0``.
    q : float
        Lebesgue exponent in ``[1, inf]``.
    check : bool
        Enforce the boundary-decay precondition.

    Raises
    ------
    NonDecayingInput
        If ``sigma > 0`` and ``F`` does not decay at the boundary.
    """
    if sigma < 0:
        raise ValueError("sigma must be non-negative")
    if sigma == 0:
        return lq_norm(F.values, F.h, q)
    if check:
        F.require_decay(what="bessel_norm input")
    return lq_norm(bessel_potential(F.values, F.h, sigma), F.h, q)


class DyadicTerms(NamedTuple):
    terms: np.ndarray  # weighted block norms, index k = 0..k_max
    k_max: int


def _extension_mode(F: GridFunction, extension: str) -> str:
    if extension == "auto":
        return "zero" if F.decays() else "edge"
    if extension not in ("zero", "edge"):
        raise ValueError("extension must be 'auto', 'zero' or 'edge'")
    return extension


def _sample_dilate(F: GridFunction, k: int, half_width: float, mode: str, max_step: float):
    """Samples of ``F(2^k lam)`` on a lam-grid aligned with the grid of ``F``.

    The lam-step is ``h / 2^k``, refined by a power of two when that exceeds
    ``max_step`` (the refined points come from spline interpolation).
    """
    step = F.h / 2.0 ** k
    refine = 1
    if step > max_step:
        refine = 2 ** int(np.ceil(np.log2(step / max_step)))
        step /= refine
    J = int(np.ceil(half_width / step))
    idx = np.arange(-J, J + 1)
    lam = step * idx
    if refine == 1:
        vals = np.zeros(idx.shape, dtype=complex)
        inside = np.abs(idx) <= F.m
        vals[inside] = F.values[idx[inside] + F.m]
        if mode == "edge":
            vals[idx > F.m] = F.values[-1]
            vals[idx < -F.m] = F.values[0]
    else:
        vals = F(2.0 ** k * lam, extension=mode)
    return lam, vals, step


def weighted_sobolev_terms(F: GridFunction, sigma: float, tau: float, q: float,
                           psi: DyadicCutoff | None = None, *, extension: str = "auto",
                           block_half_width: float = 8.0, k_max: int | None = None,
                           max_step: float = 1.0 / 128) -> DyadicTerms:
    """Per-scale terms ``2^(k(tau+1/q)) ||F(2^k .) psi_k||_{sigma,q}``.

    The truncation index defaults to the smallest ``k_max`` with
    ``2^k_max / 4 >= L``. Outside ``[-L, L]`` the function is continued by zero
    when it decays and by its edge values otherwise (``extension="auto"``).
    """
    psi = psi or make_dyadic_cutoff()
    mode = _extension_mode(F, extension)
    if k_max is None:
        k_max = max(0, int(np.ceil(np.log2(4.0 * F.L))))
    weight_exp = tau + (0.0 if np.isinf(q) else 1.0 / q)
    terms = np.zeros(k_max + 1)
    for k in range(k_max + 1):
        lam, vals, step = _sample_dilate(F, k, block_half_width, mode, max_step)
        block = vals * psi.block(k, lam)
        if not block.any():
            continue
        norm = lq_norm(bessel_potential(block, step, sigma), step, q)
        terms[k] = 2.0 ** (k * weight_exp) * norm
    return DyadicTerms(terms, k_max)


def _lr(terms: np.ndarray, r: float) -> float:
    if np.isinf(r):
        return float(terms.max(initial=0.0))
    return float(np.sum(terms ** r) ** (1.0 / r))


def weighted_sobolev_norm(F: GridFunction, sigma: float, tau: float, q: float, r: float,
                          psi: DyadicCutoff | None = None, **kwargs) -> float:
    """Weighted dyadic Sobolev norm: the ``l^r`` sum of :func:`weighted_sobolev_terms`."""
    return _lr(weighted_sobolev_terms(F, sigma, tau, q, psi, **kwargs).terms, r)


def pointwise_norms(F: GridFunction, N: int, tau: float, variant: str = "C", q: float = 2.0,
                    W: float | None = None, traces: Sequence[GridFunction] = (),
                    method: str = "spectral") -> float:
    """Weighted derivative norms.

    ``C``:        ``max_{k<=N} sup (1+|lam|)^(k+tau) |F^(k)(lam)|``
    ``W_q``:      same with the ``L^q`` norm in place of the sup
    ``stripSup``: ``max_{j<=N} sup (1+|z|)^j |F^(j)(z)|`` over the real line and
                  the supplied boundary traces ``F(. +- iW)``.
    """
    if N < 0:
        raise ValueError("N must be non-negative")
    x = F.x
    if variant in ("C", "W_q"):
        best = 0.0
        for k in range(N + 1):
            dk = F.derivative(k, method).values if k else F.values
            weighted = (1.0 + np.abs(x)) ** (k + tau) * dk
            val = lq_norm(weighted, F.h, np.inf if variant == "C" else q)
            best = max(best, val)
        return best
    if variant == "stripSup":
        if W is None:
            raise ValueError("stripSup requires the strip half width W")
        best = 0.0
        for trace, y in [(F, 0.0)] + [(t, W) for t in traces]:
            for j in range(N + 1):
                dj = trace.derivative(j, method).values if j else trace.values
                weight = (1.0 + np.hypot(x, y)) ** j
                best = max(best, float(np.abs(weight * dj).max(initial=0.0)))
        return best
    raise ValueError(f"unknown variant {variant!r}")


class SlocNorm(NamedTuple):
    value: float
    t: float  # maximising dilation


def sloc_norm(F: GridFunction, s: float, base: float = np.inf, psi: DyadicCutoff | None = None,
              *, t_range: tuple[float, float] | None = None, points_per_octave: int = 16,
              extension: str = "auto", block_half_width: float = 8.0) -> SlocNorm:
    """Scale-invariant local Sobolev norm ``sup_t ||F(t .) psi||_{s, base}``.

    The sup runs over a logarithmic grid of ``t`` with ``points_per_octave``
    points per octave, by default over ``[2^-k_max, 2^k_max]`` with
    ``2^k_max / 4 >= L``. Off-grid values of ``F`` come from quintic spline
    interpolation.
    """
    psi = psi or make_dyadic_cutoff()
    mode = _extension_mode(F, extension)
    if t_range is None:
        k_max = max(1, int(np.ceil(np.log2(4.0 * F.L))))
        t_range = (2.0 ** -k_max, 2.0 ** k_max)
    lo, hi = np.log2(t_range[0]), np.log2(t_range[1])
    n_t = max(1, int(round((hi - lo) * points_per_octave)) + 1)
    best = SlocNorm(0.0, float(t_range[0]))
    for t in 2.0 ** np.linspace(lo, hi, n_t):
        # resolve F(t .) without aliasing, but keep a coarse grid when F(t .) is extension only
        step = 1.0 / 128
        if t * 0.25 < F.L:
            step = min(step, F.h / t)
        step = block_half_width / np.ceil(block_half_width / step)
        lam = grid_points(block_half_width, step)
        window = psi(lam)
        vals = np.zeros(lam.shape, dtype=complex)
        nz = window > 0
        vals[nz] = F(t * lam[nz], extension=mode) * window[nz]
        val = lq_norm(bessel_potential(vals, step, s), step, base)
        if val > best.value:
            best = SlocNorm(val, float(t))
    return best
