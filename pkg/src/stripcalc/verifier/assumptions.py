"""Numerical constants of the kernel assumptions (A), (B), (C) on ``R^n``.

(A) ``sup_y int_{|x| >= 2|y|} |k(x + y) - k(x)| dx``, over ``F`` with ``supp F^`` in ``[-2, 2]``;
(B) ``sup_{0 < r <= 1} r int_{|x| >= r} |k(x)| dx`` for the same class;
(C) ``int exp(<v,x>/2) |k(x)| dx`` over ``F`` with ``F^`` supported in ``+-[h-2, h]``.

``k`` is the convolution kernel of ``F(sqrt(Laplacian))``. The right-hand
sides are the weighted Sobolev norm of ``F`` (A, B) and
``exp(W h) h^varpi ||(1+|.|)^gamma F||_beta`` (C); each case reports
``constant = lhs / rhs``.
"""

from __future__ import annotations

from dataclasses import asdict
from typing import Callable, NamedTuple, Sequence

import numpy as np

from ..errors import SupportViolation
from ..euclid import EuclidGroup, kernel_of_multiplier
from ..grid import GridFunction, lq_norm
from ..paley_wiener import CutoffFamily, local_global_split, symmetric_band
from ..spaces import DyadicCutoff, make_dyadic_cutoff, weighted_sobolev_norm
from ._parallel import ordered_map
from .report import CaseResult, VerificationReport
from .thresholds import AssumptionParams

__all__ = ["SuiteMember", "dyadic_suite", "band_suite", "zero_suite", "assumption_lhs",
           "verify_assumption", "AssumptionStability", "assumption_stability",
           "kernel_on_box"]

SUPPORT_TOL = 1e-8
FLATNESS_LIMIT = 3.0  # harness policy for per-band constants
STABILITY_LIMIT = 2.0  # harness policy for refinement and domain doubling


class SuiteMember(NamedTuple):
    id: str
    F: GridFunction  # even, sampled on the lambda grid
    band: int | None = None  # h for assumption (C)


Suite = Sequence[SuiteMember] | Callable[[float, float], Sequence[SuiteMember]]


def dyadic_suite(L: float, h: float, profile: Callable | None = None, scales=range(7),
                 psi: DyadicCutoff | None = None, cut: CutoffFamily | None = None
                 ) -> list[SuiteMember]:
    """``F_j = eta * (F0(2^j .) psi)`` for the given scales ``j``.

    ``F0`` defaults to the imaginary power ``(1 + lam^2)^i``. Convolving with
    ``eta`` (the local part of the split) places ``supp F_j^`` inside ``[-2, 2]``.
    """
    psi = psi or make_dyadic_cutoff()
    profile = profile or (lambda lam: np.exp(1j * np.log1p(lam ** 2)))
    out = []
    for j in scales:
        raw = GridFunction.sample(lambda lam: profile(2.0 ** j * lam) * psi.even(lam), L, h,
                                  "even")
        local, _ = local_global_split(raw, cut)
        out.append(SuiteMember(f"dyadic:j={j}", local))
    return out


def band_suite(L: float, h: float, bands=range(3, 11)) -> list[SuiteMember]:
    """Even ``F`` whose transforms are smooth bumps on ``+-[b-2, b]``, one per band ``b``.

    Built on the Fourier side, so the support condition holds exactly on the grid.
    """
    return [SuiteMember(f"band:h={b}", symmetric_band(b - 2, b, L, h).to_grid("even"), int(b))
            for b in bands]


def zero_suite(L: float, h: float) -> list[SuiteMember]:
    return [SuiteMember("zero", GridFunction.zeros(L, h))]


def _check_support(member: SuiteMember, which: str) -> None:
    spectrum = member.F.fourier()
    mass = np.abs(spectrum.values)
    total = mass.sum()
    if total == 0:
        return
    xi = np.abs(spectrum.xi)
    if which in ("A", "B"):
        outside = mass[xi > 2.0 + 1e-9].sum()
        what = "[-2, 2]"
    else:
        if member.band is None or member.band < 3:
            raise SupportViolation(f"{member.id}: assumption C needs a band index h >= 3")
        b = member.band
        outside = mass[(xi < b - 2 - 1e-9) | (xi > b + 1e-9)].sum()
        what = f"+-[{b - 2}, {b}]"
    if outside > SUPPORT_TOL * total:
        raise SupportViolation(f"{member.id}: Fourier transform not supported in {what} "
                               f"(relative mass outside {outside / total:.1e})")


def kernel_on_box(F: GridFunction, n: int, half_width: float, step: float
                  ) -> tuple[tuple[np.ndarray, ...], np.ndarray]:
    """Kernel of ``F(sqrt(Laplacian))`` on a centred Cartesian box (``n`` in {1, 2}).

    The spectral integral runs over the whole lambda grid of ``F``: multipliers
    with compactly supported transforms decay only like ``exp(-c sqrt(lam))``,
    so the grid edge rather than a decay threshold sets the cutoff.
    """
    if n not in (1, 2):
        raise ValueError("kernels on boxes are available for n = 1, 2")
    m = int(round(half_width / step))
    axis = step * np.arange(-m, m + 1)
    if n == 1:
        k = kernel_of_multiplier(F, 1, np.abs(axis[m:]), lam_max=F.L).values
        return (axis,), np.concatenate([k[:0:-1], k])
    grids = np.meshgrid(axis, axis, indexing="ij")
    rad = np.hypot(*grids)
    radii = np.linspace(0.0, rad.max(), 4 * int(np.ceil(rad.max() / step)) + 1)
    k = kernel_of_multiplier(F, 2, radii, lam_max=F.L).values
    vals = np.interp(rad, radii, k.real) + 1j * np.interp(rad, radii, k.imag)
    return (axis, axis), vals


def _lhs_A(axes, k: np.ndarray, net: int) -> float:
    step = axes[0][1] - axes[0][0]
    n = len(axes)
    grids = np.meshgrid(*axes, indexing="ij")
    rad = np.sqrt(sum(g ** 2 for g in grids))
    shifts = np.rint(np.linspace(-1.0, 1.0, net) / step).astype(int)
    best = 0.0
    for idx in np.ndindex(*(net,) * n):
        s = tuple(int(shifts[i]) for i in idx)
        ylen = step * np.sqrt(sum(c ** 2 for c in s))
        if ylen > 1.0 + 1e-12:
            continue  # outside the unit ball
        # k(x + y) at x is the array rolled by -s (kernel vanishes near the box edge)
        moved = np.roll(k, tuple(-c for c in s), axis=tuple(range(n)))
        diff = np.abs(moved - k) * _outside_weight(rad, 2.0 * ylen, step)
        best = max(best, float(diff.sum() * step ** n))
    return best


def _outside_weight(rad: np.ndarray, r: float, step: float) -> np.ndarray:
    """Quadrature weights of ``{|x| >= r}``: grid points on the sphere count half (trapezoid)."""
    on = np.abs(rad - r) <= 1e-9 * step
    return np.where(on, 0.5, (rad > r).astype(float))


def _lhs_B(axes, k: np.ndarray, radii: np.ndarray) -> float:
    step = axes[0][1] - axes[0][0]
    rad = np.sqrt(sum(g ** 2 for g in np.meshgrid(*axes, indexing="ij"))).ravel()
    a = np.abs(k).ravel() * step ** len(axes)
    order = np.argsort(rad)
    rs, a = rad[order], a[order]
    tail = np.concatenate([np.cumsum(a[::-1])[::-1], [0.0]])
    tol = 1e-9 * step
    lo = np.searchsorted(rs, radii - tol)  # first point with |x| >= r
    hi = np.searchsorted(rs, radii + tol)  # first point with |x| > r
    on = tail[lo] - tail[hi]
    return float(np.max(radii * (tail[hi] + 0.5 * on)))


def _lhs_C(axes, k: np.ndarray, G: EuclidGroup) -> float:
    step = axes[0][1] - axes[0][0]
    grids = np.meshgrid(*axes, indexing="ij")
    weight = np.exp(0.5 * G.pairing(*grids))
    return float(np.sum(weight * np.abs(k)) * step ** len(axes))


def assumption_lhs(which: str, F: GridFunction, G: EuclidGroup, *, band: int | None = None,
                   step: float = 1.0 / 64, net: int = 17, n_radii: int = 64) -> float:
    """Left-hand side of assumption ``which`` for one multiplier ``F``."""
    if which in ("A", "B"):
        reach = 2.0 + (1.0 if which == "A" else 0.0)
    elif which == "C":
        if band is None:
            raise ValueError("assumption C needs the band index")
        reach = float(band)
    else:
        raise ValueError(f"unknown assumption {which!r}")
    # kernels are supported in the ball of radius `reach`; leave room for shifts
    axes, k = kernel_on_box(F, G.n, reach + 1.5, step)
    if which == "A":
        return _lhs_A(axes, k, net)
    if which == "B":
        return _lhs_B(axes, k, np.linspace(1.0 / n_radii, 1.0, n_radii))
    return _lhs_C(axes, k, G)


def _rhs(which: str, F: GridFunction, params: AssumptionParams, band: int | None,
         psi: DyadicCutoff | None) -> float:
    beta, sigma = float(params.beta), float(params.sigma)
    if which in ("A", "B"):
        return weighted_sobolev_norm(F, sigma, -1.0 / beta, beta, np.inf, psi)
    weight = (1.0 + np.abs(F.x)) ** float(params.gamma)
    return float(np.exp(float(params.W) * band) * band ** float(params.varpi)
                 * lq_norm(weight * F.values, F.h, beta))


def _backend_dict(G: EuclidGroup) -> dict:
    return {"kind": "euclid", "n": G.n, "v": list(G.v), "b_X": G.b_X}


def _params_dict(params: AssumptionParams) -> dict:
    return {k: str(v) for k, v in asdict(params).items()}


def verify_assumption(which: str, backend: EuclidGroup, suite: Suite, params: AssumptionParams,
                      *, L: float = 64.0, h: float = 1.0 / 16, step: float = 1.0 / 64,
                      net: int = 17, psi: DyadicCutoff | None = None) -> VerificationReport:
    """Per-case constants ``lhs / rhs`` and the suite supremum for one assumption.

    Parameters
    ----------
    which : {"A", "B", "C"}
    backend : EuclidGroup
        ``R^n`` with ``n`` in {1, 2}; only (C) depends on the drift.
    suite : sequence of SuiteMember, or a factory ``(L, h) -> suite``
    params : AssumptionParams
    L, h : float
        Lambda grid passed to a suite factory.
    step : float
        Kernel grid step.
    net : int
        Points per dimension of the net of shifts ``y`` for (A).

    Raises
    ------
    SupportViolation
        If a member's Fourier support does not fit the assumption.
    QuadratureDivergence
        If a member does not decay, so its kernel cannot be computed.
    """
    if which not in ("A", "B", "C"):
        raise ValueError(f"unknown assumption {which!r}")
    members = list(suite(L, h) if callable(suite) else suite)
    if not members:
        raise ValueError("the suite is empty")
    for m in members:
        _check_support(m, which)

    def case(m: SuiteMember) -> CaseResult:
        if not np.any(m.F.values):
            return CaseResult(m.id, 0.0, 0.0, 0.0)
        lhs = assumption_lhs(which, m.F, backend, band=m.band, step=step, net=net)
        rhs = _rhs(which, m.F, params, m.band, psi)
        return CaseResult(m.id, lhs, rhs, lhs / rhs if rhs > 0 else float("inf"))

    cases = ordered_map(case, members)
    suite_constant = max(c.constant for c in cases)
    extra: dict = {"lambda_grid": {"L": L, "h": h}, "kernel_step": step}
    verdict = "finite" if np.isfinite(suite_constant) else "infinite"
    if which == "C":
        consts = [c.constant for c in cases if c.constant > 0]
        flat = max(consts) / min(consts) if consts else 1.0
        extra["band_flatness"] = flat
        if flat >= FLATNESS_LIMIT:
            verdict = "not-flat"
    return VerificationReport(which, _backend_dict(backend), _params_dict(params), cases,
                              float(suite_constant), None, verdict, extra)


class AssumptionStability(NamedTuple):
    base: VerificationReport
    refined: VerificationReport  # lambda grid step halved
    doubled: VerificationReport  # lambda domain doubled
    ratio: float  # max / min of the three suite constants
    report: VerificationReport  # base report with ratio and verdict filled in


def assumption_stability(which: str, backend: EuclidGroup, suite: Callable, params: AssumptionParams,
                         *, L: float = 64.0, h: float = 1.0 / 16, **kw) -> AssumptionStability:
    """Suite constants on a base grid, a refined grid and a doubled domain."""
    runs = [verify_assumption(which, backend, suite, params, L=LL, h=hh, **kw)
            for LL, hh in ((L, h), (L, h / 2), (2 * L, h))]
    consts = [r.suite_constant for r in runs]
    lo = min(consts)
    ratio = max(consts) / lo if lo > 0 else (1.0 if max(consts) == 0 else float("inf"))
    base = runs[0]
    verdict = "stable" if ratio < STABILITY_LIMIT else "unstable"
    if base.verdict in ("not-flat", "infinite"):
        verdict = base.verdict
    extra = dict(base.extra, suite_constants={"base": consts[0], "refined": consts[1],
                                              "doubled": consts[2]})
    report = VerificationReport(base.assumption, base.backend, base.params, base.per_case,
                                base.suite_constant, float(ratio), verdict, extra)
    return AssumptionStability(runs[0], runs[1], runs[2], float(ratio), report)
