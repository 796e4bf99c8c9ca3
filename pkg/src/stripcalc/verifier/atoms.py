"""Atoms at scale 1, the bmo norm and atom-wise ``h^1 -> L^1`` bounds on ``R^n``.

All integrals are Riemann sums on the sample grid, so the invariants of a
generated atom hold exactly for the discrete measure
``mu_X = exp(<v,x>) dx`` (up to rounding).
"""

from __future__ import annotations

from typing import Literal, NamedTuple, Sequence

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from ..errors import BadRadius
from ..euclid import CartesianField, EuclidGroup, apply_multiplier
from ..paley_wiener import make_cutoff_family
from ._parallel import ordered_map, task_rng
from .multipliers import MultiplierSpec

__all__ = ["Atom", "make_atom", "atom_suite", "atom_invariants", "AtomInvariants",
           "bmo_norm", "BmoNorm", "local_kernel", "hormander_constants", "HormanderConstants",
           "h1_atomwise_bound", "H1Bound", "l1_mu"]

Kind = Literal["standard", "global"]
DEFAULT_STEP = 1.0 / 64


class Atom(NamedTuple):
    center: tuple[float, ...]
    radius: float
    kind: str
    field: CartesianField  # samples on a box around the ball, zero outside it
    mu_ball: float  # mu_X(B) as a Riemann sum


def _weights(field: CartesianField, G: EuclidGroup) -> np.ndarray:
    return np.exp(G.pairing(*field.mesh())) * field.cell * np.ones(field.values.shape)


def l1_mu(field: CartesianField, G: EuclidGroup) -> float:
    """``||f||_{L^1(mu_X)}`` as a Riemann sum."""
    return float(np.sum(np.abs(field.values) * _weights(field, G)))


def _bump(s: np.ndarray) -> np.ndarray:
    out = np.zeros_like(s)
    inside = s < 1.0
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - s[inside] ** 2))
    return out


def make_atom(kind: Kind, center, radius: float, backend: EuclidGroup, *,
              step: float | None = None, profile: str = "bumps",
              rng: np.random.Generator | None = None, margin: float = 0.0) -> Atom:
    """An ``L^2(mu_X)``-saturated atom supported in the closed ball ``B(center, radius)``.

    Parameters
    ----------
    kind : {"standard", "global"}
        Standard atoms have ``int a dmu_X = 0``; global atoms do not.
    profile : {"bumps", "random", "steps"}
        ``bumps``: two opposite bumps on the halves of the ball (one bump for
        global atoms); ``random``: a seeded random field times a bump;
        ``steps``: ``+-1`` on the two halves (the indicator profile).
    margin : float
        Extra zero samples around the ball.

    Raises
    ------
    BadRadius
        If ``radius`` is not in ``(0, 1]``.
    """
    if kind not in ("standard", "global"):
        raise ValueError("kind must be 'standard' or 'global'")
    if not 0.0 < radius <= 1.0:
        raise BadRadius("atoms live on balls of radius at most 1")
    center = tuple(float(c) for c in np.atleast_1d(center))
    if len(center) != backend.n:
        raise ValueError("center has the wrong dimension")
    step = step or min(DEFAULT_STEP, radius / 16.0)
    m = int(np.ceil((radius + margin) / step))
    axes = tuple(c + step * np.arange(-m, m + 1) for c in center)
    field = CartesianField(axes, np.zeros((2 * m + 1,) * backend.n, dtype=complex))
    rel = [g - c for g, c in zip(field.mesh(), center)]
    dist = np.sqrt(sum(r ** 2 for r in rel))
    ball = dist <= radius * (1.0 + 1e-12)
    x1 = rel[0]
    if profile == "bumps":
        if kind == "standard":
            off = [np.where(i == 0, 0.5 * radius, 0.0) for i in range(backend.n)]
            plus = _bump(np.sqrt(sum((r - o) ** 2 for r, o in zip(rel, off))) / (0.5 * radius))
            minus = _bump(np.sqrt(sum((r + o) ** 2 for r, o in zip(rel, off))) / (0.5 * radius))
            raw = plus - minus
        else:
            raw = _bump(dist / radius)
    elif profile == "steps":
        raw = np.sign(x1) if kind == "standard" else np.ones(dist.shape)
    elif profile == "random":
        rng = rng or np.random.default_rng(0)
        raw = (rng.standard_normal(dist.shape) + 1j * rng.standard_normal(dist.shape))
        raw = raw * (0.25 + _bump(dist / radius))
    else:
        raise ValueError(f"unknown atom profile {profile!r}")
    raw = np.where(ball, raw, 0.0).astype(complex)
    w = _weights(field, backend)
    mu = float(np.sum(w[ball]))
    if kind == "standard":
        # remove the mu_X-mean along the positive bump on the whole ball
        base = np.where(ball, _bump(dist / radius) + (profile == "steps"), 0.0)
        raw = raw - base * (np.sum(raw * w) / np.sum(base * w))
        raw = raw - base * (np.sum(raw * w) / np.sum(base * w))  # second pass for rounding
    norm2 = float(np.sqrt(np.sum(np.abs(raw) ** 2 * w)))
    if norm2 == 0:
        raise ValueError("degenerate atom profile")
    vals = raw * (mu ** -0.5 / norm2)
    return Atom(center, float(radius), kind, field.with_values(vals), mu)


class AtomInvariants(NamedTuple):
    l2_ratio: float  # ||a||_{L^2(mu_X)} mu_X(B)^{1/2}, should be <= 1
    mean: float  # |int a dmu_X| / max(1, ||a||_{L^1(mu_X)})
    support_ok: bool


def atom_invariants(atom: Atom, backend: EuclidGroup) -> AtomInvariants:
    f = atom.field
    w = _weights(f, backend)
    l2 = float(np.sqrt(np.sum(np.abs(f.values) ** 2 * w)))
    mean = abs(complex(np.sum(f.values * w))) / max(1.0, l1_mu(f, backend))
    dist = np.sqrt(sum((g - c) ** 2 for g, c in zip(f.mesh(), atom.center)))
    support_ok = bool(np.all(f.values[dist > atom.radius * (1.0 + 1e-12)] == 0))
    return AtomInvariants(l2 * np.sqrt(atom.mu_ball), float(mean), support_ok)


def atom_suite(backend: EuclidGroup, count: int = 100, seed: int = 0, *,
               kinds: Sequence[str] = ("standard", "global"), spread: float = 4.0,
               profiles: Sequence[str] = ("bumps", "random", "steps"), margin: float = 0.0
               ) -> list[Atom]:
    """Seeded atoms with random centers in ``[-spread, spread]^n`` and radii in ``(0, 1]``."""
    atoms = []
    for i in range(count):
        rng = task_rng(seed, i)
        center = rng.uniform(-spread, spread, size=backend.n)
        radius = float(rng.uniform(0.05, 1.0)) if i % 5 else 1.0
        kind = kinds[i % len(kinds)]
        prof = profiles[(i // len(kinds)) % len(profiles)]
        atoms.append(make_atom(kind, center, radius, backend, profile=prof, rng=rng,
                               margin=margin))
    return atoms


# bmo ------------------------------------------------------------------------

class BmoNorm(NamedTuple):
    value: float
    oscillation: float  # sup_B (mean_B |g - g_B|^2)^(1/2)
    local_l2: float  # sup_x (mean_{B(x,1)} |g|^2)^(1/2)


def _window_stats(g: np.ndarray, w: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Weighted mean of |g - g_B|^2 and of |g|^2 over all windows of 2k+1 samples."""
    gw = sliding_window_view(g, 2 * k + 1)
    ww = sliding_window_view(w, 2 * k + 1)
    mu = ww.sum(axis=1)
    mean = (gw * ww).sum(axis=1) / mu
    osc = (np.abs(gw - mean[:, None]) ** 2 * ww).sum(axis=1) / mu
    sq = (np.abs(gw) ** 2 * ww).sum(axis=1) / mu
    return osc, sq


def bmo_norm(g: CartesianField, backend: EuclidGroup, radii: Sequence[float] | None = None,
             center_stride: int = 1) -> BmoNorm:
    """Discrete bmo norm over balls contained in the sampled box.

    The oscillation term is a sup over balls of radius ``<= 1`` centred at
    grid points (every ``center_stride``-th in 2-D); the second term uses the
    unit balls. The function itself is used, not a class modulo constants.
    """
    step = g.steps[0]
    if radii is None:
        kmax = int(round(1.0 / step))
        ks = sorted({int(k) for k in np.unique(np.geomspace(1, kmax, 24).round())} | {kmax})
    else:
        ks = sorted({max(1, int(round(r / step))) for r in radii if r <= 1.0 + 1e-12})
    k_unit = int(round(1.0 / step))
    vals = np.asarray(g.values)
    w = _weights(g, backend)
    shift = np.log(w[w > 0]).max() if np.any(w > 0) else 0.0
    w = w / np.exp(shift)  # ratios only; avoids overflow in the sums
    osc_best = 0.0
    l2_best = 0.0
    if g.n == 1:
        for k in ks + ([k_unit] if k_unit not in ks else []):
            if 2 * k + 1 > vals.size:
                continue
            osc, sq = _window_stats(vals, w, k)
            if k in ks:
                osc_best = max(osc_best, float(osc.max()))
            if k == k_unit:
                l2_best = max(l2_best, float(sq.max()))
    else:
        mesh = g.mesh()
        idx = [np.arange(0, a.size, center_stride) for a in g.axes]
        for k in sorted(set(ks) | {k_unit}):
            r = k * step
            for i in idx[0]:
                for j in idx[1]:
                    if min(i, j) < k or i + k >= g.axes[0].size or j + k >= g.axes[1].size:
                        continue
                    sl = (slice(i - k, i + k + 1), slice(j - k, j + k + 1))
                    d2 = (mesh[0][sl] - g.axes[0][i]) ** 2 + (mesh[1][sl] - g.axes[1][j]) ** 2
                    inside = d2 <= r * r * (1 + 1e-12)
                    gg, ww = vals[sl][inside], w[sl][inside]
                    mu = ww.sum()
                    mean = (gg * ww).sum() / mu
                    if k in ks:
                        osc_best = max(osc_best, float((np.abs(gg - mean) ** 2 * ww).sum() / mu))
                    if k == k_unit:
                        l2_best = max(l2_best, float((np.abs(gg) ** 2 * ww).sum() / mu))
    osc, loc = np.sqrt(osc_best), np.sqrt(l2_best)
    return BmoNorm(float(osc + loc), float(osc), float(loc))


# Hormander-type constants of the local part ---------------------------------------

def local_kernel(M: MultiplierSpec, G: EuclidGroup, step: float = 1.0 / 256,
                 half_width: float | None = None) -> tuple[np.ndarray, np.ndarray]:
    """``u -> exp(<v,u>/2) k_loc(u)`` on ``R^1``, where ``k_loc = eta^ k_{M(D)}``.

    The kernel of ``M(D)`` is the transform of ``M(|lam|) exp(-(1.5 step lam)^2)``
    on a grid of step ``step``; the Gaussian damping makes the transform of
    non-decaying multipliers well defined and only smooths at scale ``2 step``.
    """
    if G.n != 1:
        raise NotImplementedError("local kernels are implemented on R^1")
    kappa = min(M.decay_rate, 50.0)
    U = half_width or (2.0 + 20.0 / kappa)
    m = int(np.ceil(U / step))
    u = step * np.arange(-m, m + 1)
    lam = 2.0 * np.pi * np.fft.fftfreq(u.size, step)
    symbol = M(np.abs(lam)) * np.exp(-(1.5 * step * lam) ** 2)
    k = np.fft.fftshift(np.fft.ifft(symbol)) / step
    local = make_cutoff_family().eta_hat(u) * k
    return u, np.exp(0.5 * G.v[0] * u) * local


class HormanderConstants(NamedTuple):
    N1: float
    N2: float
    radii: tuple[float, ...]


def hormander_constants(M: MultiplierSpec, G: EuclidGroup, *, step: float = 1.0 / 256,
                        radii: Sequence[float] = (1 / 16, 1 / 8, 1 / 4, 1 / 2, 1.0),
                        net: int = 9) -> HormanderConstants:
    """The two integral-kernel constants of ``M_loc(D_X)`` on a net of balls.

    ``N1 = sup_{r, y, z} int_{|u+y| >= 2r} |l(u) - l(u + y - z)| du`` with
    ``y, z`` on a net of ``[-r, r]`` and ``l(u) = exp(<v,u>/2) k_loc(u)``;
    ``N2 = int_{|u| >= 2} |l(u)| du``. Both follow from translation invariance
    of the ``mu_X`` kernel ``K(x, y) = l(x - y) exp(-<v,y>) exp(<v, x - y>/2)``.
    """
    u, ell = local_kernel(M, G, step)
    absd = np.abs
    n1 = 0.0
    for r in radii:
        pts = np.rint(np.linspace(-r, r, net) / step).astype(int)
        for a in pts:
            y = a * step
            outside = np.abs(u + y) >= 2.0 * r - 1e-12
            for b in pts:
                if a == b:
                    continue
                moved = np.roll(ell, -(a - b))  # l(u + y - z)
                n1 = max(n1, float(np.sum(absd(ell - moved)[outside]) * step))
    n2 = float(np.sum(absd(ell)[np.abs(u) >= 2.0]) * step)
    return HormanderConstants(n1, n2, tuple(float(r) for r in radii))


class H1Bound(NamedTuple):
    suite_sup: float  # sup over atoms of ||M(D_X) a||_{L^1(mu_X)}
    per_atom: tuple[float, ...]
    hormander: HormanderConstants | None


def h1_atomwise_bound(M: MultiplierSpec, backend: EuclidGroup, atoms: Sequence[Atom], *,
                      pad: float | None = None, smoothing: float | None = None,
                      constants: bool = True) -> H1Bound:
    """``sup_a ||M(D_X) a||_{L^1(mu_X)}`` over the atoms, plus the local-part constants.

    Parameters
    ----------
    pad : float, optional
        Zero padding around each atom. By default it covers 16 decay lengths
        of ``exp(|v| |u| / 2) k(u)``, whose rate is ``validity - |v|/2``.
    smoothing : float, optional
        Symbol damping passed to :func:`apply_multiplier`; defaults to 2.7
        grid steps (0 for the identity, whose grid kernel is exact). At that
        scale the symbol is below ``1e-31`` at the Nyquist frequency, so the
        exponential weight cannot amplify the grid kernel's algebraic tail.
    """
    rate = min(M.decay_rate, 50.0) - 0.5 * backend.drift_norm
    if pad is None:
        pad = 0.0 if M.family == "identity" else 4.0 + 16.0 / max(rate, 0.1)

    def one(atom: Atom) -> float:
        eps = smoothing
        if eps is None:
            eps = 0.0 if M.family == "identity" else 2.7 * atom.field.steps[0]
        out = apply_multiplier(M, atom.field, backend, pad=pad, smoothing=eps)
        return l1_mu(out, backend)

    per = tuple(ordered_map(one, atoms))
    consts = hormander_constants(M, backend) if constants and backend.n == 1 else None
    return H1Bound(float(max(per)) if per else 0.0, per, consts)
