"""Euclidean backend: Laplacian with drift on R^n.

The group is ``R^n`` with Lebesgue measure and the character
``chi(x) = exp(<v, x>)``. With ``D = sqrt(Laplacian)`` and ``D_X`` its drift
counterpart, kernels satisfy ``k_{F(D_X)} = exp(-<v,x>/2) k_{F(D)}`` and
operators satisfy ``F(D_X) g = chi^(-1/2) F(D) (chi^(1/2) g)``.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from math import gamma
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy import integrate, special

from .errors import QuadratureDivergence, SupportViolation, UnstableConjugation
from .grid import GridFunction, SpectralObject

__all__ = [
    "EuclidGroup", "RadialKernel", "CartesianField", "kernel_of_multiplier", "drift_kernel",
    "apply_multiplier", "finite_propagation_check", "PropagationReport", "plancherel_check",
    "PlancherelReport", "char_ball_integral", "sphere_area", "heat_kernel",
]

_GL_ORDER = 24


def sphere_area(n: int) -> float:
    """Surface area of the unit sphere in ``R^n`` (2 for ``n = 1``)."""
    return 2.0 * np.pi ** (n / 2.0) / gamma(n / 2.0)


def heat_kernel(r, t: float, n: int) -> np.ndarray:
    """``(4 pi t)^(-n/2) exp(-r^2 / 4t)``."""
    r = np.asarray(r, dtype=float)
    return (4.0 * np.pi * t) ** (-n / 2.0) * np.exp(-r ** 2 / (4.0 * t))


@dataclass(frozen=True)
class EuclidGroup:
    """``R^n`` with drift covector ``v``."""

    n: int
    v: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("dimension must be >= 1")
        v = tuple(float(c) for c in self.v) if self.v else (0.0,) * self.n
        if len(v) != self.n:
            raise ValueError("drift vector has the wrong length")
        object.__setattr__(self, "v", v)

    @property
    def drift_norm(self) -> float:
        return float(np.linalg.norm(self.v))

    @property
    def b_X(self) -> float:
        return 0.5 * self.drift_norm

    d0 = property(lambda self: self.n)
    d_inf = property(lambda self: self.n)
    delta = property(lambda self: 1)

    def pairing(self, *coords: np.ndarray) -> np.ndarray:
        """``<v, x>`` on broadcast coordinate arrays."""
        return sum(vi * c for vi, c in zip(self.v, coords))

    def chi(self, *coords: np.ndarray) -> np.ndarray:
        return np.exp(self.pairing(*coords))


@dataclass(frozen=True, eq=False)
class RadialKernel:
    """Radial profile ``k(r)`` of a convolution kernel on ``R^n``."""

    r: np.ndarray
    values: np.ndarray
    n: int
    error: float = 0.0  # quadrature error estimate (max abs)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["r", "re_k", "im_k"])
            for r, k in zip(self.r, self.values):
                w.writerow([repr(float(r)), repr(float(k.real)), repr(float(k.imag))])


@dataclass(frozen=True, eq=False)
class CartesianField:
    """Samples on a tensor grid in ``R^n`` for ``n`` in {1, 2}."""

    axes: tuple[np.ndarray, ...]
    values: np.ndarray

    @property
    def n(self) -> int:
        return len(self.axes)

    @property
    def steps(self) -> tuple[float, ...]:
        return tuple(float(a[1] - a[0]) for a in self.axes)

    @property
    def cell(self) -> float:
        return float(np.prod(self.steps))

    def mesh(self) -> tuple[np.ndarray, ...]:
        return np.meshgrid(*self.axes, indexing="ij")

    def radius(self) -> np.ndarray:
        return np.sqrt(sum(c ** 2 for c in self.mesh()))

    def with_values(self, values: np.ndarray) -> "CartesianField":
        return CartesianField(self.axes, values)

    def to_csv(self, path) -> None:
        coords = [c.ravel() for c in self.mesh()]
        names = ["x", "y"][: self.n]
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(names + ["re_value", "im_value"])
            for row in zip(*coords, self.values.ravel()):
                *xs, val = row
                val = complex(val)
                w.writerow([repr(float(c)) for c in xs] + [repr(val.real), repr(val.imag)])

    @classmethod
    def on_box(cls, f: Callable, half_width: float, step: float, n: int = 1) -> "CartesianField":
        m = int(round(half_width / step))
        axis = step * np.arange(-m, m + 1)
        axes = (axis,) * n
        grids = np.meshgrid(*axes, indexing="ij")
        return cls(axes, np.asarray(f(*grids), dtype=complex) * np.ones(grids[0].shape))


# profiles -----------------------------------------------------------------

def _profile(F, lam_max: float | None) -> tuple[Callable[[np.ndarray], np.ndarray], float, float]:
    """Callable profile, integration cutoff and a resolution scale for ``F``."""
    if isinstance(F, GridFunction):
        # an explicit cutoff means the caller accepts the truncation of the tail
        if lam_max is None and not F.decays():
            raise QuadratureDivergence("multiplier does not decay on its grid; tail is unbounded")
        a = np.abs(F.values[F.m:])
        top = a.max(initial=0.0)
        if top == 0:
            return (lambda lam: np.zeros(np.shape(lam), dtype=complex)), 0.0, F.h
        idx = np.nonzero(a > 1e-17 * top)[0]
        cut = min(F.L, F.h * (idx[-1] + 2)) if lam_max is None else lam_max
        return (lambda lam: F(lam)), float(cut), 8.0 * F.h
    if lam_max is None:
        lam_max = _scan_cutoff(F)
    return (lambda lam: np.asarray(F(lam), dtype=complex) * np.ones(np.shape(lam))), \
        float(lam_max), max(lam_max / 256.0, 1e-3)


def _scan_cutoff(F: Callable, tol: float = 1e-17) -> float:
    probe = np.linspace(0.0, 1.0, 257)
    top = np.abs(F(probe)).max()
    hi = 1.0
    for _ in range(40):
        seg = np.linspace(hi, 2 * hi, 257)
        vals = np.abs(F(seg))
        top = max(top, vals.max())
        if top == 0 or vals.max() < tol * top:
            return hi
        hi *= 2
    raise QuadratureDivergence("multiplier does not decay; tail integral diverges")


def _gl_nodes(width: float, upper: float, order: int) -> tuple[np.ndarray, np.ndarray]:
    n_pan = max(1, int(np.ceil(upper / width)))
    edges = np.linspace(0.0, upper, n_pan + 1)
    x, w = np.polynomial.legendre.leggauss(order)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def _radial_integrand(n: int, r: np.ndarray, lam: np.ndarray) -> np.ndarray:
    """Matrix ``K[i, j]`` such that ``k(r_i) = sum_j K[i, j] F(lam_j) w_j``."""
    z = np.outer(r, lam)
    if n == 1:
        return np.cos(z) / np.pi
    if n == 3:
        with np.errstate(invalid="ignore", divide="ignore"):
            out = np.where(z > 0, np.sin(z) / np.where(z > 0, z, 1.0), 1.0)
        return out * lam[None, :] ** 2 / (2.0 * np.pi ** 2)
    if n == 2:
        return special.j0(z) * lam[None, :] / (2.0 * np.pi)
    nu = n / 2.0 - 1.0
    # (2 pi)^(-n/2) r^(-nu) J_nu(lam r) lam^(n/2) = (2 pi)^(-n/2) lam^(n-1) J_nu(z)/z^nu
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = np.where(z > 0, special.jv(nu, z) / np.where(z > 0, z, 1.0) ** nu,
                         1.0 / (2.0 ** nu * gamma(nu + 1.0)))
    return (2.0 * np.pi) ** (-n / 2.0) * lam[None, :] ** (n - 1) * ratio


def kernel_of_multiplier(F, n: int, r: Sequence[float] | np.ndarray | None = None, *,
                         lam_max: float | None = None, order: int = _GL_ORDER,
                         chunk: int = 256) -> RadialKernel:
    """Radial kernel of ``F(sqrt(Laplacian))`` on ``R^n``.

    ``k(r) = (2 pi)^(-n/2) r^(1-n/2) int_0^inf F(lam) J_{n/2-1}(lam r) lam^(n/2) dlam``,
    evaluated with composite Gauss-Legendre panels no wider than half a Bessel
    period. A half-order rule on the same panels provides the error estimate.

    Parameters
    ----------
    F : GridFunction or callable
        Even profile in ``lam``; callables are evaluated for ``lam >= 0``.
    n : int
        Dimension.
    r : array_like, optional
        Output radii (default ``linspace(0, 10, 401)``).
    lam_max : float, optional
        Integration cutoff; inferred from the decay of ``F`` when omitted.

    Raises
    ------
    QuadratureDivergence
        If ``F`` does not decay, so the tail cannot be bounded.
    """
    r = np.linspace(0.0, 10.0, 401) if r is None else np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("radii must be non-negative")
    prof, cut, res = _profile(F, lam_max)
    out = np.zeros(r.shape, dtype=complex)
    err = 0.0
    if cut == 0 or r.size == 0:
        return RadialKernel(r, out, n, 0.0)
    order_lo = max(4, order // 2)
    start = 0
    while start < r.size:
        # panel widths follow the largest radius in the chunk; cap the matrix size
        width = min(np.pi / max(r[min(start + chunk, r.size) - 1], r[start:start + chunk].max(),
                                1e-12), res)
        nodes, weights = _gl_nodes(width, cut, order)
        size = max(1, min(chunk, int(4_000_000 // nodes.size)))
        sl = slice(start, min(start + size, r.size))
        start = sl.stop
        rr = r[sl]
        fvals = prof(nodes)
        out[sl] = _radial_integrand(n, rr, nodes) @ (fvals * weights)
        nodes2, weights2 = _gl_nodes(width, cut, order_lo)
        coarse = _radial_integrand(n, rr, nodes2) @ (prof(nodes2) * weights2)
        err = max(err, float(np.abs(coarse - out[sl]).max()))
    return RadialKernel(r, out, n, err)


def drift_kernel(F, G: EuclidGroup, half_width: float = 8.0, step: float = 1.0 / 32,
                 **kwargs) -> CartesianField:
    """Kernel of ``F(D_X)``: ``exp(-<v,x>/2) k_{F(D)}(|x|)`` on a Cartesian grid.

    Only ``n`` in {1, 2} is supported on Cartesian grids.
    """
    if G.n not in (1, 2):
        raise ValueError("Cartesian kernels are available for n = 1, 2")
    m = int(round(half_width / step))
    axis = step * np.arange(-m, m + 1)
    axes = (axis,) * G.n
    grids = np.meshgrid(*axes, indexing="ij")
    rad = np.sqrt(sum(c ** 2 for c in grids))
    if G.n == 1:
        radii = np.abs(axis[m:])
        k = kernel_of_multiplier(F, 1, radii, **kwargs).values
        prof = np.concatenate([k[:0:-1], k])
    else:
        # exact evaluation at the distinct grid distances
        radii, inverse = np.unique(rad, return_inverse=True)
        k = kernel_of_multiplier(F, G.n, radii, **kwargs).values
        prof = k[inverse.reshape(rad.shape)]
    weight = np.exp(-0.5 * G.pairing(*grids))
    return CartesianField(axes, weight * prof)


# multipliers on fields ----------------------------------------------------

def _multiplier_values(M, lam: np.ndarray) -> np.ndarray:
    if isinstance(M, GridFunction):
        return M(lam, extension="edge")
    if callable(M):
        return np.asarray(M(lam), dtype=complex) * np.ones(lam.shape)
    return np.full(lam.shape, complex(M))


def _pad_axes(axes: tuple[np.ndarray, ...], pad: float) -> tuple[np.ndarray, ...]:
    out = []
    for a in axes:
        step = a[1] - a[0]
        k = int(np.ceil(pad / step))
        out.append(np.concatenate([a[0] - step * np.arange(k, 0, -1), a,
                                   a[-1] + step * np.arange(1, k + 1)]))
    return tuple(out)


def apply_multiplier(M, g: CartesianField, G: EuclidGroup, *, pad: float = 0.0,
                     guard: float = 1e12, smoothing: float = 0.0) -> CartesianField:
    """Apply ``M(D_X)`` to ``g`` via ``chi^(-1/2) M(D) chi^(1/2)``.

    ``M(D)`` is the Fourier multiplier ``M(|xi|)``. The field is zero-padded by
    ``pad`` on every side and the result is returned on the padded grid, since
    ``M(D_X) g`` is generally not compactly supported. A positive ``smoothing``
    multiplies the symbol by ``exp(-(smoothing |xi|)^2)``, which removes the
    algebraic tail a symbol that is not small at the Nyquist frequency leaves
    in the grid kernel (relevant under exponential weights).

    Raises
    ------
    UnstableConjugation
        If ``chi^(1/2)`` varies by more than ``guard`` over the support of ``g``.
    """
    if g.n != G.n:
        raise ValueError("field dimension does not match the group")
    axes = _pad_axes(g.axes, pad) if pad > 0 else g.axes
    vals = np.zeros(tuple(a.size for a in axes), dtype=complex)
    offs = tuple((a.size - b.size) // 2 for a, b in zip(axes, g.axes))
    vals[tuple(slice(o, o + b.size) for o, b in zip(offs, g.axes))] = g.values
    grids = np.meshgrid(*axes, indexing="ij")
    half = 0.5 * G.pairing(*grids) * np.ones(vals.shape)
    supp = vals != 0
    if not supp.any():
        return CartesianField(axes, vals)
    hi, lo = half[supp].max(), half[supp].min()
    if hi - lo > np.log(guard):
        raise UnstableConjugation(
            f"chi^(1/2) spans {np.exp(hi - lo):.2e} over the support (guard {guard:.1e})")
    # shift the exponent so the largest weight on the support is 1
    with np.errstate(over="ignore", invalid="ignore"):
        lifted = np.where(supp, np.exp(np.minimum(half - hi, 0.0)) * vals, 0.0)
    freqs = [2.0 * np.pi * np.fft.fftfreq(a.size, a[1] - a[0]) for a in axes]
    xi = np.sqrt(sum(f ** 2 for f in np.meshgrid(*freqs, indexing="ij")))
    symbol = _multiplier_values(M, xi)
    if smoothing > 0:
        symbol = symbol * np.exp(-(smoothing * xi) ** 2)
    out = np.fft.ifftn(np.fft.fftn(lifted) * symbol)
    with np.errstate(over="ignore"):
        result = np.exp(hi - half) * out
    return CartesianField(axes, result)


# verification helpers -----------------------------------------------------

class PropagationReport(NamedTuple):
    passed: bool
    leaked_fraction: float
    radius: float  # r (1 + eps)
    eps: float
    support_radius: float  # smallest radius holding all but tol of the mass
    smoothing: float  # window frequency Lambda


def _band_limited_profile(F_hat: SpectralObject, r: float):
    """Transform of the piecewise-linear interpolant of the samples of ``F^``."""
    xi = F_hat.xi
    keep = np.abs(F_hat.values) > 0
    xs, fs = xi[keep], F_hat.values[keep]
    d = xi[1] - xi[0]

    def prof(lam):
        lam = np.asarray(lam, dtype=float)
        out = np.empty(lam.shape, dtype=complex)
        flat = lam.ravel()
        res = np.empty(flat.shape, dtype=complex)
        for s in range(0, flat.size, 4096):
            part = flat[s:s + 4096]
            res[s:s + 4096] = np.exp(1j * np.outer(part, xs)) @ fs
        theta = 0.5 * flat * d
        res *= d * np.sinc(theta / np.pi) ** 2 / (2.0 * np.pi)
        out[...] = res.reshape(lam.shape)
        return out

    return prof


def finite_propagation_check(F_hat: SpectralObject, r: float, tol: float = 1e-6, n: int = 1,
                             eps: float = 0.05, n_radii: int = 400) -> PropagationReport:
    """Check that the kernel of ``F(D)`` vanishes outside the ball of radius ``r``.

    The kernel is computed for ``F(lam) exp(-lam^2 / Lambda^2)``, which convolves
    it with a heat kernel of width ``~1/Lambda``. ``Lambda`` is chosen so that
    this smoothing moves a fraction below ``1e-12`` of the mass beyond
    ``eps r``; the remaining leak measures the kernel computation itself.

    Raises
    ------
    SupportViolation
        If ``F^`` has samples above ``1e-10`` (relative) outside ``[-r, r]``.
    """
    xi = F_hat.xi
    top = np.abs(F_hat.values).max(initial=0.0)
    if top == 0:
        return PropagationReport(True, 0.0, r * (1 + eps), eps, 0.0, 0.0)
    if np.abs(F_hat.values[np.abs(xi) > r * (1 + 1e-12)]).max(initial=0.0) > 1e-10 * top:
        raise SupportViolation(f"transform is not supported in [-{r}, {r}]")
    Lam = 2.0 * np.sqrt(np.log(1e12)) / (eps * r)
    base = _band_limited_profile(F_hat, r)
    step = 0.05 / r
    lam_tab = np.arange(0.0, 6.0 * Lam + step, step)
    tab = base(lam_tab) * np.exp(-(lam_tab / Lam) ** 2)
    L_tab = step * (lam_tab.size - 1)
    prof_grid = GridFunction(L_tab, step, np.concatenate([tab[:0:-1], tab]), "none")
    radii = np.linspace(0.0, 2.0 * r, n_radii + 1)
    k = kernel_of_multiplier(prof_grid, n, radii, lam_max=L_tab).values
    dens = np.abs(k) * sphere_area(n) * radii ** (n - 1)
    cum = integrate.cumulative_trapezoid(dens, radii, initial=0.0)
    total = cum[-1]
    outside = total - np.interp(r * (1 + eps), radii, cum)
    frac = float(outside / total) if total > 0 else 0.0
    inside = np.nonzero(cum >= (1.0 - tol) * total)[0]
    supp = float(radii[inside[0]]) if inside.size else float(radii[-1])
    return PropagationReport(frac < tol, frac, r * (1 + eps), eps, supp, float(Lam))


class PlancherelReport(NamedTuple):
    kernel_norm: float
    spectral_norm: float
    ratio: float


def plancherel_check(F, n: int, r_max: float = 60.0, *, lam_max: float | None = None,
                     panel: float = 0.25) -> PlancherelReport:
    """Compare ``||k_{F(D)}||_{L^2}`` with ``(int |F|^2 c_n lam^(n-1) dlam)^(1/2)``.

    ``c_n = |S^(n-1)| / (2 pi)^n`` (for ``n = 1`` this is ``1/pi``).
    """
    prof, cut, _ = _profile(F, lam_max)
    c_n = sphere_area(n) / (2.0 * np.pi) ** n
    if cut == 0:
        return PlancherelReport(0.0, 0.0, float("nan"))
    lam, wl = _gl_nodes(min(panel, cut / 64), cut, 16)
    spectral = np.sqrt(np.sum(np.abs(prof(lam)) ** 2 * lam ** (n - 1) * wl) * c_n)
    rad, wr = _gl_nodes(panel, r_max, 16)
    k = kernel_of_multiplier(F, n, rad, lam_max=lam_max).values
    kernel = np.sqrt(np.sum(np.abs(k) ** 2 * sphere_area(n) * rad ** (n - 1) * wr))
    ratio = kernel / spectral if spectral > 0 else float("nan")
    return PlancherelReport(float(kernel), float(spectral), float(ratio))


def char_ball_integral(G: EuclidGroup, r: float) -> float:
    """``int_{|x| <= r} exp(<v, x>) dx`` by one-dimensional quadrature along ``v``."""
    if r < 0:
        raise ValueError("radius must be non-negative")
    a, n = G.drift_norm, G.n
    if n == 1:
        f = lambda s: np.exp(a * s)
    else:
        m = n - 1
        vol = np.pi ** (m / 2.0) / gamma(m / 2.0 + 1.0)
        f = lambda s: np.exp(a * s) * vol * max(r * r - s * s, 0.0) ** (m / 2.0)
    # factor out exp(a r) for accuracy at large radii
    val, _ = integrate.quad(lambda s: f(s) * np.exp(-a * r), -r, r, epsabs=0.0, epsrel=1e-13,
                            limit=200)
    return float(val * np.exp(a * r))
