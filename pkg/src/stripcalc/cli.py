"""Command-line front end: every harness capability as a subcommand emitting CSV or JSON.

Exit codes: 0 success, 1 usage or input error, 2 a mathematical verdict failed.
Options can also come from a ``key = value`` config file (``--config``);
flags given on the command line win. Every output embeds the effective
configuration and the git-style blob hash of its inputs, and identical
configurations produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import errors
from .euclid import CartesianField, EuclidGroup, drift_kernel, heat_kernel, kernel_of_multiplier
from .grid import GridFunction
from .paley_wiener import (band_piece, local_global_split, pw_decay_check, pw_decay_fit,
                           symmetric_band)
from .solvable import SolvableGroup, ball_integral_sweep, write_sweep_csv
from .spaces import bessel_norm, pointwise_norms, sloc_norm, weighted_sobolev_norm
from .verifier import (AssumptionParams, atom_invariants, atom_suite, band_suite, bmo_norm,
                       dyadic_suite, h1_atomwise_bound, operator_norm_scaling, parabola_map,
                       smoothness_threshold, assumption_stability)
from .verifier.multipliers import MultiplierSpec, gaussian, identity, imaginary_power, resolvent_power
from .verifier.report import jsonable

DEFAULT_SEED = 20240101
SUBCOMMANDS = ("norm", "split", "pw-check", "kernel", "verify-assumptions", "threshold",
               "parabola", "operator-norm", "atoms", "bmo", "solvable-integrals", "report")


class UsageError(Exception):
    """Bad command line, config file or input data (exit code 1)."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit with status 2
        raise UsageError(f"{self.prog}: {message}")


# value parsers ------------------------------------------------------------------

def _real(text: str) -> float:
    t = text.strip().lower()
    if t in ("inf", "+inf", "infinity"):
        return math.inf
    try:
        return float(Fraction(t)) if "/" in t else float(t)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc


def _exact(text: str) -> Fraction | float:
    t = text.strip().lower()
    if t in ("inf", "+inf", "infinity"):
        return math.inf
    try:
        return Fraction(t)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _reals(text: str) -> list[float]:
    return [_real(t) for t in text.split(",") if t.strip()]


def _ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a list of integers: {text!r}") from exc


def _letters(text: str) -> list[str]:
    out = [t.strip().upper() for t in text.split(",") if t.strip()]
    if not out or any(t not in ("A", "B", "C") for t in out):
        raise argparse.ArgumentTypeError("choose among A, B, C")
    return out


# config, hashing and output -------------------------------------------------------

def read_config(path: str) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path!r}: {exc}") from exc
    cfg: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        cfg[key.replace("-", "_")] = value
    return cfg


def blob_hash(data: bytes) -> str:
    """Git-style content hash: ``sha1(b"blob <len>\\0" + data)``."""
    return hashlib.sha1(b"blob %d\0" % len(data) + data).hexdigest()


def _fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    if isinstance(x, (complex, np.complexfloating)):
        return repr(complex(x))
    return str(x)


@dataclass
class RunConfig:
    subcommand: str
    options: dict
    input_bytes: bytes = b""
    outputs: list[tuple[str, str]] = field(default_factory=list)  # (suffix, text)

    def as_dict(self) -> dict:
        return jsonable({"subcommand": self.subcommand, **dict(sorted(self.options.items()))})

    @property
    def input_hash(self) -> str:
        payload = self.input_bytes or json.dumps(self.as_dict(), sort_keys=True).encode()
        return blob_hash(payload)

    def header(self) -> str:
        cfg = json.dumps(self.as_dict(), sort_keys=True)
        return f"# config: {cfg}\n# input_sha1: {self.input_hash}\n"

    def emit_csv(self, header: Sequence[str], rows: Sequence[Sequence], suffix: str = "csv"):
        buf = io.StringIO()
        buf.write(self.header())
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(x) for x in row])
        self.outputs.append((suffix, buf.getvalue()))

    def emit_json(self, payload: dict, suffix: str = "json"):
        data = {"config": self.as_dict(), "input_sha1": self.input_hash, **jsonable(payload)}
        self.outputs.append((suffix, json.dumps(data, sort_keys=True, indent=2) + "\n"))

    def emit_text(self, lines: Sequence[str], suffix: str = "txt"):
        self.outputs.append((suffix, "".join(f"{ln}\n" for ln in lines)))


# inputs -----------------------------------------------------------------------------

NAMED_FUNCTIONS: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "zero": lambda x: np.zeros_like(x),
    "one": lambda x: np.ones_like(x),
    "gaussian": lambda x: np.exp(-x ** 2),
    "sech": lambda x: 1.0 / np.cosh(x),
    "sign": np.sign,
    "heat": lambda x: np.exp(-x ** 2),
    "imaginary-power": lambda x: np.exp(1j * np.log1p(x ** 2)),
}


def read_samples(path: str) -> tuple[np.ndarray, np.ndarray, bytes]:
    """Read ``x,value`` or ``x,re_value,im_value`` samples (header optional)."""
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read input {path!r}: {exc}") from exc
    rows = [r for r in csv.reader(io.StringIO(data.decode()))
            if r and not r[0].lstrip().startswith("#")]
    if rows and not _is_number(rows[0][0]):
        rows = rows[1:]
    if not rows:
        raise UsageError(f"{path}: no samples")
    try:
        arr = np.array([[float(c) for c in r] for r in rows])
    except ValueError as exc:
        raise UsageError(f"{path}: non-numeric sample") from exc
    if arr.ndim != 2 or arr.shape[1] not in (2, 3):
        raise UsageError(f"{path}: expected 2 or 3 columns")
    vals = arr[:, 1] + (1j * arr[:, 2] if arr.shape[1] == 3 else 0.0)
    return arr[:, 0], vals, data


def _is_number(s: str) -> bool:
    try:
        float(s)
        return True
    except ValueError:
        return False


def grid_from_samples(x: np.ndarray, vals: np.ndarray) -> GridFunction:
    if x.size % 2 == 0 or x.size < 5:
        raise UsageError("samples must have an odd count of at least 5")
    h = float(x[1] - x[0])
    if h <= 0 or not np.allclose(np.diff(x), h, rtol=1e-9, atol=1e-12):
        raise UsageError("samples must be uniformly spaced and increasing")
    L = float(x[-1])
    if not math.isclose(-x[0], L, rel_tol=1e-9, abs_tol=1e-12):
        raise UsageError("samples must be centred at 0")
    try:
        return GridFunction(L, h, vals.astype(complex))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def load_function(args, run: RunConfig) -> GridFunction:
    if getattr(args, "input", None):
        x, vals, data = read_samples(args.input)
        run.input_bytes = data
        return grid_from_samples(x, vals)
    name = args.function
    if name not in NAMED_FUNCTIONS:
        raise UsageError(f"unknown function {name!r}; choose from {sorted(NAMED_FUNCTIONS)}")
    f = NAMED_FUNCTIONS[name]
    return GridFunction.sample(f, args.L, args.h, "even" if name != "sign" else "odd")


def _nyquist(h: float, top: float, what: str) -> None:
    if top >= math.pi / h:
        raise UsageError(f"grid step {h} cannot resolve {what} up to {top} "
                         f"(Nyquist frequency {math.pi / h:.4g})")


def _multiplier(args) -> MultiplierSpec:
    fam = args.family
    if fam == "imaginary-power":
        return imaginary_power(args.param, args.b)
    if fam == "resolvent-power":
        return resolvent_power(args.param, args.b)
    if fam == "gaussian":
        return gaussian(args.param or 1.0)
    if fam == "identity":
        return identity()
    raise UsageError(f"unknown multiplier family {fam!r}")


def _euclid(args) -> EuclidGroup:
    v = tuple(args.v) if args.v else ()
    if v and len(v) != args.n:
        raise UsageError("--v needs one component per dimension")
    return EuclidGroup(args.n, v)


# subcommands ------------------------------------------------------------------------

def cmd_norm(args, run: RunConfig) -> int:
    F = load_function(args, run)
    kind = args.kind
    if kind == "bessel":
        value = bessel_norm(F, args.sigma, args.q, check=not args.no_decay_check)
    elif kind == "weighted":
        value = weighted_sobolev_norm(F, args.sigma, args.tau, args.q, args.r)
    elif kind == "sloc":
        value = sloc_norm(F, args.sigma, args.q).value
    elif kind == "pointwise":
        value = pointwise_norms(F, args.N, args.tau, args.variant, args.q)
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(kind)
    run.emit_csv(["kind", "sigma", "tau", "q", "r", "value"],
                 [[kind, args.sigma, args.tau, args.q, args.r, value]])
    return 0


def cmd_split(args, run: RunConfig) -> int:
    F = load_function(args, run)
    _nyquist(F.h, 2.0 if args.band is None else float(args.band), "the band")
    loc, glob = local_global_split(F)
    cols = ["lam", "re_M", "im_M", "re_local", "im_local", "re_global", "im_global"]
    series = [F.values, loc.values, glob.values]
    if args.band is not None:
        piece = band_piece(F, args.band).to_grid()
        cols += ["re_band", "im_band"]
        series.append(piece.values)
    rows = [[x] + [c for v in vals for c in (v.real, v.imag)]
            for x, vals in zip(F.x, zip(*series))]
    run.emit_csv(cols, rows)
    return 0


def cmd_pw_check(args, run: RunConfig) -> int:
    _nyquist(args.h, max(args.R) + args.width, "the test transforms")
    points = []
    for R in args.R:
        F = symmetric_band(R, R + args.width, args.L, args.h)
        points.append(pw_decay_check(F, args.sigma, args.b, args.W, args.q, R=R))
    fit = pw_decay_fit(points, args.sigma) if len(points) > 1 else None
    ok = fit is not None and abs(fit.fitted_W - args.W) <= 0.1 * args.W and fit.spread < 10
    rows = [[p.param, p.lhs, p.rhs, p.normalized] for p in points]
    run.emit_csv(["R", "lhs", "rhs", "normalized"], rows)
    if fit is not None:
        run.emit_json({"fitted_W": fit.fitted_W, "spread": fit.spread, "W": args.W,
                       "verdict": "pass" if ok else "fail"})
    return 0 if ok else 2


def cmd_kernel(args, run: RunConfig) -> int:
    if args.function == "heat":
        F = lambda lam: np.exp(-args.t * lam ** 2)
    else:
        F = load_function(args, run)
    G = _euclid(args)
    if G.drift_norm > 0:
        if G.n > 2:
            raise UsageError("drift kernels are sampled on Cartesian grids for n <= 2")
        field = drift_kernel(F, G, half_width=args.r_max, step=args.step)
        coords = [c.ravel() for c in field.mesh()]
        names = ["x", "y"][: G.n]
        rows = [list(xs) + [v.real, v.imag] for *xs, v in zip(*coords, field.values.ravel())]
        run.emit_csv(names + ["re_k", "im_k"], rows)
        return 0
    r = np.arange(0.0, args.r_max + 0.5 * args.step, args.step)
    k = kernel_of_multiplier(F, G.n, r)
    cols, rows = ["r", "re_k", "im_k"], [[a, b.real, b.imag] for a, b in zip(k.r, k.values)]
    if args.function == "heat":
        exact = heat_kernel(r, args.t, G.n)
        cols.append("exact")
        rows = [row + [e] for row, e in zip(rows, exact)]
    run.emit_csv(cols, rows)
    return 0


def cmd_verify_assumptions(args, run: RunConfig) -> int:
    G = _euclid(args)
    params = AssumptionParams(args.beta, args.sigma, args.varpi, args.gamma, args.W)
    reports, failed = [], False
    for which in args.which:
        suite = band_suite if which == "C" else dyadic_suite
        st = assumption_stability(which, G, suite, params, L=args.L, h=args.h)
        reports.append(st.report.as_dict())
        failed |= st.report.verdict != "stable"
    rows = [[r["assumption"], c["id"], c["lhs"], c["rhs"], c["constant"]]
            for r in reports for c in r["per_case"]]
    run.emit_csv(["assumption", "id", "lhs", "rhs", "constant"], rows)
    run.emit_json({"reports": reports})
    return 2 if failed else 0


def cmd_threshold(args, run: RunConfig) -> int:
    if args.variant == "general":
        params = AssumptionParams(args.beta, args.sigma, args.varpi, args.gamma, args.W)
        res = smoothness_threshold(args.p, params, "general")
    elif args.variant == "poly":
        res = smoothness_threshold(args.p, variant="poly", n=args.n, d0=args.d0,
                                   d_inf=args.dinf, delta=args.delta)
    else:
        res = smoothness_threshold(args.p, variant="solvable", Q=args.Q, alpha=args.alpha)
    lines = [f"s_min = {res.s_min}", f"factor = {res.factor}"]
    if res.q is not None:
        lines += [f"q = {res.q}", f"strip_width = {res.strip_width}"]
    run.emit_text(lines)
    run.emit_json({"s_min": str(res.s_min), "factor": str(res.factor),
                   "q": None if res.q is None else str(res.q),
                   "strip_width": None if res.strip_width is None else str(res.strip_width)})
    return 0


def cmd_parabola(args, run: RunConfig) -> int:
    M = _multiplier(args)
    x = np.linspace(-args.x_max, args.x_max, args.points)
    tr = parabola_map(M, args.p, args.drift, x)
    rows = [[a, u.real, u.imag, lo.real, lo.imag, im.real, im.imag]
            for a, u, lo, im in zip(tr.x, tr.upper, tr.lower, tr.image_upper)]
    run.emit_csv(["x", "re_upper", "im_upper", "re_lower", "im_lower", "re_image", "im_image"],
                 rows)
    return 0 if tr.on_boundary else 2


def cmd_operator_norm(args, run: RunConfig) -> int:
    M = _multiplier(args)
    G = _euclid(args)
    st = operator_norm_scaling(M, args.p, G, args.domains, args.trials, step=args.step,
                               seed=args.seed)
    growth = (math.nan,) + st.growth
    run.emit_csv(["domain", "estimate", "growth"],
                 [[d, e, g] for d, e, g in zip(st.domains, st.estimates, growth)])
    run.emit_json({"verdict": st.verdict, "drift": st.drift, "policy":
                   "stable: within 10% of the first estimate; growing: >= 20% per doubling"})
    if args.expect and st.verdict != args.expect:
        return 2
    return 0


def cmd_atoms(args, run: RunConfig) -> int:
    G = _euclid(args)
    atoms = atom_suite(G, args.count, args.seed)
    rows, bad = [], False
    for i, a in enumerate(atoms):
        inv = atom_invariants(a, G)
        ok = (inv.l2_ratio <= 1 + args.tol and inv.support_ok
              and (a.kind == "global" or inv.mean <= args.tol))
        bad |= not ok
        rows.append([i, a.kind, ";".join(_fmt(c) for c in a.center), a.radius, inv.l2_ratio,
                     inv.mean, int(ok)])
    run.emit_csv(["id", "kind", "center", "radius", "l2_ratio", "mean", "ok"], rows)
    if args.family:
        bound = h1_atomwise_bound(_multiplier(args), G, atoms, constants=G.n == 1)
        payload = {"suite_sup": bound.suite_sup}
        if bound.hormander is not None:
            payload.update(N1=bound.hormander.N1, N2=bound.hormander.N2)
        run.emit_json(payload)
    return 2 if bad else 0


def cmd_bmo(args, run: RunConfig) -> int:
    G = _euclid(args)
    if G.n != 1:
        raise UsageError("bmo inputs are one-dimensional samples")
    if args.input:
        x, vals, data = read_samples(args.input)
        run.input_bytes = data
    else:
        if args.function not in NAMED_FUNCTIONS:
            raise UsageError(f"unknown function {args.function!r}")
        m = int(round(args.L / args.h))
        x = args.h * np.arange(-m, m + 1)
        vals = NAMED_FUNCTIONS[args.function](x).astype(complex)
    res = bmo_norm(CartesianField((np.asarray(x, float),), np.asarray(vals, complex)), G)
    run.emit_csv(["value", "oscillation", "local_l2"],
                 [[res.value, res.oscillation, res.local_l2]])
    return 0


def cmd_solvable_integrals(args, run: RunConfig) -> int:
    G = SolvableGroup(args.Q, args.alpha)
    rows = ball_integral_sweep(G, args.r, args.weighting)
    buf = io.StringIO()
    buf.write(run.header())
    write_sweep_csv(rows, buf)
    run.outputs.append(("csv", buf.getvalue()))
    ratios = [row.ratio for row in rows]
    return 0 if max(ratios) / min(ratios) < args.max_spread else 2


def cmd_report(args, run: RunConfig) -> int:
    root = Path(args.inputs)
    if not root.is_dir():
        raise UsageError(f"{root} is not a directory")
    rows, failed = [], False
    digest = hashlib.sha1()
    for path in sorted(root.glob("*.json")):
        data = path.read_bytes()
        digest.update(blob_hash(data).encode())
        try:
            obj = json.loads(data)
        except json.JSONDecodeError as exc:
            raise UsageError(f"{path}: invalid JSON") from exc
        verdicts = _collect_verdicts(obj)
        for v in verdicts:
            failed |= v in ("fail", "unstable", "not-flat", "infinite", "inconclusive")
        rows.append([path.name, obj.get("config", {}).get("subcommand", ""),
                     ";".join(verdicts) or "none"])
    run.input_bytes = digest.hexdigest().encode()
    run.emit_csv(["file", "subcommand", "verdicts"], rows)
    return 2 if failed else 0


def _collect_verdicts(obj) -> list[str]:
    out = []
    if isinstance(obj, dict):
        for k, v in sorted(obj.items()):
            if k == "verdict" and isinstance(v, str):
                out.append(v)
            else:
                out += _collect_verdicts(v)
    elif isinstance(obj, list):
        for v in obj:
            out += _collect_verdicts(v)
    return out


# parser --------------------------------------------------------------------------------

def _grid_flags(p, L=32.0, h=1.0 / 16):
    p.add_argument("--L", type=_real, default=L, help="grid half width")
    p.add_argument("--h", type=_real, default=h, help="grid step")


def _input_flags(p, default="gaussian"):
    p.add_argument("--input", help="CSV samples: x,value or x,re_value,im_value")
    p.add_argument("--function", default=default, help=f"named test function ({default})")


def _group_flags(p, n=1, v="2"):
    p.add_argument("--n", type=int, default=n, help="dimension")
    p.add_argument("--v", type=_reals, default=_reals(v), help="drift vector, comma separated")


def _multiplier_flags(p, family="resolvent-power", param="1", b="1"):
    p.add_argument("--family", default=family,
                   choices=["imaginary-power", "resolvent-power", "gaussian", "identity"])
    p.add_argument("--param", type=_real, default=_real(param),
                   help="imaginary exponent, resolvent power or gaussian width")
    p.add_argument("--b", type=_real, default=_real(b), help="offset b in (b^2+z^2)")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS,
                        help="key = value file; command-line flags win")
    common.add_argument("--out", default=argparse.SUPPRESS,
                        help="directory for outputs (default: standard output)")
    common.add_argument("--format", choices=["csv", "json", "all"], default=argparse.SUPPRESS,
                        help="outputs to write; standard output defaults to the table only")
    parser = _Parser(prog="stripcalc", description=__doc__.split("\n")[0], parents=[common])
    parser.set_defaults(config=None, out=None, format=None)
    sub = parser.add_subparsers(dest="subcommand", parser_class=_Parser, metavar="SUBCOMMAND")
    _add = sub.add_parser
    sub.add_parser = lambda *a, **k: _add(*a, parents=[common], **k)

    p = sub.add_parser("norm", help="function-space norms",
                       description="CSV columns: kind, sigma, tau, q, r, value.")
    _input_flags(p)
    _grid_flags(p)
    p.add_argument("--kind", choices=["bessel", "weighted", "sloc", "pointwise"], default="bessel")
    p.add_argument("--sigma", type=_real, default=1.0)
    p.add_argument("--tau", type=_real, default=0.0)
    p.add_argument("--q", type=_real, default=2.0)
    p.add_argument("--r", type=_real, default=math.inf)
    p.add_argument("--N", type=int, default=2, help="derivative order (pointwise)")
    p.add_argument("--variant", default="C", choices=["C", "W_q"])
    p.add_argument("--no-decay-check", action="store_true")

    p = sub.add_parser("split", help="local/global split and band pieces",
                       description="CSV columns: lam, re/im of M, local part, global part "
                                   "[, band piece].")
    _input_flags(p)
    _grid_flags(p)
    p.add_argument("--band", type=int, default=None, help="also output band piece h >= 3")

    p = sub.add_parser("pw-check", help="Paley-Wiener decay sweep",
                       description="CSV columns: R, lhs, rhs, normalized; JSON: fitted_W, "
                                   "spread, verdict.")
    _grid_flags(p, 64.0, 1.0 / 16)
    p.add_argument("--sigma", type=_real, default=1.0)
    p.add_argument("--b", type=_real, default=0.0)
    p.add_argument("--W", type=_real, default=1.0)
    p.add_argument("--q", type=_real, default=2.0)
    p.add_argument("--R", type=_reals, default=[4.0, 8.0, 16.0, 32.0])
    p.add_argument("--width", type=_real, default=2.0, help="width of the transform bumps")

    p = sub.add_parser("kernel", help="convolution kernels of F(D) or F(D_X)",
                       description="CSV columns: r, re_k, im_k [, exact] (radial) or "
                                   "x[, y], re_k, im_k (with drift).")
    _input_flags(p, "heat")
    _grid_flags(p)
    _group_flags(p, 1, "0")
    p.add_argument("--t", type=_real, default=1.0, help="heat time for --function heat")
    p.add_argument("--r-max", type=_real, default=8.0)
    p.add_argument("--step", type=_real, default=1.0 / 16)

    p = sub.add_parser("verify-assumptions", help="constants of assumptions A, B, C",
                       description="CSV columns: assumption, id, lhs, rhs, constant; JSON: "
                                   "full reports.")
    _group_flags(p)
    _grid_flags(p, 64.0, 1.0 / 16)
    p.add_argument("--which", type=_letters, default=["A", "B", "C"])
    p.add_argument("--beta", type=_exact, default=Fraction(2))
    p.add_argument("--sigma", type=_exact, default=Fraction(1))
    p.add_argument("--varpi", type=_exact, default=Fraction(0))
    p.add_argument("--gamma", type=_exact, default=Fraction(3, 5))
    p.add_argument("--W", type=_exact, default=Fraction(1))

    p = sub.add_parser("threshold", help="smoothness threshold s_min",
                       description="Prints 's_min = ...' lines; JSON mirrors them.")
    p.add_argument("--variant", choices=["general", "poly", "solvable"], default="general")
    p.add_argument("--p", type=_exact, required=False, default=Fraction(1))
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--d0", type=int, default=None)
    p.add_argument("--dinf", type=int, default=None)
    p.add_argument("--delta", type=_exact, default=Fraction(1))
    p.add_argument("--Q", type=int, default=None)
    p.add_argument("--alpha", type=_exact, default=None)
    p.add_argument("--beta", type=_exact, default=Fraction(2))
    p.add_argument("--sigma", type=_exact, default=Fraction(1))
    p.add_argument("--varpi", type=_exact, default=Fraction(0))
    p.add_argument("--gamma", type=_exact, default=Fraction(1))
    p.add_argument("--W", type=_exact, default=Fraction(1))

    p = sub.add_parser("parabola", help="boundary traces of M_X on the strip",
                       description="CSV columns: x, re/im of M_X(x+iW), M_X(x-iW), and of "
                                   "the image point b_X^2 + (x+iW)^2.")
    _multiplier_flags(p)
    p.add_argument("--p", type=_exact, default=Fraction(1))
    p.add_argument("--drift", type=_real, default=2.0, help="|X|")
    p.add_argument("--x-max", type=_real, default=20.0)
    p.add_argument("--points", type=int, default=801)

    p = sub.add_parser("operator-norm", help="empirical L^p(mu_X) norm scaling study",
                       description="CSV columns: domain, estimate, growth; JSON: verdict.")
    _multiplier_flags(p)
    _group_flags(p)
    p.add_argument("--p", type=_real, default=1.5)
    p.add_argument("--domains", type=_reals, default=[12.0, 24.0, 48.0])
    p.add_argument("--trials", type=int, default=16)
    p.add_argument("--step", type=_real, default=1.0 / 8)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--expect", choices=["stable", "growing"], default=None,
                   help="exit 2 unless the verdict matches")

    p = sub.add_parser("atoms", help="generate atoms and check their invariants",
                       description="CSV columns: id, kind, center, radius, l2_ratio, mean, ok; "
                                   "JSON (with --family): suite_sup, N1, N2.")
    _group_flags(p)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--tol", type=_real, default=1e-10)
    p.add_argument("--family", default=None,
                   choices=["imaginary-power", "resolvent-power", "gaussian", "identity"],
                   help="also bound ||M(D_X) a||_{L^1(mu_X)} over the atoms")
    p.add_argument("--param", type=_real, default=1.0)
    p.add_argument("--b", type=_real, default=2.0)

    p = sub.add_parser("bmo", help="discrete bmo norm",
                       description="CSV columns: value, oscillation, local_l2.")
    _input_flags(p, "sign")
    _grid_flags(p, 4.0, 1.0 / 64)
    _group_flags(p, 1, "0")

    p = sub.add_parser("solvable-integrals", help="character ball integrals on N x| A",
                       description="CSV columns: Q, alpha, r, log_I, normalized_ratio, regime.")
    p.add_argument("--Q", type=int, default=2)
    p.add_argument("--alpha", type=_real, default=-1.0)
    p.add_argument("--r", type=_reals, default=[4.0, 8.0, 12.0, 16.0])
    p.add_argument("--weighting", choices=["auto", "plain", "weighted"], default="auto")
    p.add_argument("--max-spread", type=_real, default=10.0)

    p = sub.add_parser("report", help="summarise JSON reports in a directory",
                       description="CSV columns: file, subcommand, verdicts.")
    p.add_argument("--inputs", default=".", help="directory of JSON reports")
    return parser


HANDLERS = {
    "norm": cmd_norm, "split": cmd_split, "pw-check": cmd_pw_check, "kernel": cmd_kernel,
    "verify-assumptions": cmd_verify_assumptions, "threshold": cmd_threshold,
    "parabola": cmd_parabola, "operator-norm": cmd_operator_norm, "atoms": cmd_atoms,
    "bmo": cmd_bmo, "solvable-integrals": cmd_solvable_integrals, "report": cmd_report,
}


def _parse(argv: Sequence[str]) -> tuple[argparse.Namespace, argparse.ArgumentParser]:
    parser = build_parser()
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    cfg = read_config(known.config) if known.config else {}
    argv = list(argv)
    sub_name = cfg.pop("subcommand", None)
    if sub_name and not any(a in SUBCOMMANDS for a in argv):
        argv.append(sub_name)
    if cfg:
        subparsers = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
        chosen = next((a for a in argv if a in SUBCOMMANDS), None)
        target = subparsers.choices.get(chosen) if chosen else None
        known_dests = {a.dest for a in (target or parser)._actions}
        unknown = sorted(set(cfg) - known_dests - {"out", "format"})
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(unknown)}")
        top = {k: cfg[k] for k in ("out", "format") if k in cfg}
        parser.set_defaults(**top)
        if target is not None:
            rest = {k: v for k, v in cfg.items() if k not in top}
            for action in target._actions:
                if action.dest in rest and action.nargs == 0:  # store_true flags
                    rest[action.dest] = rest[action.dest].lower() in ("1", "true", "yes")
            target.set_defaults(**rest)
    args = parser.parse_args(argv)
    if args.subcommand is None:
        raise UsageError("a subcommand is required: " + ", ".join(SUBCOMMANDS))
    return args, parser


def _write(run: RunConfig, args, stdout) -> None:
    wanted = {"csv": {"csv", "txt"}, "json": {"json"}, "all": {"csv", "json", "txt"}}
    fmt = args.format or ("all" if args.out else None)
    if fmt is None:  # standard output: the primary table or text, else the JSON
        primary = [(s, t) for s, t in run.outputs if s != "json"]
        outs = primary[:1] or run.outputs[:1]
    else:
        outs = [(s, t) for s, t in run.outputs if s in wanted[fmt]]
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for suffix, text in outs:
            (out / f"{run.subcommand}.{suffix}").write_text(text)
    else:
        for _, text in outs:
            stdout.write(text)


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    """Run the command line ``argv``; returns the exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args, _ = _parse(argv)
        opts = {k: v for k, v in vars(args).items()
                if k not in ("subcommand", "config", "out", "format")}
        cfg = RunConfig(args.subcommand, opts)
        code = HANDLERS[args.subcommand](args, cfg)
        _write(cfg, args, stdout)
        return code
    except UsageError as exc:
        stderr.write(f"error: {exc}\n")
        return 1
    except (errors.StripcalcError, ValueError) as exc:
        stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return 1


def main() -> None:
    try:
        code = run()
    except BrokenPipeError:  # e.g. piped into head
        sys.stderr.close()
        code = 0
    raise SystemExit(code)


if __name__ == "__main__":  # pragma: no cover
    main()
