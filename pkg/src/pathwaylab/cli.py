"""Command-line front end.

One verb per library capability: ``pdf``, ``sample``, ``entropy``, ``dea``,
``sda``, ``synth``, ``fit``, ``matrix-pdf``.  Every run prints a single JSON
report with stable keys {"command", "params", "result", "warnings", "seed"}
to stdout; diagnostics go to stderr.  Exit codes: 0 success, 1 computation
error, 2 usage error.  Point tables can be mirrored to CSV via
``--points-out`` and rendered to an image via ``--plot-out``.
"""

from __future__ import annotations

import argparse
import json
import math
import secrets
import sys

import numpy as np

from . import matrix as matrixmod
from . import multivariate as mv
from . import scalar
from . import scaling
from .errors import DomainError, PathwayError, SeriesParseError
from .numerics import RandomStream

DEFAULT_SEED = 20120314

__all__ = ["DEFAULT_SEED", "main", "parse_series", "run"]


# ---------------------------------------------------------------------------
# input parsing
# ---------------------------------------------------------------------------

def parse_series(text: str) -> np.ndarray:
    """Parse a one- or two-column series (comma or whitespace delimited).

    An optional single header row is detected by its first row failing to
    parse as numbers.  In two-column files the first column is a time stamp:
    it is validated monotone and then ignored.
    """
    values: list[float] = []
    times: list[float] = []
    ncols = None
    first_data_row = True
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        tokens = [t for part in line.split(",") for t in part.split()]
        try:
            nums = [float(t) for t in tokens]
        except ValueError:
            if first_data_row:
                first_data_row = False  # header row
                continue
            raise SeriesParseError(
                f"non-numeric data at line {lineno}", line_number=lineno
            ) from None
        if any(not math.isfinite(v) for v in nums):
            raise SeriesParseError(
                f"non-finite value at line {lineno}", line_number=lineno
            )
        first_data_row = False
        if ncols is None:
            if len(nums) not in (1, 2):
                raise SeriesParseError(
                    f"expected 1 or 2 columns at line {lineno}", line_number=lineno
                )
            ncols = len(nums)
        elif len(nums) != ncols:
            raise SeriesParseError(
                f"inconsistent column count at line {lineno}", line_number=lineno
            )
        if ncols == 1:
            values.append(nums[0])
        else:
            times.append(nums[0])
            values.append(nums[1])
    if len(values) < 2:
        raise DomainError("series file must contain at least 2 data rows")
    if times and any(b < a for a, b in zip(times, times[1:])):
        raise SeriesParseError("time column is not monotone")
    return np.asarray(values, dtype=float)


def _load_series(path: str) -> np.ndarray:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_series(fh.read())


def _load_matrix(path: str) -> np.ndarray:
    """Matrix as row-per-line CSV (comma or whitespace delimited)."""
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            tokens = [t for part in line.split(",") for t in part.split()]
            try:
                rows.append([float(t) for t in tokens])
            except ValueError:
                raise SeriesParseError(
                    f"non-numeric matrix entry at line {lineno}", line_number=lineno
                ) from None
    if not rows or len({len(r) for r in rows}) != 1:
        raise DomainError(f"{path}: matrix rows must be non-empty and equal length")
    return np.asarray(rows, dtype=float)


def _vector(text: str) -> np.ndarray:
    try:
        return np.asarray([float(t) for t in text.split(",") if t.strip() != ""],
                          dtype=float)
    except ValueError:
        raise DomainError(f"could not parse vector {text!r}") from None


# ---------------------------------------------------------------------------
# report plumbing
# ---------------------------------------------------------------------------

def _py(obj):
    """Coerce numpy containers/scalars into plain JSON-serializable values."""
    if isinstance(obj, dict):
        return {k: _py(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_py(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_py(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    return obj


def _resolve_seed(args) -> int:
    if getattr(args, "seedless", False):
        return secrets.randbits(64)
    seed = getattr(args, "seed", None)
    return DEFAULT_SEED if seed is None else seed


def _report(args, params: dict, result: dict, warnings: list, seed: int) -> dict:
    return {
        "command": args.command,
        "params": _py(params),
        "result": _py(result),
        "warnings": list(warnings),
        "seed": int(seed),
    }


def _write_points(path: str, header: tuple[str, str], points) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{header[0]},{header[1]}\n")
        for x, y in points:
            fh.write(f"{_num(x)},{_num(y)}\n")


def _num(v) -> str:
    return repr(int(v)) if isinstance(v, (int, np.integer)) else repr(float(v))


def _write_values(path: str, values) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        arr = np.asarray(values)
        if arr.ndim == 1:
            for v in arr:
                fh.write(_num(float(v)) + "\n")
        else:
            for row in arr:
                fh.write(",".join(_num(float(v)) for v in row) + "\n")


def _scalar_params(args) -> scalar.ScalarPathwayParams:
    return scalar.ScalarPathwayParams(
        alpha=args.alpha, a=args.a, gamma=args.gamma, delta=args.delta
    )


def _mv_params(args) -> mv.EllipticalPathwayParams:
    p = args.p
    mu = _vector(args.mu) if args.mu else np.zeros(p)
    if mu.size != p:
        raise DomainError(f"--mu must have {p} components")
    V = _load_matrix(args.v_file) if args.v_file else np.eye(p)
    return mv.EllipticalPathwayParams(
        mu=mu, V=V, alpha=args.alpha, a=args.a, gamma=args.gamma, delta=args.delta
    )


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------

def _cmd_pdf(args) -> dict:
    seed = _resolve_seed(args)
    warnings: list[str] = []
    if args.model == "scalar":
        params = _scalar_params(args)
        c = scalar.normalizing_constant(params)
        sup = params.support
        if args.x:
            try:
                xs = np.asarray(args.x, dtype=float)
            except ValueError:
                raise DomainError(f"could not parse --x values {args.x!r}") from None
        else:
            hi = args.x_max
            if hi is None:
                hi = sup.upper if math.isfinite(sup.upper) else (
                    (20.0 / params.a) ** (1.0 / params.delta)
                )
            xs = np.linspace(args.x_min, hi, args.grid_points)
        ys = scalar.pdf(params, xs)
        points = [[float(x), float(y)] for x, y in zip(np.atleast_1d(xs),
                                                       np.atleast_1d(ys))]
        result = {
            "constant": c,
            "support": [sup.lower, sup.upper if math.isfinite(sup.upper) else None],
            "points": points,
        }
        pdict = {"model": "scalar", "alpha": args.alpha, "a": args.a,
                 "gamma": args.gamma, "delta": args.delta}
    else:
        params = _mv_params(args)
        c = mv.norm_const(params)
        if not args.x:
            raise DomainError("multivariate pdf needs at least one --x point")
        rows = []
        for coords in args.x:
            pt = _vector(coords)
            if pt.size != params.p:
                raise DomainError(f"--x point must have {params.p} components")
            rows.append([*(float(v) for v in pt), float(mv.pdf(params, pt))])
        result = {"constant": c, "points": rows}
        pdict = {"model": "mv", "p": params.p, "mu": params.mu,
                 "alpha": args.alpha, "a": args.a, "gamma": args.gamma,
                 "delta": args.delta}
    if args.points_out:
        _write_points(args.points_out, ("x", "pdf"),
                      [(r[0], r[-1]) for r in result["points"]])
    if args.plot_out:
        if args.model != "scalar":
            raise DomainError("--plot-out supports the scalar model only")
        from .plotting import density_figure, save_figure

        xs = [r[0] for r in result["points"]]
        ys = [r[1] for r in result["points"]]
        save_figure(density_figure(xs, ys), args.plot_out)
    return _report(args, pdict, result, warnings, seed)


def _cmd_sample(args) -> dict:
    seed = _resolve_seed(args)
    stream = RandomStream(seed)
    if args.model == "scalar":
        params = _scalar_params(args)
        values = scalar.sample(params, args.n, stream)
        pdict = {"model": "scalar", "n": args.n, "alpha": args.alpha, "a": args.a,
                 "gamma": args.gamma, "delta": args.delta}
    else:
        params = _mv_params(args)
        values = mv.sample(params, args.n, stream)
        pdict = {"model": "mv", "n": args.n, "p": params.p, "mu": params.mu,
                 "alpha": args.alpha, "a": args.a, "gamma": args.gamma,
                 "delta": args.delta}
    if args.out:
        _write_values(args.out, values)
    return _report(args, pdict, {"n": args.n, "values": values}, [], seed)


def _cmd_entropy(args) -> dict:
    seed = _resolve_seed(args)
    measure = args.measure
    if measure in ("m", "t") and args.order is None:
        raise DomainError(f"measure {measure!r} requires --order")
    if args.input:
        data = _load_series(args.input)
        value = scalar.entropy_from_samples(
            data, {"m": "M", "t": "T", "shannon": "shannon"}[measure],
            alpha=args.order, bin_width=args.bin_width,
        )
        pdict = {"source": "data", "input": args.input, "measure": measure,
                 "order": args.order, "bin_width": args.bin_width}
    else:
        params = _scalar_params(args)
        dens = scalar.density_of(params)
        if measure == "shannon":
            value = scalar.shannon_entropy(dens)
        elif measure == "m":
            value = scalar.entropy_M(dens, args.order)
        else:
            value = scalar.entropy_T(dens, args.order)
        pdict = {"source": "model", "measure": measure, "order": args.order,
                 "alpha": args.alpha, "a": args.a, "gamma": args.gamma,
                 "delta": args.delta}
    return _report(args, pdict, {"value": value, "measure": measure,
                                 "order": args.order}, [], seed)


def _scaling_config(args) -> scaling.DeaConfig:
    return scaling.DeaConfig(
        t_min=args.t_min, t_max=args.t_max, n_window_sizes=args.windows,
        bin_fraction=args.bin_fraction, overlap=args.overlap,
    )


def _cmd_dea(args) -> dict:
    seed = _resolve_seed(args)
    series = _load_series(args.input)
    res = scaling.dea(series, _scaling_config(args))
    result = {
        "delta": res.delta,
        "intercept": res.intercept,
        "r_squared": res.fit.r_squared,
        "n_points": res.fit.n_points,
        "points": [[t, s] for t, s in res.points],
    }
    if args.points_out:
        _write_points(args.points_out, ("t", "S"), res.points)
    if args.plot_out:
        from .plotting import save_figure, scaling_figure

        save_figure(scaling_figure(res.points, res.fit, kind="dea"), args.plot_out)
    pdict = {"input": args.input, "t_min": args.t_min, "t_max": args.t_max,
             "windows": args.windows, "bin_fraction": args.bin_fraction,
             "overlap": args.overlap}
    return _report(args, pdict, result, [], seed)


def _cmd_sda(args) -> dict:
    seed = _resolve_seed(args)
    series = _load_series(args.input)
    res = scaling.sda(series, _scaling_config(args))
    result = {
        "hurst": res.hurst,
        "intercept": res.fit.intercept,
        "r_squared": res.fit.r_squared,
        "n_points": res.fit.n_points,
        "points": [[t, d] for t, d in res.points],
    }
    if args.points_out:
        _write_points(args.points_out, ("t", "D"), res.points)
    if args.plot_out:
        from .plotting import save_figure, scaling_figure

        save_figure(scaling_figure(res.points, res.fit, kind="sda"), args.plot_out)
    pdict = {"input": args.input, "t_min": args.t_min, "t_max": args.t_max,
             "windows": args.windows, "bin_fraction": args.bin_fraction,
             "overlap": args.overlap}
    return _report(args, pdict, result, [], seed)


def _cmd_synth(args) -> dict:
    seed = _resolve_seed(args)
    stream = RandomStream(seed)
    kind = args.kind.replace("-", "_")
    kwargs: dict = {}
    if kind == "gaussian":
        kwargs["sigma"] = args.sigma
    elif kind == "levy_flight":
        kwargs.update(mu=args.mu_tail, scale=args.scale)
    elif kind == "levy_walk":
        kwargs.update(mu=args.mu_tail, speed=args.speed)
    elif kind == "pathway_steps":
        kwargs["params"] = _scalar_params(args)
    values = scaling.gen_series(kind, args.n, stream, **kwargs)
    if args.out:
        _write_values(args.out, values)
    pdict = {"kind": args.kind, "n": args.n, "sigma": args.sigma,
             "mu_tail": args.mu_tail, "scale": args.scale, "speed": args.speed,
             "out": args.out}
    return _report(args, pdict, {"n": int(values.size), "values": values}, [], seed)


def _cmd_fit(args) -> dict:
    seed = _resolve_seed(args)
    data = _load_series(args.input)
    init = scalar.ScalarPathwayParams(
        alpha=args.init_alpha, a=args.init_a, gamma=args.init_gamma,
        delta=args.init_delta,
    )
    fixed = tuple(t.strip() for t in args.fix.split(",") if t.strip()) \
        if args.fix else ()
    res = scalar.mle_fit(data, init, fixed=fixed)
    result = {
        "params": {
            "alpha": res.params.alpha, "a": res.params.a,
            "gamma": res.params.gamma, "delta": res.params.delta,
        },
        "branch": res.params.branch,
        "log_likelihood": res.log_likelihood,
        "n_obs": int(data.size),
    }
    pdict = {"input": args.input, "fix": sorted(fixed),
             "init": {"alpha": args.init_alpha, "a": args.init_a,
                      "gamma": args.init_gamma, "delta": args.init_delta}}
    return _report(args, pdict, result, list(res.warnings), seed)


def _cmd_matrix_pdf(args) -> dict:
    seed = _resolve_seed(args)
    A = _load_matrix(args.a_file)
    B = _load_matrix(args.b_file)
    X = _load_matrix(args.x_file)
    params = matrixmod.MatrixPathwayParams(A=A, B=B, alpha=args.alpha, a=args.a,
                                           gamma=args.gamma)
    if X.shape != (params.p, params.n):
        raise DomainError(
            f"X must be {params.p} x {params.n} to match A and B, got {X.shape}"
        )
    kern = matrixmod.kernel_eval(params, X)
    const = matrixmod.norm_const(params)
    result = {
        "constant": const,
        "kernel": kern,
        "pdf": const * kern,
        "jacobian_factor": matrixmod.jacobian_factor(A, B),
        "p": params.p,
        "n": params.n,
    }
    warnings: list[str] = []
    if args.mc_check:
        est, se = matrixmod.mc_normalization(params, args.mc_check,
                                             RandomStream(seed))
        result["mc_normalization"] = {"estimate": est, "std_error": se}
    pdict = {"a_file": args.a_file, "b_file": args.b_file, "x_file": args.x_file,
             "alpha": args.alpha, "a": args.a, "gamma": args.gamma,
             "mc_check": args.mc_check}
    return _report(args, pdict, result, warnings, seed)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _seed_type(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}")
    if not (0 <= v < 2**64):
        raise argparse.ArgumentTypeError("seed must fit in unsigned 64 bits")
    return v


def _add_scalar_model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alpha", type=float, default=1.0, help="pathway parameter")
    p.add_argument("--a", type=float, default=1.0, help="scale a > 0")
    p.add_argument("--gamma", type=float, default=0.0,
                   help="power exponent gamma >= 0")
    p.add_argument("--delta", type=float, default=1.0,
                   help="stretch exponent delta > 0")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    seed_group = common.add_mutually_exclusive_group()
    seed_group.add_argument("--seed", type=_seed_type, default=None,
                            help=f"64-bit seed (default {DEFAULT_SEED})")
    seed_group.add_argument("--seedless", action="store_true",
                            help="draw a fresh random seed (echoed in the report)")

    parser = argparse.ArgumentParser(
        prog="pathwaylab",
        description="Pathway densities, entropy measures, and DEA/SDA scaling "
                    "analysis.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pdf", parents=[common],
                       help="evaluate a scalar or multivariate density")
    p.add_argument("--model", choices=("scalar", "mv"), default="scalar")
    _add_scalar_model_flags(p)
    p.add_argument("--p", type=int, default=2, help="dimension (mv model)")
    p.add_argument("--mu", type=str, default="", help="comma-separated location")
    p.add_argument("--v-file", type=str, default=None,
                   help="scale matrix as row-per-line CSV (default identity)")
    p.add_argument("--x", action="append", default=None,
                   help="evaluation point (repeatable); scalar: a number, "
                        "mv: comma-separated coordinates")
    p.add_argument("--x-min", type=float, default=0.0)
    p.add_argument("--x-max", type=float, default=None)
    p.add_argument("--grid-points", type=int, default=101)
    p.add_argument("--points-out", type=str, default=None)
    p.add_argument("--plot-out", type=str, default=None)
    p.set_defaults(handler=_cmd_pdf)

    p = sub.add_parser("sample", parents=[common],
                       help="draw from the scalar or multivariate model")
    p.add_argument("--model", choices=("scalar", "mv"), default="scalar")
    _add_scalar_model_flags(p)
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--mu", type=str, default="")
    p.add_argument("--v-file", type=str, default=None)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", type=str, default=None)
    p.set_defaults(handler=_cmd_sample)

    p = sub.add_parser("entropy", parents=[common],
                       help="entropy measures of a model or of data")
    p.add_argument("--measure", choices=("m", "t", "shannon"), default="shannon")
    p.add_argument("--order", type=float, default=None,
                   help="entropy order (the alpha of the measure)")
    _add_scalar_model_flags(p)
    p.add_argument("--input", type=str, default=None,
                   help="series file; if given, use the plug-in data estimator")
    p.add_argument("--bin-width", type=float, default=None)
    p.set_defaults(handler=_cmd_entropy)

    for name, handler in (("dea", _cmd_dea), ("sda", _cmd_sda)):
        p = sub.add_parser(name, parents=[common],
                           help=f"{name.upper()} of a series file")
        p.add_argument("--input", type=str, required=True)
        p.add_argument("--t-min", type=int, default=10)
        p.add_argument("--t-max", type=int, default=None)
        p.add_argument("--windows", type=int, default=25)
        p.add_argument("--bin-fraction", type=float, default=10.0)
        p.add_argument("--overlap", action=argparse.BooleanOptionalAction,
                       default=True)
        p.add_argument("--points-out", type=str, default=None)
        p.add_argument("--plot-out", type=str, default=None)
        p.set_defaults(handler=handler)

    p = sub.add_parser("synth", parents=[common], help="generate synthetic series")
    p.add_argument("--kind", required=True,
                   choices=("gaussian", "levy-flight", "levy-walk",
                            "pathway-steps"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--mu-tail", type=float, default=2.5,
                   help="tail/duration exponent in (2, 3)")
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--speed", type=float, default=1.0)
    _add_scalar_model_flags(p)
    p.add_argument("--out", type=str, default=None)
    p.set_defaults(handler=_cmd_synth)

    p = sub.add_parser("fit", parents=[common],
                       help="scalar maximum-likelihood fit")
    p.add_argument("--input", type=str, required=True)
    p.add_argument("--init-alpha", type=float, default=1.0)
    p.add_argument("--init-a", type=float, default=1.0)
    p.add_argument("--init-gamma", type=float, default=0.0)
    p.add_argument("--init-delta", type=float, default=1.0)
    p.add_argument("--fix", type=str, default="",
                   help="comma list from {alpha,a,gamma,delta}")
    p.set_defaults(handler=_cmd_fit)

    p = sub.add_parser("matrix-pdf", parents=[common],
                       help="matrix-variate kernel and constant")
    p.add_argument("--a-file", type=str, required=True)
    p.add_argument("--b-file", type=str, required=True)
    p.add_argument("--x-file", type=str, required=True)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--mc-check", type=int, default=None,
                   help="verify the constant with this many Monte-Carlo draws")
    p.set_defaults(handler=_cmd_matrix_pdf)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        report = args.handler(args)
    except (PathwayError, ValueError, ArithmeticError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(json.dumps(report, sort_keys=True, indent=2))
    return 0


def main() -> None:  # pragma: no cover - console entry point
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":  # pragma: no cover
    main()
