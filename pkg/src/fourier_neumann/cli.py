"""Command-line front end.

Every subcommand writes CSV (header row, fixed columns, 17 significant
digits, LF line endings) to stdout or ``--output``.  Exit codes: 0 success,
1 verification failure, 2 usage error, 3 numerical nonconvergence.

Flags may also come from ``--config FILE``, a flat ``key = value`` file
whose keys are the long flag names (``rel-tol`` or ``rel_tol``); flags on
the command line win.
"""

import argparse
import configparser
import csv
import io
import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .basis import basis_matrix, jn_norm_model, jn_norms
from .errors import DomainError, NonConvergenceError, StepSizeError
from .expansion import DEFAULT_NMAX, CoefficientVector, expand
from .fractional import frac_quadrature, frac_series
from .functions import parse_function
from .hankel import hankel, multiplier_M
from .measure import DEFAULT_CONFIG, AlphaContext, QuadratureConfig
from .semigroup import SemigroupSpec, eval_series, residual_heat, residual_poisson
from .verify import run_suite, suite_names

__all__ = [
    "main",
    "build_parser",
    "cmd_basis",
    "cmd_coeffs",
    "cmd_semigroup",
    "cmd_solve",
    "cmd_fracint",
    "cmd_hankel",
    "cmd_normtable",
    "cmd_verify",
]

log = logging.getLogger("fourier_neumann")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NONCONVERGENCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# argument parsing


def parse_list(text):
    """``"1,2,5"`` or ``"start:stop:count"`` (inclusive, evenly spaced) to floats."""
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    text = str(text).strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError(f"range must be start:stop:count, got {text!r}")
        try:
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError as exc:
            raise UsageError(f"bad range {text!r}") from exc
        if count < 1:
            raise UsageError("range count must be at least 1")
        return np.linspace(start, stop, count).tolist()
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"bad number list {text!r}") from exc


def _common(p, *, function=False, grid=False, nmax=False, pval=False):
    p.add_argument("--alpha", default="0", help="alpha > -1; a list sweeps several values")
    if function:
        p.add_argument("--function", help="jn:<n>*<w>,... | bump:a,b | indicator:a,b | polyexp:k")
    if grid:
        p.add_argument("--grid", help="points: 1,2,5 or start:stop:count")
    if nmax:
        p.add_argument("--nmax", type=int, default=None, help="largest basis index")
    if pval:
        p.add_argument("--p", default=None, help="Lebesgue exponent(s)")
        p.add_argument("--force", action="store_true", help="allow p outside (p0, p1)")
    p.add_argument("--output", help="CSV destination (default stdout)")
    p.add_argument("--config", help="flat key = value file with defaults for these flags")
    p.add_argument("--rel-tol", type=float, default=None, help="quadrature relative tolerance")
    p.add_argument("--abs-tol", type=float, default=None, help="quadrature absolute tolerance")
    p.add_argument("--workers", type=int, default=4, help="threads for sweeps")
    p.add_argument("--verbose", action="store_true")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fourier-neumann",
        description="Fourier-Neumann expansions, semigroups and Hankel multipliers.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("basis", help="tabulate j_n^alpha")
    _common(p, grid=True, nmax=True)

    p = sub.add_parser("coeffs", help="expansion coefficients of a function")
    _common(p, function=True, nmax=True)

    p = sub.add_parser("semigroup", help="Poisson or heat semigroup applied to a function")
    _common(p, function=True, grid=True, nmax=True)
    p.add_argument("--kind", choices=("poisson", "heat"), default="poisson")
    p.add_argument("--r", help="values of r in (0, 1)")
    p.add_argument("--t", help="values of t > 0 (r = exp(-t))")

    p = sub.add_parser("solve", help="Cauchy problems for the heat and Poisson equations")
    _common(p, function=True, grid=True, nmax=True)
    p.add_argument("--kind", choices=("poisson", "heat"), default="heat")
    p.add_argument("--t", help="times t > 0")
    p.add_argument("--r", help="alternatively r = exp(-t)")

    p = sub.add_parser("fracint", help="fractional integral L^(-lambda/2)")
    _common(p, function=True, grid=True, nmax=True)
    p.add_argument("--lambda", dest="lam", help="orders lambda > 0")
    p.add_argument("--method", choices=("series", "quadrature"), default="series")

    p = sub.add_parser("hankel", help="modified Hankel transform or the multiplier M_alpha")
    _common(p, function=True, grid=True)
    p.add_argument("--mode", choices=("transform", "multiplier"), default="transform")
    p.add_argument("--method", choices=("auto", "quadrature", "grid", "kernel"), default="auto")

    p = sub.add_parser("normtable", help="L^p norms of j_n^alpha against the growth model")
    _common(p, nmax=True, pval=True)
    p.add_argument("--nmin", type=int, default=2)

    p = sub.add_parser("verify", help="run verification suites")
    _common(p, nmax=True, pval=True)
    p.add_argument("--suite", action="append", choices=suite_names(), help="suite name (repeatable)")
    p.add_argument("--all", action="store_true", help="run every suite")
    p.add_argument("--seed", type=int, default=None, help="seed for randomized suites")
    return parser


_CONFIG_KEYS = {
    "alpha", "p", "function", "nmax", "grid", "r", "t", "kind", "lambda", "output",
    "seed", "force", "rel_tol", "abs_tol", "method", "mode", "nmin", "workers",
}


def _read_config(path):
    text = open(path, encoding="utf-8").read()
    cp = configparser.ConfigParser(interpolation=None)
    cp.read_string("[run]\n" + text)
    out = {}
    for key, value in cp["run"].items():
        k = key.replace("-", "_")
        if k not in _CONFIG_KEYS:
            raise UsageError(f"unknown config key {key!r}")
        out["lam" if k == "lambda" else k] = value
    return out


def _apply_config(args, argv):
    if not args.config:
        return args
    given = {a.split("=")[0].lstrip("-").replace("-", "_") for a in argv if a.startswith("--")}
    given = {"lam" if g == "lambda" else g for g in given}
    for key, value in _read_config(args.config).items():
        if key in given or not hasattr(args, key):
            continue
        current = getattr(args, key)
        if isinstance(current, bool):
            value = value.strip().lower() in ("1", "true", "yes", "on")
        elif key in ("nmax", "seed", "nmin", "workers"):
            value = int(value)
        elif key in ("rel_tol", "abs_tol"):
            value = float(value)
        setattr(args, key, value)
    return args


# --------------------------------------------------------------------------
# helpers


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "nan"
        return "%.17g" % v
    return str(v)


def write_csv(columns, rows, stream):
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(v) for v in row])


def _cfg(args):
    if args.rel_tol is None and args.abs_tol is None:
        return DEFAULT_CONFIG
    kw = {}
    if args.rel_tol is not None:
        kw["rel_tol"] = args.rel_tol
    if args.abs_tol is not None:
        kw["abs_tol"] = args.abs_tol
    try:
        return QuadratureConfig(**kw)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _alphas(args):
    out = parse_list(args.alpha)
    for a in out:
        try:
            AlphaContext(a)
        except DomainError as exc:
            raise UsageError(str(exc)) from exc
    return out


def _function(args):
    if not args.function:
        raise UsageError("--function is required")
    try:
        return parse_function(args.function)
    except (ValueError, DomainError) as exc:
        raise UsageError(str(exc)) from exc


def _grid(args, name="--grid"):
    if not args.grid:
        raise UsageError(f"{name} is required")
    return np.array(parse_list(args.grid))


def _r_schedule(args):
    if args.r and args.t:
        raise UsageError("give either --r or --t, not both")
    if args.r:
        rs = parse_list(args.r)
        if any(not 0.0 < r < 1.0 for r in rs):
            raise UsageError("r must lie in (0, 1)")
        return [(r, -math.log(r)) for r in rs]
    if args.t:
        ts = parse_list(args.t)
        if any(not t > 0 for t in ts):
            raise UsageError("t must be positive")
        return [(math.exp(-t), t) for t in ts]
    raise UsageError("give --r or --t")


def _coefficients(f, N, alpha, cfg):
    terms = getattr(f, "basis_terms", None)
    if terms is not None and N >= f.max_index:
        return CoefficientVector.from_combo(f, N, alpha)
    return expand(f, N, alpha, cfg)


def _sweep(args, fn, items):
    """Apply ``fn`` to every item concurrently; rows come back in input order."""
    with ThreadPoolExecutor(max_workers=max(1, args.workers)) as pool:
        chunks = list(pool.map(fn, items))
    return [row for chunk in chunks for row in chunk]


# --------------------------------------------------------------------------
# commands; each returns (columns, rows, exit code)


def _run_basis(args):
    grid = _grid(args)
    nmax = 10 if args.nmax is None else args.nmax

    def one(a):
        B = basis_matrix(a, nmax, grid)
        return [(a, n, x, B[n, i]) for n in range(nmax + 1) for i, x in enumerate(grid)]

    return ("alpha", "n", "x", "value"), _sweep(args, one, _alphas(args)), EXIT_OK


def _run_coeffs(args):
    f = _function(args)
    nmax = DEFAULT_NMAX if args.nmax is None else args.nmax
    cfg = _cfg(args)

    def one(a):
        c = expand(f, nmax, a, cfg)
        return [(a, n, v) for n, v in enumerate(c.coeffs)]

    return ("alpha", "n", "coefficient"), _sweep(args, one, _alphas(args)), EXIT_OK


def _run_semigroup(args):
    f = _function(args)
    grid = _grid(args)
    nmax = DEFAULT_NMAX if args.nmax is None else args.nmax
    sched = _r_schedule(args)
    cfg = _cfg(args)
    items = [(a, r, t) for a in _alphas(args) for r, t in sched]
    coeffs = {a: _coefficients(f, nmax, a, cfg) for a in {i[0] for i in items}}

    def one(item):
        a, r, t = item
        spec = SemigroupSpec.from_t(args.kind, t, a)
        vals = eval_series(coeffs[a], spec, grid)
        return [(a, args.kind, r, t, x, v) for x, v in zip(grid, np.atleast_1d(vals))]

    return ("alpha", "kind", "r", "t", "x", "value"), _sweep(args, one, items), EXIT_OK


def _run_solve(args):
    f = _function(args)
    grid = _grid(args)
    if np.any(grid <= 0):
        raise UsageError("solve needs grid points x > 0")
    nmax = DEFAULT_NMAX if args.nmax is None else args.nmax
    sched = _r_schedule(args)
    cfg = _cfg(args)
    items = [(a, t) for a in _alphas(args) for _, t in sched]
    coeffs = {a: _coefficients(f, nmax, a, cfg) for a in {i[0] for i in items}}
    residual = residual_heat if args.kind == "heat" else residual_poisson

    def one(item):
        a, t = item
        c = coeffs[a]
        spec = SemigroupSpec.from_t(args.kind, t, a)
        vals = np.atleast_1d(eval_series(c, spec, grid))
        res = np.atleast_1d(residual(c, t, grid).relative)
        return [(a, args.kind, t, x, v, e) for x, v, e in zip(grid, vals, res)]

    cols = ("alpha", "kind", "t", "x", "value", "relative_residual")
    return cols, _sweep(args, one, items), EXIT_OK


def _run_fracint(args):
    f = _function(args)
    grid = _grid(args)
    nmax = DEFAULT_NMAX if args.nmax is None else args.nmax
    if not args.lam:
        raise UsageError("--lambda is required")
    lams = parse_list(args.lam)
    if any(not lam > 0 for lam in lams):
        raise UsageError("lambda must be positive")
    cfg = _cfg(args)
    items = [(a, lam) for a in _alphas(args) for lam in lams]
    coeffs = {a: _coefficients(f, nmax, a, cfg) for a in {i[0] for i in items}}

    def one(item):
        a, lam = item
        if args.method == "series":
            vals = frac_series(coeffs[a], lam, a, grid)
        else:
            vals = frac_quadrature(coeffs[a], lam, a, grid, cfg)
        return [(a, lam, x, v) for x, v in zip(grid, np.atleast_1d(vals))]

    return ("alpha", "lambda", "x", "value"), _sweep(args, one, items), EXIT_OK


def _run_hankel(args):
    f = _function(args)
    grid = _grid(args)
    cfg = _cfg(args)

    def one(a):
        if args.mode == "transform":
            if args.method in ("grid", "kernel"):
                raise UsageError("--method grid/kernel applies to --mode multiplier")
            if np.any(grid <= 0):
                raise UsageError("transform points must be positive")
            vals = hankel(f, a, grid, cfg, method=args.method)
        else:
            method = "grid" if args.method == "auto" else args.method
            if method == "quadrature":
                raise UsageError("--method quadrature applies to --mode transform")
            vals = multiplier_M(f, a, grid, cfg, method=method)
        return [(a, args.mode, x, v) for x, v in zip(grid, np.atleast_1d(vals))]

    return ("alpha", "mode", "point", "value"), _sweep(args, one, _alphas(args)), EXIT_OK


def _check_p(args, alphas, ps):
    for a in alphas:
        ctx = AlphaContext(a)
        for p in ps:
            if not p > 1:
                raise UsageError(f"p must exceed 1, got {p}")
            if not ctx.in_range(p) and not args.force:
                raise UsageError(
                    f"p={p} lies outside ({ctx.p0:.6g}, {ctx.p1:.6g}) for alpha={a}; use --force to override"
                )


def _run_normtable(args):
    if args.p is None:
        raise UsageError("--p is required")
    alphas, ps = _alphas(args), parse_list(args.p)
    _check_p(args, alphas, ps)
    nmax = 40 if args.nmax is None else args.nmax
    if args.nmin < 2 or nmax < args.nmin:
        raise UsageError("need 2 <= nmin <= nmax")
    ns = np.arange(args.nmin, nmax + 1)
    cfg = _cfg(args)
    items = [(a, p) for a in alphas for p in ps]

    def one(item):
        a, p = item
        norms = jn_norms(ns, p, a, cfg)
        model = jn_norm_model(ns, p, a)
        return [(a, p, int(n), v, m, v / m) for n, v, m in zip(ns, norms, model)]

    return ("alpha", "p", "n", "norm", "model", "ratio"), _sweep(args, one, items), EXIT_OK


def _run_verify(args):
    names = list(suite_names()) if args.all else (args.suite or [])
    if not names:
        raise UsageError("give --suite NAME or --all")
    params = {"cfg": None if args.rel_tol is None and args.abs_tol is None else _cfg(args)}
    if args.alpha is not None:
        params["alpha"] = _alphas(args)
    if args.nmax is not None:
        params["nmax"] = args.nmax
    if args.p is not None:
        params["p"] = parse_list(args.p)
        _check_p(args, params.get("alpha", [0.0]), params["p"])
    if args.seed is not None:
        params["seed"] = args.seed
        log.info("seed=%d", args.seed)
    results = [run_suite(name, **params) for name in names]
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        print(f"{status} {res.name} (criterion {res.criterion}, {res.elapsed:.1f} s): {res.message}",
              file=sys.stderr)
        for note in res.notes:
            print(f"  note: {note}", file=sys.stderr)
    code = EXIT_OK if all(r.passed for r in results) else EXIT_FAIL
    if len(results) == 1:
        return results[0].columns, results[0].rows, code
    rows = [(r.name, r.criterion, int(r.passed), r.elapsed, r.message) for r in results]
    return ("suite", "criterion", "passed", "seconds", "message"), rows, code


_COMMANDS = {
    "basis": _run_basis,
    "coeffs": _run_coeffs,
    "semigroup": _run_semigroup,
    "solve": _run_solve,
    "fracint": _run_fracint,
    "hankel": _run_hankel,
    "normtable": _run_normtable,
    "verify": _run_verify,
}


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        args = _apply_config(args, argv)
        if args.command == "verify" and "alpha" not in _explicit(argv, args):
            args.alpha = None
        columns, rows, code = _COMMANDS[args.command](args)
    except (UsageError, DomainError, configparser.Error, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NonConvergenceError, StepSizeError) as exc:
        print(f"nonconvergence: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    buf = io.StringIO()
    write_csv(columns, rows, buf)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return code


def _explicit(argv, args):
    keys = {a.split("=")[0].lstrip("-").replace("-", "_") for a in argv if a.startswith("--")}
    if args.config:
        keys |= set(_read_config(args.config))
    return keys


def _command(name):
    def run(argv=()):
        return main([name, *argv])

    run.__name__ = f"cmd_{name}"
    run.__doc__ = f"Run the ``{name}`` subcommand with the given argument vector; returns the exit code."
    return run


cmd_basis = _command("basis")
cmd_coeffs = _command("coeffs")
cmd_semigroup = _command("semigroup")
cmd_solve = _command("solve")
cmd_fracint = _command("fracint")
cmd_hankel = _command("hankel")
cmd_normtable = _command("normtable")
cmd_verify = _command("verify")


if __name__ == "__main__":
    sys.exit(main())
