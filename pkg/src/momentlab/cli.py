"""Command-line front end: moment tables, cross-engine checks, gamma fits and function-field sweeps.

Exit codes: 0 success, 1 usage error, 2 internal consistency failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Sequence

from . import __version__
from .closedform import (
    I_auto,
    RangeError,
    UnsupportedError,
    claimed_bound,
    closed_form,
    closed_form_applies,
    gamma_piece,
    sym_k1_display,
    validity_boundary,
)
from .detgen import confluent_alternant, gen_series
from .ehrhart import (
    FitFailure,
    dilation_step,
    ehrhart_samples,
    fit_quasi_polynomial,
    gamma_degree,
    gamma_from_fit,
    gamma_mc_integral,
    lattice_moment,
    parse_rational,
)
from .funcfield import (
    GroupStructureError,
    IdentityFailure,
    UnsupportedFieldError,
    chi2_sum_vanishes,
    l_polynomial,
    m0_sum,
    orthogonality_error,
    qr_variance,
    sector_group,
    sector_variance,
    super_even_characters,
)
from .funcfield.variance import qr_prediction, sector_prediction
from .partitions import Partition
from .rmt import estimate_I
from .ssyt import Ensemble, I_moment, J_table, max_degree, vertical_strip_coeff, vertical_strip_coeff_bruteforce

COLUMNS = ["ensemble", "k", "m", "n", "N", "engine", "value", "stderr", "seed"]
ENGINES = ("ssyt", "series", "closed", "lattice", "mc", "auto")
UINT64 = 2**64


class UsageError(Exception):
    pass


class ConsistencyError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        kwargs.setdefault("allow_abbrev", False)
        super().__init__(*args, **kwargs)

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# -- argument types -----------------------------------------------------------------

def int_list(text: str) -> list[int]:
    """``"4"``, ``"0..6"`` (inclusive) or ``"1,3,5"``."""
    out: list[int] = []
    try:
        for part in str(text).split(","):
            part = part.strip()
            if ".." in part:
                a, b = part.split("..")
                out.extend(range(int(a), int(b) + 1))
            elif part:
                out.append(int(part))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer list: {text!r}")
    if not out:
        raise argparse.ArgumentTypeError("empty integer list")
    return out


def uint64(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}")
    if not 0 <= v < UINT64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


def rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return v


def positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


# -- parser ------------------------------------------------------------------------------

def build_parser() -> tuple[_Parser, dict[str, _Parser]]:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--output", help="write here instead of standard output")
    common.add_argument("--config", help="file of key=value lines; flags override it")
    common.add_argument("--seed", type=uint64, default=0)
    common.add_argument("--jobs", type=positive, default=1, help="worker processes (also the stream count)")

    parser = _Parser(prog="momentlab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"momentlab {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="command")
    subs: dict[str, _Parser] = {}

    def add(name: str, help: str) -> _Parser:
        p = sub.add_parser(name, parents=[common], help=help)
        subs[name] = p
        return p

    p = add("compute-i", "diagonal moments I(n; N)")
    p.add_argument("--ensemble", choices=("sym", "orth"))
    p.add_argument("--k", type=positive)
    p.add_argument("--n", type=int_list)
    p.add_argument("--N", type=nonneg)
    p.add_argument("--engine", choices=ENGINES, default="auto")
    p.add_argument("--samples", type=positive, default=10_000)

    p = add("grid", "full table J(m, n; N)")
    p.add_argument("--ensemble", choices=("sym", "orth"))
    p.add_argument("--k", type=positive)
    p.add_argument("--N", type=nonneg)
    p.add_argument("--engine", choices=("ssyt", "series"), default="ssyt")
    p.add_argument("--cross-check", action="store_true", help="also run the other engine and compare")

    p = add("fit-gamma", "exact quasi-polynomial fit of lattice counts and its leading coefficient")
    p.add_argument("--ensemble", choices=("sym", "orth"))
    p.add_argument("--k", type=positive)
    p.add_argument("--c", type=rational)
    p.add_argument("--multipliers", type=int_list, help="dilates are step * t for these t")
    p.add_argument("--period", type=positive, default=2)

    p = add("gamma-mc", "Monte Carlo value of the gamma integral")
    p.add_argument("--ensemble", choices=("sym", "orth"))
    p.add_argument("--k", type=positive)
    p.add_argument("--c", type=rational)
    p.add_argument("--samples", type=positive, default=100_000)
    p.add_argument("--method", choices=("sequential", "rejection"), default="sequential")

    p = add("rmt-mc", "Haar Monte Carlo estimate of I(n; N)")
    p.add_argument("--ensemble", choices=("sym", "orth"))
    p.add_argument("--k", type=positive)
    p.add_argument("--n", type=int_list)
    p.add_argument("--N", type=nonneg)
    p.add_argument("--samples", type=positive, default=10_000)

    p = add("ff-identities", "exact function-field identities")
    p.add_argument("--q", type=int_list, default=[3])
    p.add_argument("--k", type=positive, default=4)
    p.add_argument("--ell", type=positive, default=2)
    p.add_argument("--n-max", type=nonneg, default=4)

    p = add("ff-variance-sectors", "sector variance and its character-sum expansion")
    p.add_argument("--q", type=int_list, default=[3])
    p.add_argument("--k", type=positive, default=4)
    p.add_argument("--ell", type=positive, default=2)
    p.add_argument("--n", type=int_list, default=[2])

    p = add("ff-variance-qr", "variance along quadratic residues modulo irreducibles")
    p.add_argument("--q", type=int_list, default=[5])
    p.add_argument("--g", type=positive, default=1)
    p.add_argument("--k", type=positive, default=1, help="divisor function index")
    p.add_argument("--n", type=int_list, default=[1])

    p = add("compare-qsweep", "finite-q variances against random matrix predictions")
    p.add_argument("--kind", choices=("sector", "qr"), default="sector")
    p.add_argument("--q", type=int_list, default=[5, 7, 11, 13])
    p.add_argument("--k", type=positive, default=4, help="modulus exponent (sector)")
    p.add_argument("--g", type=positive, default=1, help="genus parameter (qr)")
    p.add_argument("--ell", type=positive, default=2, help="divisor function index")
    p.add_argument("--n", type=nonneg, default=2)

    add("self-check", "cross-engine suite on a small grid, plus known discrepancies")
    return parser, subs


def read_config(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}")
    for lineno, line in enumerate(lines, 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        values[key.lstrip("-").replace("-", "_")] = value
    return values


def parse_args(argv: Sequence[str]) -> argparse.Namespace:
    parser, subs = build_parser()
    pre = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    command = next((a for a in argv if a in subs), None)
    if known.config and command:
        values = read_config(known.config)
        dests = {a.dest for a in subs[command]._actions}
        unknown = sorted(set(values) - dests)
        if unknown:
            raise UsageError(f"unknown config keys for {command}: {', '.join(unknown)}")
        for action in subs[command]._actions:
            if action.dest in values and action.const is not None and action.nargs == 0:
                values[action.dest] = values[action.dest].lower() in ("1", "true", "yes", "on")
        subs[command].set_defaults(**values)
    args = parser.parse_args(argv)
    if args.command is None:
        raise UsageError("a command is required; see --help")
    return args


def need(args: argparse.Namespace, *names: str) -> None:
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        raise UsageError(f"{args.command}: missing --{', --'.join(missing)}")


# -- output -------------------------------------------------------------------------------

def exact(v):
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    return v


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(exact(v))


def row(ensemble, k, m, n, N, engine, value, stderr=None, seed=None, **extra) -> dict:
    out = dict(zip(COLUMNS, (ensemble, k, m, n, N, engine, value, stderr, seed)))
    out.update(extra)
    return out


def render(rows: list[dict], fmt: str, meta: dict) -> str:
    columns = list(COLUMNS)
    for r in rows:
        for key in r:
            if key not in columns:
                columns.append(key)
    if fmt == "json":
        doc = {
            "meta": meta,
            "columns": columns,
            "rows": [{c: exact(r.get(c)) for c in columns} for r in rows],
        }
        return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(columns)
    for r in rows:
        writer.writerow([_cell(r.get(c)) for c in columns])
    return buf.getvalue()


def config_echo(args: argparse.Namespace) -> dict:
    skip = {"output", "config", "format"}
    return {k: exact(v) if not isinstance(v, list) else v for k, v in sorted(vars(args).items()) if k not in skip}


def emit(text: str, args: argparse.Namespace, stdout) -> None:
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)


# -- moment engines --------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _series(ens: Ensemble, k: int, N: int):
    return gen_series(ens, k, N)


def _as_exact(v):
    v = Fraction(v)
    if v.denominator != 1:
        raise ConsistencyError(f"series coefficient {v} is not an integer")
    return v.numerator


def moment(ens: Ensemble, k: int, n: int, N: int, engine: str, args: argparse.Namespace):
    """Returns ``(value, stderr, engine label)``."""
    top = max_degree(ens, k, N)
    if engine == "ssyt":
        return I_moment(ens, k, n, N).value, None, engine
    if engine == "series":
        return (_as_exact(_series(ens, k, N)[n, n]) if n <= top else 0), None, engine
    if engine == "closed":
        if not closed_form_applies(ens, k, n, N):
            raise UsageError(f"the closed form is valid only for 0 <= n <= N (orthogonal: k >= 2); got n={n}, N={N}")
        return closed_form(ens, k, n, N), None, engine
    if engine == "lattice":
        if ens is Ensemble.ORTHOGONAL and k < 2:
            raise UsageError("the orthogonal lattice model needs k >= 2")
        return lattice_moment(ens, k, n, N), None, engine
    if engine == "mc":
        est = estimate_I(ens, k, n, N, args.samples, args.seed, streams=args.jobs, jobs=args.jobs)
        return est.mean, est.stderr, engine
    value, route = I_auto(ens, k, n, N)
    return value, None, f"auto:{route}"


# -- commands -----------------------------------------------------------------------------------

def cmd_compute_i(args) -> tuple[list[dict], dict]:
    need(args, "ensemble", "k", "n", "N")
    ens = Ensemble.parse(args.ensemble)
    rows = []
    for n in args.n:
        if n < 0:
            raise UsageError("n must be nonnegative")
        value, err, label = moment(ens, args.k, n, args.N, args.engine, args)
        rows.append(row(ens.value, args.k, n, n, args.N, label, value, err, args.seed if args.engine == "mc" else None))
    return rows, {}


def cmd_grid(args) -> tuple[list[dict], dict]:
    need(args, "ensemble", "k", "N")
    ens = Ensemble.parse(args.ensemble)

    def table(engine):
        if engine == "ssyt":
            return J_table(ens, args.k, args.N)
        return [[_as_exact(v) for v in r] for r in _series(ens, args.k, args.N).table()]

    main = table(args.engine)
    rows = [row(ens.value, args.k, m, n, args.N, args.engine, v) for m, r in enumerate(main) for n, v in enumerate(r)]
    if args.cross_check:
        other = "series" if args.engine == "ssyt" else "ssyt"
        if table(other) != main:
            raise ConsistencyError(f"{args.engine} and {other} disagree on the J table")
    return rows, {"cross_check": bool(args.cross_check)}


def default_multipliers(ens: Ensemble, k: int) -> list[int]:
    d = gamma_degree(ens, k)
    count = 2 * (d + 2) + 2
    if ens is Ensemble.SYMPLECTIC:
        return list(range(1, count + 1))
    return list(range(1, 2 * count, 2))


def cmd_fit_gamma(args) -> tuple[list[dict], dict]:
    need(args, "ensemble", "k", "c")
    ens = Ensemble.parse(args.ensemble)
    c = args.c
    if ens is Ensemble.ORTHOGONAL and args.k < 2:
        raise UsageError("the orthogonal lattice model needs k >= 2")
    try:
        step = dilation_step(ens, c)
    except ValueError as exc:
        raise UsageError(str(exc))
    mults = args.multipliers or default_multipliers(ens, args.k)
    samples = ehrhart_samples(ens, args.k, c, mults)
    d = gamma_degree(ens, args.k)
    try:
        fit = fit_quasi_polynomial(samples, d, args.period)
    except FitFailure as exc:
        raise ConsistencyError(f"degree-{d} fit failed: {exc}")
    except ValueError as exc:
        raise UsageError(str(exc))
    gamma = gamma_from_fit(ens, args.k, c, fit, step)
    try:
        fit_quasi_polynomial(samples, d - 1, args.period)
        lower = "fits"
    except (FitFailure, ValueError):
        lower = "fails"
    try:
        printed = gamma_piece(ens, args.k, c)
    except UnsupportedError:
        printed = None
    if isinstance(printed, Fraction) and printed != gamma:
        raise ConsistencyError(f"fitted gamma {gamma} differs from the printed piece {printed}")
    r = row(ens.value, args.k, None, None, None, "lattice-fit", gamma,
            c=exact(c), degree=d, step=step, dilates=len(samples),
            lower_degree_fit=lower, printed=exact(printed) if printed is not None else "n/a")
    return [r], {"leading_coefficients_in_t": [exact(x) for x in fit.leading_coefficients()]}


def cmd_gamma_mc(args) -> tuple[list[dict], dict]:
    need(args, "ensemble", "k", "c")
    ens = Ensemble.parse(args.ensemble)
    try:
        est = gamma_mc_integral(ens, args.k, float(args.c), args.samples, args.seed, method=args.method,
                                streams=args.jobs, jobs=args.jobs)
    except ValueError as exc:
        raise UsageError(str(exc))
    r = row(ens.value, args.k, None, None, None, f"mc:{args.method}", est.mean, est.stderr, args.seed,
            c=exact(args.c), samples=est.samples)
    return [r], {}


def cmd_rmt_mc(args) -> tuple[list[dict], dict]:
    need(args, "ensemble", "k", "n", "N")
    ens = Ensemble.parse(args.ensemble)
    rows = []
    for n in args.n:
        est = estimate_I(ens, args.k, n, args.N, args.samples, args.seed, streams=args.jobs, jobs=args.jobs)
        value, _ = I_auto(ens, args.k, n, args.N)
        rows.append(row(ens.value, args.k, n, n, args.N, "mc", est.mean, est.stderr, args.seed,
                        exact=value, within_4_stderr=est.within(value)))
    return rows, {}


def ff_identity_rows(q: int, k: int, ell: int, n_max: int) -> list[dict]:
    out = []

    def add(check, value, passed, n=None):
        out.append(row("ff", k, None, n, None, check, value, q=q, ell=ell, passed=bool(passed)))

    group = sector_group(q, k)
    kappa = k // 2
    add("sector-group-order", group.order, group.order == q**kappa)
    add("even-unit-order", len(group.even_units), len(group.even_units) == (q - 1) * q ** ((k - 1) // 2))
    chars = super_even_characters(q, k)
    nontrivial = [c for c in chars if not c.is_trivial]
    odd = sum(1 for c in nontrivial if c.swan % 2 == 1)
    add("swan-odd", odd, odd == len(nontrivial))
    err = orthogonality_error(chars)
    add("orthogonality", err, err < 1e-8)
    worst, ok = 0.0, True
    for c in chars:
        try:
            lp = l_polynomial(q, k, c)
        except IdentityFailure:
            ok = False
            continue
        for n in range(n_max + 1):
            worst = max(worst, abs(m0_sum(q, n, ell, c, True) - lp.power_coeff(ell, n)))
    add("m0-vs-l-power", worst, ok and worst < 1e-8)
    for n in range(n_max + 1):
        sv = sector_variance(q, k, ell, n)
        diff = abs(sv.variance - sv.identity_rhs)
        add("variance-identity", diff, diff < 1e-8, n)
    for n in range(n_max + 1):
        s = chi2_sum_vanishes(q, ell, n)
        add("chi2-sum", s, s == (1 if n == 0 else 0), n)
    return out


def cmd_ff_identities(args) -> tuple[list[dict], dict]:
    rows = []
    for q in args.q:
        rows.extend(ff_identity_rows(q, args.k, args.ell, args.n_max))
    failed = [r for r in rows if not r["passed"]]
    meta = {"failed": len(failed)}
    if failed:
        return rows, dict(meta, consistency_failure=True)
    return rows, meta


def cmd_ff_sectors(args) -> tuple[list[dict], dict]:
    rows = []
    bad = False
    for q in args.q:
        for n in args.n:
            sv = sector_variance(q, args.k, args.ell, n)
            pred = sector_prediction(q, args.k, args.ell, n)
            bad |= abs(sv.variance - sv.identity_rhs) > 1e-8 * max(1.0, sv.variance)
            rows.append(row("ff-sector", args.k, None, n, None, "enumeration", sv.variance, q=q, ell=args.ell,
                            mean=exact(sv.mean), identity_rhs=sv.identity_rhs, predicted=pred,
                            ratio=sv.variance / pred if pred else None))
    return rows, {"consistency_failure": True} if bad else {}


def cmd_ff_qr(args) -> tuple[list[dict], dict]:
    rows = []
    for q in args.q:
        for n in args.n:
            try:
                v = qr_variance(q, args.g, args.k, n)
            except ValueError as exc:
                if isinstance(exc, UnsupportedFieldError):
                    raise
                raise UsageError(str(exc))
            pred = qr_prediction(q, args.g, args.k, n)
            rows.append(row("ff-qr", args.k, None, n, None, "enumeration", v.variance, q=q, g=args.g,
                            primes=v.primes, predicted=pred, ratio=float(v.variance) / pred if pred else None))
    return rows, {}


def cmd_compare(args) -> tuple[list[dict], dict]:
    from .funcfield import rmt_compare

    param = args.k if args.kind == "sector" else args.g
    result = rmt_compare(args.q, args.kind, param, args.ell, args.n)
    rows = [row(f"ff-{args.kind}", param, None, args.n, None, "enumeration", r.empirical, q=r.q, ell=args.ell,
                predicted=r.predicted, ratio=r.ratio, deviation=r.deviation, identity_ratio=r.identity_ratio)
            for r in result]
    first, last = result[0], result[-1]
    trend = {"q_first": first.q, "q_last": last.q, "deviation_first": first.deviation,
             "deviation_last": last.deviation, "decreasing": last.deviation < first.deviation}
    return rows, {"trend": trend}


# -- self-check ---------------------------------------------------------------------------

def self_check_lines() -> tuple[list[str], bool]:
    lines: list[str] = []
    ok = True

    def check(name: str, passed: bool, detail: str = "") -> None:
        nonlocal ok
        ok &= passed
        lines.append(f"{'ok  ' if passed else 'FAIL'} {name}{': ' + detail if detail else ''}")

    for ens in Ensemble:
        for k in (1, 2):
            for N in (0, 1, 2):
                series = [[_as_exact(v) for v in r] for r in _series(ens, k, N).table()]
                check(f"J table {ens.value} k={k} N={N}: tableaux = determinant series", series == J_table(ens, k, N))
    for ens, ks in ((Ensemble.SYMPLECTIC, (1, 2, 3)), (Ensemble.ORTHOGONAL, (2, 3))):
        for k in ks:
            good = all(closed_form(ens, k, n, N) == I_moment(ens, k, n, N).value
                       for N in range(4) for n in range(N + 1))
            check(f"closed form {ens.value} k={k}, n <= N <= 3", good)
    for ens, ks in ((Ensemble.SYMPLECTIC, (1, 2)), (Ensemble.ORTHOGONAL, (2,))):
        for k in ks:
            good = all(lattice_moment(ens, k, n, N) == I_moment(ens, k, n, N).value
                       for N in range(3) for n in range(max_degree(ens, k, N) + 1))
            check(f"lattice count {ens.value} k={k}, N <= 2", good)
    for ens in Ensemble:
        good = True
        for k in (1, 2):
            for N in range(4):
                top = max_degree(ens, k, N)
                vals = [I_moment(ens, k, n, N).value for n in range(top + 1)]
                good &= vals == vals[::-1]
        check(f"functional equation {ens.value} k <= 2, N <= 3", good)
    check("k=1 symplectic two-branch display, N <= 6",
          all(I_moment("sym", 1, n, N).value == sym_k1_display(n, N) for N in range(7) for n in range(2 * N + 1)))
    ff = ff_identity_rows(3, 4, 2, 3)
    check("function-field identities q=3 k=4 ell=2 n <= 3", all(r["passed"] for r in ff), f"{len(ff)} checks")

    lines.append("")
    lines.append("known discrepancies (recorded, not failures):")
    vals = {N: [I_moment("orth", 1, n, N).value for n in range(2 * N + 2)] for N in range(4)}
    lines.append("  orthogonal k=1 moment: claimed I(n; N) = 0, enumerated "
                 + "; ".join(f"N={N}: {v}" for N, v in vals.items()))
    parts = []
    for ens, ks in ((Ensemble.SYMPLECTIC, (1, 2, 3)), (Ensemble.ORTHOGONAL, (2, 3))):
        for k in ks:
            for N in (1, 2, 3):
                parts.append(f"{ens.value} k={k} N={N}: claimed n <= {claimed_bound(ens, k, N)}, "
                             f"holds through n = {validity_boundary(ens, k, N)}")
    lines.append("  binomial-sum validity range:")
    lines.extend(f"    {p}" for p in parts)
    for k in (2, 3):
        const = confluent_alternant(k, range(2 * k)).poly.get((0, 0))
        lines.append(f"  confluent Vandermonde quotient k={k}: {const} "
                     f"(this is G(1+k)^2 with un-normalized derivative rows, 1 with binomial rows)")
    lines.append("  orthogonal determinant formula with factor 2 holds only for m + n even; "
                 "odd total degree vanishes")
    mu = Partition((3,))
    lines.append(f"  vertical-strip coefficient for mu={mu.parts}, N=1: sign-corrected closed form "
                 f"{vertical_strip_coeff(mu, 1)}, enumeration {vertical_strip_coeff_bruteforce(mu, 1)}; "
                 "uncorrected (-1)^|mu| gives -1")
    return lines, ok


def cmd_self_check(args, stdout) -> int:
    lines, ok = self_check_lines()
    if args.format == "json":
        text = json.dumps({"meta": {"version": __version__}, "passed": ok, "lines": lines}, indent=2) + "\n"
    else:
        text = "\n".join(lines) + "\n"
    emit(text, args, stdout)
    return 0 if ok else 2


COMMANDS: dict[str, Callable] = {
    "compute-i": cmd_compute_i,
    "grid": cmd_grid,
    "fit-gamma": cmd_fit_gamma,
    "gamma-mc": cmd_gamma_mc,
    "rmt-mc": cmd_rmt_mc,
    "ff-identities": cmd_ff_identities,
    "ff-variance-sectors": cmd_ff_sectors,
    "ff-variance-qr": cmd_ff_qr,
    "compare-qsweep": cmd_compare,
}


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = parse_args(argv)
        if args.command == "self-check":
            return cmd_self_check(args, stdout)
        rows, extra = COMMANDS[args.command](args)
        failure = extra.pop("consistency_failure", False)
        meta = {"version": __version__, "command": args.command, "config": config_echo(args)}
        meta.update(extra)
        emit(render(rows, args.format, meta), args, stdout)
        return 2 if failure else 0
    except SystemExit as exc:
        # --help and --version
        return int(exc.code or 0)
    except (UsageError, UnsupportedFieldError, RangeError, UnsupportedError) as exc:
        print(f"error: {exc}", file=stderr)
        return 1
    except (ConsistencyError, GroupStructureError, IdentityFailure) as exc:
        print(f"consistency failure: {exc}", file=stderr)
        return 2


def main(argv: Optional[Sequence[str]] = None) -> int:
    return run(argv)
