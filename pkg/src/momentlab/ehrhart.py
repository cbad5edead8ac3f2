"""Lattice-point model of the moments and recovery of the leading coefficient gamma(c).

A tableau is recorded by the array ``y[r][s]`` = rightmost position of an
entry ``<= s`` in row ``r`` (a Gelfand-Tsetlin pattern).  The moment then
counts integer arrays in a dilated rational polytope:

* symplectic: columns ``1..2k`` with entries in ``[0, 2N]``, column ``k``
  summing to ``n``, column ``2k`` summing to ``2n`` with even entries;
* orthogonal: columns ``1..2k-1`` with entries in ``[0, 2N+1]``, column
  ``k`` summing to ``n`` and the odd-indexed entries of column ``2k-1``
  summing to ``n``; the moment is twice the count.

Counts are done column by column with memoization, never through tableaux.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .closedform import QuasiPolynomial, barnes_g, interpolate, poly_eval
from .montecarlo import Estimate, Moments, run_streams
from .ssyt import Ensemble, mass

log = logging.getLogger(__name__)

Coord = tuple  # (row, column), both 1-based


class FitFailure(ValueError):
    """A held-out sample is not reproduced by the interpolating quasi-polynomial."""

    def __init__(self, message: str, residual: Fraction | None = None, point: int | None = None):
        super().__init__(message)
        self.residual = residual
        self.point = point


def parse_rational(text) -> Fraction:
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"cannot parse rational {text!r}") from exc


# -- polytope description ---------------------------------------------------------

@dataclass
class PolytopeModel:
    """The region ``V_c`` as explicit inequalities over its free coordinates.

    Each inequality is ``(coeffs, const)`` meaning ``sum coeffs[u] * u + const >= 0``;
    the two resolved coordinates have already been substituted.
    """

    ensemble: Ensemble
    k: int
    c: Fraction
    free: list = field(default_factory=list)
    resolved: dict = field(default_factory=dict)  # coord -> (coeffs, const)
    inequalities: list = field(default_factory=list)
    even_coords: list = field(default_factory=list)

    @property
    def top(self) -> int:
        return 2 * self.k if self.ensemble is Ensemble.SYMPLECTIC else 2 * self.k - 1

    @property
    def dimension(self) -> int:
        return len(self.free)

    def form(self, coord: Coord) -> tuple[dict, Fraction]:
        if coord in self.resolved:
            return self.resolved[coord]
        return {coord: 1}, Fraction(0)

    def resolve(self, point: dict, dilate: int = 1) -> dict:
        """Extend a point of ``dilate * V_c`` by its resolved coordinates."""
        full = dict(point)
        for coord, (coeffs, const) in self.resolved.items():
            full[coord] = const * dilate + sum(a * point[u] for u, a in coeffs.items())
        return full

    def contains(self, point: dict, dilate: int = 1) -> bool:
        """Membership of ``point`` (free coordinates only) in ``dilate * V_c``."""
        scaled = {u: Fraction(v) / dilate for u, v in point.items()}
        for coeffs, const in self.inequalities:
            if const + sum(a * scaled[u] for u, a in coeffs.items()) < 0:
                return False
        return True


def _lin(a: tuple[dict, Fraction], b: tuple[dict, Fraction], sign: int) -> tuple[dict, Fraction]:
    coeffs = dict(a[0])
    for u, v in b[0].items():
        coeffs[u] = coeffs.get(u, 0) + sign * v
    return {u: v for u, v in coeffs.items() if v}, a[1] + sign * b[1]


def build_model(ensemble, k: int, c) -> PolytopeModel:
    ens = Ensemble.parse(ensemble)
    c = parse_rational(c)
    if k < 1:
        raise ValueError("k must be positive")
    if ens is Ensemble.ORTHOGONAL and k < 2:
        raise ValueError("the orthogonal region needs k >= 2")
    top = 2 * k if ens is Ensemble.SYMPLECTIC else 2 * k - 1
    model = PolytopeModel(ens, k, c)
    coords = [(r, s) for s in range(1, top + 1) for r in range(1, s + 1)]
    model.free = [u for u in coords if u not in ((1, k), (1, top))]

    # u_1^(k) = c - (others in column k)
    model.resolved[(1, k)] = ({(r, k): -1 for r in range(2, k + 1)}, c)
    if ens is Ensemble.SYMPLECTIC:
        model.resolved[(1, top)] = ({(r, top): -1 for r in range(2, top + 1)}, 2 * c)
        model.even_coords = [(r, top) for r in range(2, top + 1)]
    else:
        model.resolved[(1, top)] = ({(r, top): -1 for r in range(3, top + 1, 2)}, c)

    ineq = []
    one = ({}, Fraction(1))
    for u in coords:
        f = model.form(u)
        ineq.append(f)  # u >= 0
        ineq.append(_lin(one, f, -1))  # 1 - u >= 0
    for s in range(1, top):
        for r in range(1, s + 1):
            ineq.append(_lin(model.form((r, s)), model.form((r + 1, s + 1)), -1))
            ineq.append(_lin(model.form((r, s + 1)), model.form((r, s)), -1))
    model.inequalities = ineq
    return model


# -- lattice counting ----------------------------------------------------------------

def _column_choices(lo: Sequence[int], hi: Sequence[int], step: int, mask: Sequence[int] | None,
                    target: int | None, decreasing: bool) -> Iterator[tuple[int, ...]]:
    """Integer vectors with ``lo[r] <= v[r] <= hi[r]``, optionally a fixed masked sum.

    ``step = 2`` restricts to even values; ``decreasing`` adds ``v[r] <= v[r-1]``.
    """
    n = len(lo)
    mask = [1] * n if mask is None else list(mask)
    # suffix bounds on the masked sum, for pruning
    suf_lo = [0] * (n + 1)
    suf_hi = [0] * (n + 1)
    for r in range(n - 1, -1, -1):
        suf_lo[r] = suf_lo[r + 1] + (lo[r] if mask[r] else 0)
        suf_hi[r] = suf_hi[r + 1] + (hi[r] if mask[r] else 0)
    out = [0] * n

    def rec(r, acc, cap):
        if r == n:
            if target is None or acc == target:
                yield tuple(out)
            return
        a = lo[r]
        b = min(hi[r], cap)
        if step == 2 and a % 2:
            a += 1
        for v in range(a, b + 1, step):
            nacc = acc + (v if mask[r] else 0)
            if target is not None:
                rest_hi = suf_hi[r + 1]
                if decreasing:
                    rest_hi = min(rest_hi, v * sum(mask[r + 1:]))
                if nacc + suf_lo[r + 1] > target or nacc + rest_hi < target:
                    continue
            out[r] = v
            yield from rec(r + 1, nacc, v if decreasing else cap)

    yield from rec(0, 0, max(hi) if hi else 0)


def _interlacing(col: tuple[int, ...], target: int | None) -> Iterator[tuple[int, ...]]:
    lo = [col[r + 1] for r in range(len(col) - 1)]
    hi = [col[r] for r in range(len(col) - 1)]
    return _column_choices(lo, hi, 1, None, target, False)


def _count(ens: Ensemble, k: int, dilate: int, n: int) -> int:
    top = 2 * k if ens is Ensemble.SYMPLECTIC else 2 * k - 1

    @lru_cache(maxsize=None)
    def below(s: int, col: tuple) -> int:
        # patterns in columns s-1 .. 1 under a fixed column s
        if s == 1:
            return 1
        target = n if s - 1 == k else None
        if s - 1 < k:
            # nothing constrained further down: just count interlacing chains
            return sum(below(s - 1, c2) for c2 in _interlacing(col, None))
        return sum(below(s - 1, c2) for c2 in _interlacing(col, target))

    if ens is Ensemble.SYMPLECTIC:
        tops = _column_choices([0] * top, [dilate] * top, 2, None, 2 * n, True)
    else:
        mask = [1 if r % 2 == 0 else 0 for r in range(top)]
        tops = _column_choices([0] * top, [dilate] * top, 1, mask, n, True)
    total = 0
    for col in tops:
        if top == k and sum(col) != n:
            continue
        total += below(top, col)
    return total


def admissible(ensemble, c, dilate: int) -> bool:
    ens = Ensemble.parse(ensemble)
    c = parse_rational(c)
    if dilate < 1:
        return False
    if ens is Ensemble.SYMPLECTIC and dilate % 2:
        return False
    if ens is Ensemble.ORTHOGONAL and dilate % 2 == 0:
        return False
    return (c * dilate).denominator == 1


def lattice_count(model: PolytopeModel, dilate: int) -> int:
    """Number of lattice points in ``dilate * V_c``.

    Symplectic: ``dilate = 2N`` and the count is ``I(c 2N; N)``.
    Orthogonal: ``dilate = 2N+1`` and the count is ``I(c (2N+1); N) / 2``.
    """
    if not admissible(model.ensemble, model.c, dilate):
        raise ValueError(f"dilate {dilate} is not admissible for {model.ensemble.value} with c={model.c}")
    n = int(model.c * dilate)
    return _count(model.ensemble, model.k, dilate, n)


def lattice_moment(ensemble, k: int, n: int, N: int) -> int:
    """Moment ``I(n; N)`` from the lattice count (orthogonal already doubled)."""
    ens = Ensemble.parse(ensemble)
    if ens is Ensemble.SYMPLECTIC:
        return _count(ens, k, 2 * N, n) if n <= 2 * N * k else 0
    if k == 1:
        return 2 if n <= 2 * N + 1 else 0
    return 2 * _count(ens, k, 2 * N + 1, n)


def lattice_points(model: PolytopeModel, dilate: int) -> Iterator[dict]:
    """Every lattice point of ``dilate * V_c`` as a dict on the free coordinates (small cases only)."""
    if not admissible(model.ensemble, model.c, dilate):
        raise ValueError("dilate not admissible")
    ens, k = model.ensemble, model.k
    top = model.top
    n = int(model.c * dilate)
    if ens is Ensemble.SYMPLECTIC:
        tops = list(_column_choices([0] * top, [dilate] * top, 2, None, 2 * n, True))
    else:
        mask = [1 if r % 2 == 0 else 0 for r in range(top)]
        tops = list(_column_choices([0] * top, [dilate] * top, 1, mask, n, True))

    def rec(s, col, acc):
        acc = dict(acc)
        for r, v in enumerate(col):
            acc[(r + 1, s)] = v
        if s == 1:
            yield {u: acc[u] for u in model.free}
            return
        target = n if s - 1 == k else None
        for c2 in _interlacing(col, target):
            yield from rec(s - 1, c2, acc)

    for col in tops:
        if top == k and sum(col) != n:
            continue
        yield from rec(top, col, {})


# -- quasi-polynomial fits ---------------------------------------------------------------

def fit_quasi_polynomial(samples: Sequence[tuple[int, int]], degree: int, period: int,
                         var: str = "t") -> QuasiPolynomial:
    """Exact interpolation per residue class, checked on every held-out sample.

    Each residue class that has samples needs at least ``degree + 2`` of them.
    Classes without samples get an empty coefficient vector.
    """
    if degree < 0 or period < 1:
        raise ValueError("need degree >= 0 and period >= 1")
    by_class: dict[int, list] = {}
    for x, v in sorted(samples):
        by_class.setdefault(x % period, []).append((x, Fraction(v)))
    if not by_class:
        raise ValueError("no samples")
    classes = []
    for r in range(period):
        pts = by_class.get(r, [])
        if not pts:
            classes.append(())
            continue
        if len(pts) < degree + 2:
            raise ValueError(f"residue class {r} has {len(pts)} samples, need {degree + 2}")
        coeffs = interpolate(pts[: degree + 1])
        for x, v in pts[degree + 1:]:
            got = poly_eval(coeffs, x)
            if got != v:
                raise FitFailure(f"degree {degree} fit misses the sample at {var}={x}: {got} != {v}",
                                 residual=v - got, point=x)
        coeffs = list(coeffs) + [Fraction(0)] * (degree + 1 - len(coeffs))
        classes.append(tuple(coeffs))
    return QuasiPolynomial(period, tuple(classes), var)


def gamma_degree(ensemble, k: int) -> int:
    ens = Ensemble.parse(ensemble)
    return 2 * k * k + k - 2 if ens is Ensemble.SYMPLECTIC else 2 * k * k - k - 2


def dilation_step(ensemble, c) -> int:
    """Smallest admissible dilate; admissible dilates are its multiples (odd ones, orthogonally)."""
    ens = Ensemble.parse(ensemble)
    b = parse_rational(c).denominator
    if ens is Ensemble.SYMPLECTIC:
        return b * 2 // math.gcd(b, 2)
    if b % 2 == 0:
        raise ValueError("orthogonal dilates are odd, so c must have an odd denominator")
    return b


def ehrhart_samples(ensemble, k: int, c, multipliers: Sequence[int]) -> list[tuple[int, int]]:
    """``(t, I)`` pairs for dilates ``step * t``, with ``I`` the moment (orthogonal counts doubled)."""
    ens = Ensemble.parse(ensemble)
    model = build_model(ens, k, c)
    step = dilation_step(ens, c)
    out = []
    for t in multipliers:
        d = step * t
        if not admissible(ens, c, d):
            continue
        out.append((t, mass(ens) * lattice_count(model, d)))
    return out


def gamma_from_fit(ensemble, k: int, c, fit: QuasiPolynomial, step: int | None = None) -> Fraction:
    """Leading coefficient of a count fitted in the multiplier ``t`` (dilate = ``step * t``), in the dilate variable.

    All populated residue classes must share the leading coefficient.
    For the symplectic case with ``c = 1/2`` the multiplier is ``N`` itself and
    ``gamma = lead_N / 2^d``; orthogonally ``gamma`` is the coefficient of ``(2N+1)^d``.
    """
    d = gamma_degree(ensemble, k)
    step = dilation_step(ensemble, c) if step is None else step
    if fit.degree != d:
        raise ValueError(f"fit has degree {fit.degree}, expected {d}")
    leads = {Fraction(cl[d]) for cl in fit.classes if cl}
    if len(leads) != 1:
        raise ValueError(f"residue classes disagree on the leading coefficient: {sorted(leads)}")
    lead = leads.pop()
    return lead / Fraction(step) ** d


def fit_gamma(ensemble, k: int, c, multipliers: Sequence[int], period: int = 2) -> tuple[Fraction, QuasiPolynomial]:
    """Lattice counts, exact fit of degree ``2k^2+k-2`` (resp. ``2k^2-k-2``), and gamma."""
    samples = ehrhart_samples(ensemble, k, c, multipliers)
    fit = fit_quasi_polynomial(samples, gamma_degree(ensemble, k), period)
    return gamma_from_fit(ensemble, k, c, fit), fit


# -- Monte Carlo for the gamma integral ---------------------------------------------------

def _vandermonde(cols: np.ndarray) -> np.ndarray:
    # prod_{i<j} (u_i - u_j), columns of `cols` are the variables
    out = np.ones(cols.shape[0])
    m = cols.shape[1]
    for i in range(m):
        for j in range(i + 1, m):
            out *= cols[:, i] - cols[:, j]
    return out


def _sequential_draw(ens: Ensemble, k: int, c: float, S: int, rng, columns: dict | None = None) -> np.ndarray:
    """Weighted draws of the reduced integrand by conditional uniform sampling.

    Columns are filled from the top column down; each coordinate is uniform on
    its exact feasible interval given what is already fixed, and the weight is
    the product of interval lengths.  Returns ``weight * Vandermonde``; if
    ``columns`` is a dict it receives the sampled columns keyed by index.
    """
    top = 2 * k if ens is Ensemble.SYMPLECTIC else 2 * k - 1
    weight = np.ones(S)

    # top column: decreasing in [0, 1] with a masked sum
    if ens is Ensemble.SYMPLECTIC:
        mask = [1] * top
        budget = 2 * c
    else:
        mask = [1 if r % 2 == 0 else 0 for r in range(top)]
        budget = c
    col = np.zeros((S, top))
    B = np.full(S, budget)
    for r in range(top - 1, 0, -1):
        lo = col[:, r + 1] if r + 1 < top else np.zeros(S)
        hi = np.ones(S)
        rem = sum(mask[:r])  # masked entries above r, each in [col_r, 1]
        if mask[r]:
            hi = np.minimum(hi, B / (rem + 1))
            lo = np.maximum(lo, B - rem)
        else:
            hi = np.minimum(hi, B / rem) if rem else hi
        length = np.clip(hi - lo, 0.0, None)
        col[:, r] = lo + rng.random(S) * length
        weight *= length
        if mask[r]:
            B = B - col[:, r]
    first = B if mask[0] else np.ones(S)
    if not mask[0]:
        raise AssertionError("the first entry of the top column always carries the sum")
    ok = (first >= col[:, 1] - 1e-15) & (first <= 1.0 + 1e-15)
    weight = np.where(ok, weight, 0.0)
    col[:, 0] = first
    if columns is not None:
        columns[top] = col

    # free interlacing columns top-1 .. k+1
    for s in range(top - 1, k, -1):
        lo = col[:, 1 : s + 1]
        hi = col[:, 0:s]
        length = np.clip(hi - lo, 0.0, None)
        new = lo + rng.random((S, s)) * length
        weight *= np.prod(length, axis=1)
        col = new
        if columns is not None:
            columns[s] = col

    # column k: interlaces with column k+1 and sums to c
    lo = col[:, 1 : k + 1]
    hi = col[:, 0:k]
    colk = np.zeros((S, k))
    B = np.full(S, c)
    for r in range(k - 1, 0, -1):
        rem_lo = lo[:, :r].sum(axis=1)
        rem_hi = hi[:, :r].sum(axis=1)
        a = np.maximum(lo[:, r], B - rem_hi)
        b = np.minimum(hi[:, r], B - rem_lo)
        length = np.clip(b - a, 0.0, None)
        colk[:, r] = a + rng.random(S) * length
        weight *= length
        B = B - colk[:, r]
    colk[:, 0] = B
    ok = (B >= lo[:, 0] - 1e-15) & (B <= hi[:, 0] + 1e-15)
    weight = np.where(ok, weight, 0.0)
    if columns is not None:
        columns[k] = colk
    return weight * _vandermonde(colk)


def _rejection_draw(ens: Ensemble, k: int, c: float, S: int, rng) -> np.ndarray:
    """Uniform draws of every free coordinate; zero outside the region."""
    top = 2 * k if ens is Ensemble.SYMPLECTIC else 2 * k - 1
    cols = {s: rng.random((S, s)) for s in range(k, top + 1)}
    if ens is Ensemble.SYMPLECTIC:
        cols[top][:, 0] = 2 * c - cols[top][:, 1:].sum(axis=1)
    else:
        cols[top][:, 0] = c - cols[top][:, 2::2].sum(axis=1)
    cols[k][:, 0] = c - cols[k][:, 1:].sum(axis=1)
    ok = np.ones(S, dtype=bool)
    for s in (k, top):
        ok &= (cols[s][:, 0] >= 0) & (cols[s][:, 0] <= 1)
    for s in range(k, top):
        a, b = cols[s], cols[s + 1]
        ok &= np.all(b[:, 1:] <= a, axis=1) & np.all(a <= b[:, :-1], axis=1)
    return np.where(ok, _vandermonde(cols[k]), 0.0)


_DRAWS = {"sequential": _sequential_draw, "rejection": _rejection_draw}


def _mc_worker(seq, count: int, ens_value: str, k: int, c: float, method: str, batch: int) -> Moments:
    rng = np.random.default_rng(seq)
    ens = Ensemble(ens_value)
    draw = _DRAWS[method]
    acc = Moments(0, 0.0, 0.0)
    done = 0
    while done < count:
        S = min(batch, count - done)
        acc = acc + Moments.of(draw(ens, k, c, S, rng))
        done += S
    return acc


def gamma_prefactor(ensemble, k: int) -> float:
    ens = Ensemble.parse(ensemble)
    if ens is Ensemble.SYMPLECTIC:
        return 2.0 ** (-2 * k + 1) / barnes_g(k)
    return 2.0 / barnes_g(k)


def gamma_mc_integral(ensemble, k: int, c: float, samples: int, seed: int, method: str = "sequential",
                      streams: int = 1, jobs: int = 1, batch: int = 50_000) -> Estimate:
    """Monte Carlo estimate of the reduced delta-constrained integral for ``gamma(c)``.

    ``method="rejection"`` draws every free coordinate uniformly and discards
    points outside the region; ``"sequential"`` (default) draws each coordinate
    uniformly on its feasible interval and reweights, which stays efficient
    when the region is a tiny fraction of the cube.
    """
    ens = Ensemble.parse(ensemble)
    c = float(c)
    if not 0 < c < k:
        raise ValueError("need 0 < c < k")
    if ens is Ensemble.ORTHOGONAL and k < 2:
        raise ValueError("the orthogonal integral needs k >= 2")
    if samples < 1:
        raise ValueError("need a positive number of samples")
    if method not in _DRAWS:
        raise ValueError(f"unknown method {method!r}")
    est = run_streams(_mc_worker, seed, samples, streams, jobs, (ens.value, k, c, method, batch))
    pre = gamma_prefactor(ens, k)
    if est.mean == 0.0 and est.samples:
        warnings.warn("no sample landed in the region; the estimate is 0", RuntimeWarning, stacklevel=2)
        return Estimate(0.0, 0.0, est.samples)
    return Estimate(pre * est.mean, pre * est.stderr, est.samples)
