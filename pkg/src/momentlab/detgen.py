"""Determinant generating functions for the symplectic and orthogonal moments.

The Haar average of ``det(1+Ux)^k det(1+Uy)^k`` is written as a ``2k x 2k``
determinant of binomial-coefficient entries (rows ``1..k`` built from ``x``,
rows ``k+1..2k`` from ``y``), divided by ``(y-x)^{k^2}`` and multiplied by
``(1-x^2)^{-a} (1-y^2)^{-a} (1-xy)^{-k^2}``.  Everything here is exact.

Polynomials in ``x, y`` are plain dicts ``{(i, j): coefficient}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Callable, Union

from .ssyt import Ensemble, max_degree, mass

Number = Union[int, Fraction]
Poly = dict  # {(i, j): Number}, zero coefficients never stored


class DivisionError(ArithmeticError):
    """Raised when a division that must be exact leaves a remainder."""


# -- bivariate polynomial arithmetic ---------------------------------------------

def poly_const(c: Number) -> Poly:
    return {(0, 0): c} if c else {}


def poly_monomial(c: Number, i: int, j: int) -> Poly:
    return {(i, j): c} if c else {}


X: Poly = {(1, 0): 1}
Y: Poly = {(0, 1): 1}


def poly_add(a: Poly, b: Poly) -> Poly:
    out = dict(a)
    for key, c in b.items():
        v = out.get(key, 0) + c
        if v:
            out[key] = v
        else:
            out.pop(key, None)
    return out


def poly_neg(a: Poly) -> Poly:
    return {key: -c for key, c in a.items()}


def poly_sub(a: Poly, b: Poly) -> Poly:
    return poly_add(a, poly_neg(b))


def poly_mul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for (i1, j1), c1 in a.items():
        for (i2, j2), c2 in b.items():
            key = (i1 + i2, j1 + j2)
            out[key] = out.get(key, 0) + c1 * c2
    return {key: c for key, c in out.items() if c}


def poly_scale(a: Poly, s: Number) -> Poly:
    if not s:
        return {}
    return {key: c * s for key, c in a.items()}


def _normalize(c: Number) -> Number:
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def poly_divexact(a: Poly, b: Poly) -> Poly:
    """Exact quotient ``a / b``; raises ``DivisionError`` on a nonzero remainder.

    Multivariate long division by the lex-leading term of ``b``.  When the
    division is exact the lex order guarantees the quotient is found.
    """
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    lead = max(b)
    lc = b[lead]
    rem = dict(a)
    quot: Poly = {}
    while rem:
        top = max(rem)
        di, dj = top[0] - lead[0], top[1] - lead[1]
        if di < 0 or dj < 0:
            raise DivisionError(f"remainder term {top} is not divisible by {lead}")
        c = Fraction(rem[top]) / lc
        c = _normalize(c)
        quot[(di, dj)] = quot.get((di, dj), 0) + c
        rem = poly_sub(rem, poly_mul(poly_monomial(c, di, dj), b))
    return {key: _normalize(c) for key, c in quot.items() if c}


def poly_eval(a: Poly, x: Number, y: Number) -> Number:
    return sum(c * x**i * y**j for (i, j), c in a.items())


def poly_is_constant(a: Poly) -> bool:
    return all(key == (0, 0) for key in a)


def divide_by_y_minus_x(a: Poly, power: int) -> Poly:
    """Exact quotient of ``a`` by ``(y - x)^power``.

    Substitutes ``y = x + t``, checks that every ``t^l`` with ``l < power``
    has a vanishing coefficient, shifts ``t`` down and substitutes back.
    """
    # a(x, x + t) as {(i, l): c} meaning x^i t^l
    shifted: dict = {}
    for (i, j), c in a.items():
        for l in range(j + 1):
            key = (i + j - l, l)
            shifted[key] = shifted.get(key, 0) + c * comb(j, l)
    shifted = {key: c for key, c in shifted.items() if c}
    for (i, l), c in shifted.items():
        if l < power:
            raise DivisionError(f"(y-x)^{power} does not divide: x^{i} t^{l} survives with {c}")
    out: Poly = {}
    for (i, l), c in shifted.items():
        e = l - power
        # x^i (y - x)^e
        for s in range(e + 1):
            key = (i + e - s, s)
            v = c * comb(e, s) * (-1) ** (e - s)
            out[key] = out.get(key, 0) + v
    return {key: c for key, c in out.items() if c}


# -- matrices ------------------------------------------------------------------

@dataclass
class PolyMatrix:
    """Square matrix of bivariate polynomials."""

    rows: list

    def __post_init__(self):
        n = len(self.rows)
        if any(len(r) != n for r in self.rows):
            raise ValueError("matrix must be square")

    @property
    def dim(self) -> int:
        return len(self.rows)

    def swap_rows(self, i: int, j: int) -> "PolyMatrix":
        rows = list(self.rows)
        rows[i], rows[j] = rows[j], rows[i]
        return PolyMatrix(rows)


def _det_cofactor(m: PolyMatrix) -> Poly:
    n = m.dim

    @lru_cache(maxsize=None)
    def minor(row: int, cols: int) -> tuple:
        # determinant of rows row..n-1 restricted to the column bitmask `cols`
        if row == n:
            return ((( 0, 0), 1),)
        total: Poly = {}
        sign = 1
        for c in range(n):
            if not cols >> c & 1:
                continue
            entry = m.rows[row][c]
            if entry:
                sub = dict(minor(row + 1, cols & ~(1 << c)))
                if sub:
                    total = poly_add(total, poly_scale(poly_mul(entry, sub), sign))
            sign = -sign
        return tuple(sorted(total.items()))

    return dict(minor(0, (1 << n) - 1))


def _det_bareiss(m: PolyMatrix) -> Poly:
    n = m.dim
    a = [[dict(e) for e in row] for row in m.rows]
    sign = 1
    prev: Poly = poly_const(1)
    for p in range(n - 1):
        if not a[p][p]:
            swap = next((r for r in range(p + 1, n) if a[r][p]), None)
            if swap is None:
                return {}
            a[p], a[swap] = a[swap], a[p]
            sign = -sign
        for i in range(p + 1, n):
            for j in range(p + 1, n):
                num = poly_sub(poly_mul(a[p][p], a[i][j]), poly_mul(a[i][p], a[p][j]))
                a[i][j] = poly_divexact(num, prev)
        prev = a[p][p]
    return poly_scale(a[n - 1][n - 1], sign)


_DET_METHODS: dict[str, Callable[[PolyMatrix], Poly]] = {
    "cofactor": _det_cofactor,
    "bareiss": _det_bareiss,
}


def determinant(m: PolyMatrix, method: str = "cofactor") -> Poly:
    """Exact determinant by memoized Laplace expansion or fraction-free elimination."""
    try:
        fn = _DET_METHODS[method]
    except KeyError:
        raise ValueError(f"unknown determinant method {method!r}") from None
    if m.dim == 0:
        return poly_const(1)
    return fn(m)


# -- confluent alternants ---------------------------------------------------------

def _falling(a: int, r: int) -> int:
    out = 1
    for t in range(r):
        out *= a - t
    return out


@dataclass
class AlternantResult:
    poly: Poly
    degenerate: bool = False
    notes: list = field(default_factory=list)


def confluent_alternant(k: int, exponents, normalized: bool = False) -> AlternantResult:
    """Determinant of the confluent monomial matrix, divided exactly by ``(y-x)^{k^2}``.

    Row ``i`` (``i = 0..k-1``) holds the ``i``-th derivative of ``x^alpha_j``,
    the next ``k`` rows the same in ``y``.  With ``normalized=True`` each
    derivative row is divided by ``i!`` (binomial entries) which turns the
    quotient into the limit of the alternant ratio ``P / Delta``.
    """
    alphas = [int(a) for a in exponents]
    if len(alphas) != 2 * k:
        raise ValueError(f"need 2k={2 * k} exponents, got {len(alphas)}")
    if any(a < 0 for a in alphas):
        raise ValueError("exponents must be nonnegative")
    if len(set(alphas)) != len(alphas):
        return AlternantResult({}, degenerate=True, notes=["repeated exponent: determinant vanishes"])

    def entry(a, i, var):
        if a < i:
            return {}
        c = comb(a, i) if normalized else _falling(a, i)
        return poly_monomial(c, a - i, 0) if var == 0 else poly_monomial(c, 0, a - i)

    rows = [[entry(a, i, 0) for a in alphas] for i in range(k)]
    rows += [[entry(a, i, 1) for a in alphas] for i in range(k)]
    det = determinant(PolyMatrix(rows))
    return AlternantResult(divide_by_y_minus_x(det, k * k))


# -- truncated bivariate series ----------------------------------------------------

class BivariateSeries:
    """Power series in ``x, y`` truncated at ``x^Dx``, ``y^Dy`` with exact coefficients."""

    def __init__(self, Dx: int, Dy: int, coeffs=None):
        if Dx < 0 or Dy < 0:
            raise ValueError("truncation orders must be nonnegative")
        self.Dx = Dx
        self.Dy = Dy
        self.c = [[0] * (Dy + 1) for _ in range(Dx + 1)]
        if coeffs:
            for (i, j), v in (coeffs.items() if isinstance(coeffs, dict) else coeffs):
                if i <= Dx and j <= Dy:
                    self.c[i][j] += v

    @classmethod
    def from_poly(cls, p: Poly, Dx: int, Dy: int) -> "BivariateSeries":
        return cls(Dx, Dy, p)

    def __getitem__(self, key) -> Number:
        i, j = key
        return self.c[i][j] if i <= self.Dx and j <= self.Dy else 0

    def __add__(self, other: "BivariateSeries") -> "BivariateSeries":
        Dx, Dy = min(self.Dx, other.Dx), min(self.Dy, other.Dy)
        out = BivariateSeries(Dx, Dy)
        for i in range(Dx + 1):
            for j in range(Dy + 1):
                out.c[i][j] = self.c[i][j] + other.c[i][j]
        return out

    def __mul__(self, other: "BivariateSeries") -> "BivariateSeries":
        Dx, Dy = min(self.Dx, other.Dx), min(self.Dy, other.Dy)
        out = BivariateSeries(Dx, Dy)
        b_terms = [(i, j, v) for i, row in enumerate(other.c) for j, v in enumerate(row) if v]
        for i1 in range(Dx + 1):
            row = self.c[i1]
            for j1 in range(Dy + 1):
                v1 = row[j1]
                if not v1:
                    continue
                for i2, j2, v2 in b_terms:
                    i, j = i1 + i2, j1 + j2
                    if i <= Dx and j <= Dy:
                        out.c[i][j] += v1 * v2
        return out

    def scale(self, s: Number) -> "BivariateSeries":
        out = BivariateSeries(self.Dx, self.Dy)
        out.c = [[v * s for v in row] for row in self.c]
        return out

    def diagonal(self) -> list:
        return [self.c[i][i] for i in range(min(self.Dx, self.Dy) + 1)]

    def table(self) -> list:
        return [[_normalize(v) if isinstance(v, Fraction) else v for v in row] for row in self.c]

    def is_symmetric(self) -> bool:
        D = min(self.Dx, self.Dy)
        return all(self.c[i][j] == self.c[j][i] for i in range(D + 1) for j in range(D + 1))


def inverse_power_series(kind: str, a: int, Dx: int, Dy: int) -> BivariateSeries:
    """Closed-form expansion of ``(1-x^2)^{-a}``, ``(1-y^2)^{-a}`` or ``(1-xy)^{-a}``."""
    out = BivariateSeries(Dx, Dy)
    if a == 0:
        out.c[0][0] = 1
        return out
    if kind == "x2":
        for l in range(Dx // 2 + 1):
            out.c[2 * l][0] = comb(l + a - 1, a - 1)
    elif kind == "y2":
        for l in range(Dy // 2 + 1):
            out.c[0][2 * l] = comb(l + a - 1, a - 1)
    elif kind == "xy":
        for l in range(min(Dx, Dy) + 1):
            out.c[l][l] = comb(l + a - 1, a - 1)
    else:
        raise ValueError(f"unknown factor {kind!r}")
    return out


# -- the moment generating function ----------------------------------------------------

def moment_matrix(ensemble, k: int, N: int) -> PolyMatrix:
    """The ``2k x 2k`` binomial-entry matrix whose determinant feeds the generating function."""
    ens = Ensemble.parse(ensemble)
    shift = 2 * N + 4 * k + 1 if ens is Ensemble.SYMPLECTIC else 2 * N + 4 * k

    def entry(j, i, var):
        # column j = 1..2k, derivative order i = 0..k-1
        high = shift - j
        p = poly_monomial(comb(high, i), high - i, 0) if var == 0 else poly_monomial(comb(high, i), 0, high - i)
        if j - 1 >= i:
            c = comb(j - 1, i)
            low = poly_monomial(c, j - 1 - i, 0) if var == 0 else poly_monomial(c, 0, j - 1 - i)
            p = poly_sub(p, low)
        return p

    rows = [[entry(j, i, 0) for j in range(1, 2 * k + 1)] for i in range(k)]
    rows += [[entry(j, i, 1) for j in range(1, 2 * k + 1)] for i in range(k)]
    return PolyMatrix(rows)


def gen_series(ensemble, k: int, N: int, Dx: int | None = None, Dy: int | None = None,
               method: str = "cofactor") -> BivariateSeries:
    """Series whose ``x^m y^n`` coefficient is ``J(m, n; N)``."""
    ens = Ensemble.parse(ensemble)
    if k < 1 or N < 0:
        raise ValueError("need k >= 1 and N >= 0")
    top = max_degree(ens, k, N)
    Dx = top if Dx is None else Dx
    Dy = top if Dy is None else Dy
    limit = (2 * N + 1) * k
    if not (0 <= Dx <= limit and 0 <= Dy <= limit):
        raise ValueError(f"truncation orders must lie in [0, {limit}]")

    det = determinant(moment_matrix(ens, k, N), method)
    quotient = divide_by_y_minus_x(det, k * k)
    a = comb(k + 1, 2) if ens is Ensemble.SYMPLECTIC else comb(k, 2)
    series = BivariateSeries.from_poly(quotient, Dx, Dy)
    for kind, e in (("x2", a), ("y2", a), ("xy", k * k)):
        series = series * inverse_power_series(kind, e, Dx, Dy)
    if ens is Ensemble.ORTHOGONAL:
        # O(2N+1) = SO(2N+1) u -SO(2N+1): the average is F(x, y) + F(-x, -y),
        # so the factor 2 only applies to even total degree and odd terms cancel
        for i in range(Dx + 1):
            for j in range(Dy + 1):
                if (i + j) % 2:
                    series.c[i][j] = 0
    return series.scale(mass(ens))
