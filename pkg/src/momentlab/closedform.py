"""Closed forms, quasi-polynomials and the printed asymptotic pieces.

For ``n <= N`` only the low-degree part of the determinant contributes and
the moments reduce to a single binomial sum.  That sum is evaluated here,
together with the explicit ``k = 1, 2`` displays, reflection through the
functional equation, and the known pieces of the ``gamma`` coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Sequence, Union

from .ssyt import Ensemble, I_moment, max_degree

Rational = Union[int, Fraction]

UNKNOWN_PIECE = "unknown-piece"


class RangeError(ValueError):
    """Closed form requested outside the range where it is known to hold."""


class UnsupportedError(ValueError):
    pass


def barnes_g(k: int) -> int:
    """``G(1+k) = 0! 1! ... (k-1)!``."""
    if k < 1:
        raise ValueError("k must be positive")
    out = 1
    for i in range(1, k):
        out *= factorial(i)
    return out


# -- exact polynomial helpers ------------------------------------------------------

def poly_eval(coeffs: Sequence[Rational], v: Rational) -> Rational:
    acc: Rational = 0
    for c in reversed(coeffs):
        acc = acc * v + c
    return acc


def _trim(coeffs: list) -> list:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def interpolate(points: Sequence[tuple[Rational, Rational]]) -> list[Fraction]:
    """Coefficients (constant first) of the unique polynomial through ``points``."""
    xs = [Fraction(x) for x, _ in points]
    if len(set(xs)) != len(xs):
        raise ValueError("interpolation nodes must be distinct")
    # Newton divided differences, then expand the Newton form
    dd = [Fraction(y) for _, y in points]
    n = len(xs)
    for level in range(1, n):
        for i in range(n - 1, level - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - level])
    coeffs = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        # coeffs = coeffs * (v - xs[i]) + dd[i]
        shifted = [Fraction(0)] + coeffs[:-1]
        coeffs = [s - xs[i] * c for s, c in zip(shifted, coeffs)]
        coeffs[0] += dd[i]
    return _trim(coeffs)


@dataclass(frozen=True)
class QuasiPolynomial:
    """One coefficient vector per residue class of the variable modulo ``period``."""

    period: int
    classes: tuple  # tuple of tuples of Fraction, constant term first
    var: str = "n"

    def __post_init__(self):
        if self.period < 1 or len(self.classes) != self.period:
            raise ValueError("need exactly one coefficient vector per residue class")

    def __call__(self, v: int) -> Rational:
        return self.evaluate(v)

    def evaluate(self, v: int) -> Rational:
        val = poly_eval(self.classes[v % self.period], v)
        if isinstance(val, Fraction) and val.denominator == 1:
            return val.numerator
        return val

    @property
    def degree(self) -> int:
        return max((len(c) - 1 for c in self.classes if c), default=-1)

    def leading_coefficients(self, degree: int | None = None) -> list[Fraction]:
        d = self.degree if degree is None else degree
        return [Fraction(c[d]) if len(c) > d else Fraction(0) for c in self.classes]


@dataclass(frozen=True)
class PiecewisePolynomial:
    """Polynomials in ``c`` on closed intervals with rational endpoints."""

    pieces: tuple  # ((lo, hi, coeffs), ...)

    def __post_init__(self):
        spans = sorted((Fraction(lo), Fraction(hi)) for lo, hi, _ in self.pieces)
        for (_, h1), (l2, _) in zip(spans, spans[1:]):
            if l2 < h1:
                raise ValueError("pieces overlap")

    def evaluate(self, c: Rational):
        c = Fraction(c)
        for lo, hi, coeffs in self.pieces:
            if Fraction(lo) <= c <= Fraction(hi):
                return poly_eval([Fraction(a) for a in coeffs], c)
        return UNKNOWN_PIECE


# -- the small-n closed forms ------------------------------------------------------

def _binomial_sum(k: int, n: int, a: int) -> int:
    # sum over l = n mod 2 of C((n-l)/2 + a - 1, a - 1)^2 C(l + k^2 - 1, k^2 - 1)
    total = 0
    for l in range(n % 2, n + 1, 2):
        w = comb((n - l) // 2 + a - 1, a - 1) if a > 0 else int(n == l)
        total += w * w * comb(l + k * k - 1, k * k - 1)
    return total


def I_sym_closed(k: int, n: int, N: int | None = None) -> int:
    """Symplectic moment from the low-degree binomial sum, valid for ``n <= N``.

    Pass ``N=None`` to evaluate the sum without the range guard.
    """
    if k < 1 or n < 0:
        raise ValueError("need k >= 1 and n >= 0")
    if N is not None and n > N:
        raise RangeError(f"closed form is only certified for n <= N (n={n}, N={N}); "
                         "use reflect() near the top of the range or the tableau engine")
    return _binomial_sum(k, n, comb(k + 1, 2))


def I_orth_closed(k: int, n: int, N: int | None = None) -> int:
    """Orthogonal moment (mass-2 convention) from the binomial sum, valid for ``k >= 2``, ``n <= N``."""
    if k < 2:
        raise UnsupportedError("the orthogonal binomial sum needs k >= 2")
    if n < 0:
        raise ValueError("n must be nonnegative")
    if N is not None and n > N:
        raise RangeError(f"closed form is only certified for n <= N (n={n}, N={N}); "
                         "use reflect() near the top of the range or the tableau engine")
    return 2 * _binomial_sum(k, n, comb(k, 2))


def closed_form(ensemble, k: int, n: int, N: int | None = None) -> int:
    ens = Ensemble.parse(ensemble)
    if ens is Ensemble.SYMPLECTIC:
        return I_sym_closed(k, n, N)
    return I_orth_closed(k, n, N)


def closed_form_applies(ensemble, k: int, n: int, N: int) -> bool:
    ens = Ensemble.parse(ensemble)
    if ens is Ensemble.ORTHOGONAL and k < 2:
        return False
    return 0 <= n <= N


def reflect(ensemble, k: int, n: int, N: int) -> int:
    """``I`` at the reflected index ``top - n``, evaluated in closed form when possible."""
    ens = Ensemble.parse(ensemble)
    top = max_degree(ens, k, N)
    if not 0 <= n <= top:
        raise ValueError(f"n must lie in [0, {top}]")
    m = top - n
    if closed_form_applies(ens, k, m, N):
        return closed_form(ens, k, m, N)
    return I_moment(ens, k, m, N).value


def I_auto(ensemble, k: int, n: int, N: int) -> tuple[int, str]:
    """Total evaluation: closed form, reflected closed form, or tableau count.

    Returns the value and the name of the route taken.
    """
    ens = Ensemble.parse(ensemble)
    top = max_degree(ens, k, N)
    if n < 0 or n > top:
        return 0, "zero"
    if closed_form_applies(ens, k, n, N):
        return closed_form(ens, k, n, N), "closed"
    if closed_form_applies(ens, k, top - n, N):
        return closed_form(ens, k, top - n, N), "closed-reflected"
    return I_moment(ens, k, n, N).value, "ssyt"


def claimed_bound(ensemble, k: int, N: int) -> Fraction:
    """The range of validity asserted for the binomial sum: ``N + (1+k)/2`` resp. ``N + k/2``."""
    ens = Ensemble.parse(ensemble)
    return N + Fraction(1 + k, 2) if ens is Ensemble.SYMPLECTIC else N + Fraction(k, 2)


def validity_boundary(ensemble, k: int, N: int) -> int:
    """Largest ``n`` such that the unguarded binomial sum equals the tableau count for all ``n' <= n``."""
    ens = Ensemble.parse(ensemble)
    top = max_degree(ens, k, N)
    for n in range(top + 1):
        if closed_form(ens, k, n) != I_moment(ens, k, n, N).value:
            return n - 1
    return top


# -- transcribed displays for k = 1, 2 -----------------------------------------------

def sym_k1_display(n: int, N: int) -> int:
    """``floor((n+2)/2)`` for ``n <= N``, ``floor((2N-n+2)/2)`` above."""
    return (n + 2) // 2 if n <= N else (2 * N - n + 2) // 2


def sym_k2_display(n: int) -> Fraction:
    main = Fraction(
        6 * n**8 + 240 * n**7 + 4088 * n**6 + 38640 * n**5 + 221354 * n**4
        + 787080 * n**3 + 1698572 * n**2 + 2031720 * n + 1018395,
        1290240,
    )
    wobble = Fraction((-1) ** n * (2 * n**4 + 40 * n**3 + 284 * n**2 + 840 * n + 863), 4096)
    return main + wobble


def orth_k2_display(n: int) -> Fraction:
    return Fraction(2 * n**4 + 24 * n**3 + 100 * n**2 + 168 * n + 93, 48) + Fraction((-1) ** n, 16)


def orth_k2_floor_display(n: int) -> int:
    return 2 * ((((n + 3) ** 2 - 1) * ((n + 3) ** 2 - 3)) // 48)


def closed_form_quasipolynomial(ensemble, k: int) -> QuasiPolynomial:
    """The binomial sum as an exact period-2 quasi-polynomial in ``n``."""
    ens = Ensemble.parse(ensemble)
    d = 2 * k * k + k - 2 if ens is Ensemble.SYMPLECTIC else 2 * k * k - k - 2
    classes = []
    for r in (0, 1):
        pts = [(n, closed_form(ens, k, n)) for n in range(r, r + 2 * (d + 1), 2)]
        classes.append(tuple(interpolate(pts)))
    return QuasiPolynomial(2, tuple(classes), "n")


# -- printed gamma pieces ---------------------------------------------------------------

_HALF = Fraction(1, 2)

GAMMA_PIECES = {
    (Ensemble.SYMPLECTIC, 1): PiecewisePolynomial((
        (0, _HALF, (0, _HALF)),
        (_HALF, 1, (_HALF, -_HALF)),
    )),
    (Ensemble.SYMPLECTIC, 2): PiecewisePolynomial((
        (0, _HALF, (0,) * 8 + (Fraction(1, 215040),)),
        (Fraction(3, 2), 2, tuple(Fraction(comb(8, i) * 2 ** (8 - i) * (-1) ** i, 215040) for i in range(9))),
    )),
    (Ensemble.ORTHOGONAL, 2): PiecewisePolynomial((
        (0, _HALF, (0,) * 4 + (Fraction(1, 24),)),
        (Fraction(3, 2), 2, tuple(Fraction(comb(4, i) * 2 ** (4 - i) * (-1) ** i, 24) for i in range(5))),
    )),
}


def gamma_piece(ensemble, k: int, c: Rational):
    """Known piece of ``gamma(c)``, or ``UNKNOWN_PIECE`` when ``c`` is outside every printed interval."""
    ens = Ensemble.parse(ensemble)
    if k not in (1, 2):
        raise UnsupportedError("printed gamma pieces exist only for k in {1, 2}")
    pw = GAMMA_PIECES.get((ens, k))
    if pw is None:
        return UNKNOWN_PIECE
    return pw.evaluate(Fraction(c))
