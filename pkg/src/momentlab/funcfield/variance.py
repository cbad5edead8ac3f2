"""Character sums M_0, L-polynomials, sector and quadratic-residue variances, RMT comparison.

Polynomials ``f`` in these sums are monic in ``F_q[S]``; ``chi_2(f)`` looks at ``f(0)``
and super-even characters see ``f`` through ``U_k``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from ..ssyt import I_moment
from .fqpoly import (
    FqPoly,
    _divisor_table,
    check_prime,
    irreducibles,
    legendre,
    monics,
    residue_symbol,
)
from .sectors import SuperEvenCharacter, reduce, sector_group, super_even_characters


class IdentityFailure(AssertionError):
    """An exact identity that must hold for every input did not."""


# -- per-degree data --------------------------------------------------------------------

@dataclass(frozen=True)
class DegreeData:
    """For the monics of one degree with ``f(0) != 0``: weight ``d_ell``, ``chi_2`` and sector index."""

    weights: np.ndarray
    chi: np.ndarray
    sector: np.ndarray


@lru_cache(maxsize=None)
def degree_data(q: int, k: int, ell: int, n: int) -> DegreeData:
    check_prime(q, odd=True)
    group = sector_group(q, k)
    table = _divisor_table(q, ell, n)[n]
    w, c, s = [], [], []
    for idx, f in enumerate(monics(q, n)):
        if f[0] == 0:
            continue
        w.append(table[idx])
        c.append(legendre(q, f[0]))
        s.append(group.project(reduce(f, q, k)))
    return DegreeData(np.array(w, dtype=np.int64), np.array(c, dtype=np.int64), np.array(s, dtype=np.int64))


def chi2_sum(q: int, ell: int, n: int) -> int:
    """``sum_{f monic, deg n, f(0) != 0} d_ell(f) chi_2(f)``, exactly."""
    check_prime(q, odd=True)
    table = _divisor_table(q, ell, n)[n]
    return sum(d * legendre(q, f[0]) for d, f in zip(table, monics(q, n)) if f[0])


def chi2_sum_vanishes(q: int, ell: int, n: int) -> int:
    """The same sum; it is 0 for every ``n > 0`` and 1 for ``n = 0``."""
    return chi2_sum(q, ell, n)


def mean_weight(q: int, ell: int, n: int) -> Fraction:
    """``sum d_ell(f) (1 + chi_2(f)) / 2`` over monics of degree n with ``f(0) != 0``."""
    table = _divisor_table(q, ell, n)[n]
    total = sum(d * (1 + legendre(q, f[0])) for d, f in zip(table, monics(q, n)) if f[0])
    return Fraction(total, 2)


# -- character sums ---------------------------------------------------------------------

def m0_sum(q: int, n: int, ell: int, char: SuperEvenCharacter, twist: bool) -> complex:
    """``M_0(n; d_ell Xi [chi_2])`` by enumeration of monics of degree n."""
    data = degree_data(q, char.group.k, ell, n)
    vals = char.values[data.sector] * data.weights
    if twist:
        vals = vals * data.chi
    return complex(vals.sum())


@dataclass(frozen=True)
class LPolynomial:
    coeffs: np.ndarray
    degree: int
    q: int

    def roots(self) -> np.ndarray:
        c = self.coeffs[: self.degree + 1]
        if self.degree == 0:
            return np.array([], dtype=complex)
        return np.roots(c[::-1])

    def power_coeff(self, ell: int, n: int) -> complex:
        p = np.array([1.0 + 0j])
        for _ in range(ell):
            p = np.convolve(p, self.coeffs)
        return complex(p[n]) if n < len(p) else 0j


def l_coefficients(q: int, k: int, char: SuperEvenCharacter, twist: bool, n_max: int) -> np.ndarray:
    """``c_n = sum_{f monic deg n, f(0) != 0} Xi(f) chi_2(f)^twist`` for ``n <= n_max``.

    Degrees below ``k`` are enumerated; from degree ``k`` on, every unit residue mod
    ``S^k`` occurs exactly ``q^(n-k)`` times, so the sum is that multiple of a sum over residues.
    """
    group = char.group
    out = np.zeros(n_max + 1, dtype=complex)
    for n in range(min(n_max, k - 1) + 1):
        for f in monics(q, n):
            if f[0]:
                out[n] += char.values[group.project(f)] * (legendre(q, f[0]) if twist else 1)
    if n_max >= k:
        unit_sum = 0j
        for f in monics(q, k):
            if f[0]:
                unit_sum += char.values[group.project(f)] * (legendre(q, f[0]) if twist else 1)
        for n in range(k, n_max + 1):
            out[n] = unit_sum * q ** (n - k)
    return out


def l_polynomial(q: int, k: int, char: SuperEvenCharacter, twist: bool = True, tol: float = 1e-8,
                 root_tol: float = 1e-6) -> LPolynomial:
    """L-polynomial of ``Xi chi_2`` with its degree and root-size assertions.

    For nontrivial ``Xi`` the coefficients beyond ``d(Xi)`` must vanish and every root
    must have modulus ``q^(-1/2)``.
    """
    coeffs = l_coefficients(q, k, char, twist, k + 2)
    if abs(coeffs[0] - 1) > tol:
        raise IdentityFailure("L-polynomial constant term is not 1")
    if char.is_trivial:
        nz = np.nonzero(np.abs(coeffs) > tol)[0]
        return LPolynomial(coeffs, int(nz.max()) if len(nz) else 0, q)
    d = char.swan
    if np.max(np.abs(coeffs[d + 1 :])) > tol:
        raise IdentityFailure(f"coefficients beyond degree {d} do not vanish")
    lp = LPolynomial(coeffs, d, q)
    if twist:
        mags = np.abs(lp.roots())
        if len(mags) and np.max(np.abs(mags - q**-0.5)) > root_tol:
            raise IdentityFailure("L-polynomial roots are off the critical circle")
    return lp


# -- sector variance ----------------------------------------------------------------------

@dataclass(frozen=True)
class SectorVariance:
    variance: float
    identity_rhs: float
    mean: Fraction
    counts: tuple[int, ...]

    def __iter__(self):
        yield self.variance
        yield self.identity_rhs


def sector_counts(q: int, k: int, ell: int, n: int) -> tuple[int, ...]:
    """``N(v) = sum_{U(f) in Sect(v;k)} d_ell(f) (1 + chi_2(f))/2`` for every ``v``, times 2."""
    group = sector_group(q, k)
    data = degree_data(q, k, ell, n)
    twice = np.zeros(len(group), dtype=np.int64)
    np.add.at(twice, data.sector, data.weights * (1 + data.chi))
    return tuple(int(x) for x in twice)


def sector_variance(q: int, k: int, ell: int, n: int) -> SectorVariance:
    """Variance over ``v`` of the sector sums, by enumeration, and its exact character expansion
    ``(1/4q^(2 kappa)) sum_{Xi != Xi_0} |M_0(n; d_ell Xi) + M_0(n; d_ell Xi chi_2)|^2``.
    """
    group = sector_group(q, k)
    twice = sector_counts(q, k, ell, n)
    size = len(group)
    mean = Fraction(sum(twice), 2 * size)
    var = sum((Fraction(t, 2) - mean) ** 2 for t in twice) / size
    rhs = 0.0
    for char in super_even_characters(q, k):
        if char.is_trivial:
            continue
        rhs += abs(m0_sum(q, n, ell, char, False) + m0_sum(q, n, ell, char, True)) ** 2
    rhs /= 4 * size**2
    return SectorVariance(float(var), rhs, mean, twice)


# -- quadratic residues modulo irreducibles ------------------------------------------------

@dataclass(frozen=True)
class QRVariance:
    variance: Fraction
    primes: int

    def __float__(self) -> float:
        return float(self.variance)


def qr_variance(q: int, g: int, k: int, n: int) -> QRVariance:
    """``(1/#P) sum_P |S(P) - (1/2) sum_{P not | f} d_k(f)|^2`` over monic irreducible ``P`` of
    degree ``2g + 1``, where ``S(P)`` sums ``d_k(f)`` over monic ``f`` of degree n that are
    nonzero quadratic residues mod ``P``.
    """
    check_prime(q, odd=True)
    if n > 2 * g * k:
        raise ValueError("need n <= 2 g k")
    table = _divisor_table(q, k, n)[n]
    polys = list(monics(q, n))
    primes = irreducibles(q, 2 * g + 1)
    total = Fraction(0)
    for P in primes:
        residues = 0
        coprime = 0
        for d, f in zip(table, polys):
            s = residue_symbol(f, P)
            if s:
                coprime += d
                if s == 1:
                    residues += d
        total += (residues - Fraction(coprime, 2)) ** 2
    return QRVariance(total / len(primes), len(primes))


# -- comparison with random matrix predictions -------------------------------------------------

@dataclass(frozen=True)
class CompareRow:
    kind: str
    q: int
    empirical: float
    predicted: float
    identity_ratio: float

    @property
    def ratio(self) -> float:
        if self.predicted == 0:
            return 1.0 if self.empirical == 0 else float("inf")
        return self.empirical / self.predicted

    @property
    def deviation(self) -> float:
        return abs(self.ratio - 1.0)


def sector_prediction(q: int, k: int, ell: int, n: int) -> float:
    """``q^n / (4 q^kappa) * I^O_{d_ell,2}(n; kappa - 1)``, integral over ``O(2 kappa - 1)``."""
    kappa = k // 2
    return q**n / (4 * q**kappa) * I_moment("orth", ell, n, kappa - 1).value


def qr_prediction(q: int, g: int, k: int, n: int) -> float:
    """``(q^n / 4) * I^S_{d_k,2}(n; g)``."""
    return q**n / 4 * I_moment("sym", k, n, g).value


def rmt_compare(qs: Sequence[int], kind: str, param: int, ell: int, n: int) -> list[CompareRow]:
    """One row per ``q``: the finite-field variance against its random matrix prediction.

    ``kind="sector"`` uses ``param`` as the modulus exponent ``k``; ``kind="qr"`` uses it as ``g``.
    """
    rows = []
    for q in qs:
        if kind == "sector":
            sv = sector_variance(q, param, ell, n)
            emp, pred = sv.variance, sector_prediction(q, param, ell, n)
            ident = sv.identity_rhs / sv.variance if sv.variance else 1.0
        elif kind == "qr":
            emp, pred = float(qr_variance(q, param, ell, n)), qr_prediction(q, param, ell, n)
            ident = 1.0
        else:
            raise ValueError(f"unknown comparison {kind!r}")
        rows.append(CompareRow(kind, q, emp, pred, ident))
    return rows
