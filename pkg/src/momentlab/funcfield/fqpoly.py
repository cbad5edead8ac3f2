"""Polynomials over a prime field, monic enumeration, divisor functions, quadratic characters."""

from __future__ import annotations

from functools import lru_cache
from itertools import product
from typing import Iterator, Sequence


class UnsupportedFieldError(ValueError):
    """Raised for a non-prime modulus, or an even one where a quadratic character is needed."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def check_prime(q: int, odd: bool = False) -> int:
    if not is_prime(q):
        raise UnsupportedFieldError(f"q={q} is not prime; only prime fields are supported")
    if odd and q == 2:
        raise UnsupportedFieldError("q must be odd here")
    return q


def _trim(c: Sequence[int], p: int) -> tuple[int, ...]:
    c = [x % p for x in c]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


class FqPoly:
    """Polynomial over Z/p with coefficients stored low degree first.

    The zero polynomial has an empty coefficient tuple and degree -1.
    """

    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs: Sequence[int] = ()):
        self.p = p
        self.coeffs = _trim(coeffs, p)

    # -- constructors ------------------------------------------------------------
    @classmethod
    def const(cls, p: int, c: int) -> "FqPoly":
        return cls(p, (c,))

    @classmethod
    def var(cls, p: int) -> "FqPoly":
        return cls(p, (0, 1))

    # -- basic properties ---------------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return self.leading == 1

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % self.p
        return acc

    def __eq__(self, other) -> bool:
        return isinstance(other, FqPoly) and self.p == other.p and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.p, self.coeffs))

    def __repr__(self) -> str:
        return f"FqPoly({self.p}, {list(self.coeffs)})"

    # -- ring operations ----------------------------------------------------------
    def _lift(self, other) -> "FqPoly":
        if isinstance(other, int):
            return FqPoly(self.p, (other,))
        if other.p != self.p:
            raise ValueError("moduli differ")
        return other

    def __add__(self, other) -> "FqPoly":
        other = self._lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return FqPoly(self.p, [self[i] + other[i] for i in range(n)])

    __radd__ = __add__

    def __neg__(self) -> "FqPoly":
        return FqPoly(self.p, [-c for c in self.coeffs])

    def __sub__(self, other) -> "FqPoly":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "FqPoly":
        return self._lift(other) - self

    def __mul__(self, other) -> "FqPoly":
        other = self._lift(other)
        if self.is_zero() or other.is_zero():
            return FqPoly(self.p)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return FqPoly(self.p, out)

    __rmul__ = __mul__

    def __divmod__(self, other) -> tuple["FqPoly", "FqPoly"]:
        other = self._lift(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        p = self.p
        inv = pow(other.leading, -1, p)
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return FqPoly(p), self
        quo = [0] * (dq + 1)
        for s in range(dq, -1, -1):
            c = rem[s + len(other.coeffs) - 1] * inv % p
            quo[s] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[s + j] = (rem[s + j] - c * b) % p
        return FqPoly(p, quo), FqPoly(p, rem)

    def __floordiv__(self, other) -> "FqPoly":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "FqPoly":
        return divmod(self, other)[1]

    def __pow__(self, e: int) -> "FqPoly":
        return self.powmod(e, None)

    def powmod(self, e: int, modulus: "FqPoly | None") -> "FqPoly":
        result = FqPoly(self.p, (1,))
        base = self if modulus is None else self % modulus
        while e:
            if e & 1:
                result = result * base
                if modulus is not None:
                    result = result % modulus
            e >>= 1
            if e:
                base = base * base
                if modulus is not None:
                    base = base % modulus
        return result

    def monic(self) -> "FqPoly":
        if self.is_zero():
            return self
        return self * pow(self.leading, -1, self.p)

    def gcd(self, other: "FqPoly") -> "FqPoly":
        a, b = self, self._lift(other)
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def sigma(self) -> "FqPoly":
        """``f(-x)``: the conjugation fixing the even part."""
        return FqPoly(self.p, [c if i % 2 == 0 else -c for i, c in enumerate(self.coeffs)])

    def norm(self) -> "FqPoly":
        return self * self.sigma()

    def truncate(self, k: int) -> "FqPoly":
        return FqPoly(self.p, self.coeffs[:k])


# -- enumeration -------------------------------------------------------------------

def monics(q: int, n: int) -> Iterator[FqPoly]:
    """All monic polynomials of degree ``n``, lower coefficients in lexicographic order."""
    for low in product(range(q), repeat=n):
        yield FqPoly(q, low[::-1] + (1,))


def monic_index(f: FqPoly) -> int:
    """Base-q integer of the lower coefficients; a bijection from monics of degree n to range(q**n)."""
    idx = 0
    for c in reversed(f.coeffs[:-1]):
        idx = idx * f.p + c
    return idx


def is_irreducible(f: FqPoly) -> bool:
    """Ben-Or test: no factor shares roots with ``x^(q^i) - x`` for ``i <= deg/2``."""
    d = f.degree
    if d < 1:
        return False
    if d == 1:
        return True
    x = FqPoly.var(f.p)
    h = x
    for _ in range(d // 2):
        h = h.powmod(f.p, f)
        if (h - x).gcd(f).degree > 0:
            return False
    return True


def irreducibles(q: int, n: int) -> list[FqPoly]:
    return [f for f in monics(q, n) if is_irreducible(f)]


def irreducible_count(q: int, n: int) -> int:
    """Necklace formula ``(1/n) sum_{d|n} mu(d) q^(n/d)``."""
    def mobius(m: int) -> int:
        res, i = 1, 2
        while i * i <= m:
            if m % i == 0:
                m //= i
                if m % i == 0:
                    return 0
                res = -res
            i += 1
        return -res if m > 1 else res

    return sum(mobius(d) * q ** (n // d) for d in range(1, n + 1) if n % d == 0) // n


# -- divisor functions ---------------------------------------------------------------

def divisor_table(q: int, ell: int, n_max: int) -> list[list[int]]:
    """``table[n][monic_index(f)] = d_ell(f)`` for every monic ``f`` of degree ``n <= n_max``.

    Built as the ell-fold Dirichlet convolution of the constant 1: each step adds
    ``d_{ell-1}(g)`` into ``d_ell(g h)`` for every pair of monics with ``deg g + deg h <= n_max``.
    """
    check_prime(q)
    if ell < 1:
        raise ValueError("ell must be positive")
    return [list(row) for row in _divisor_table(q, ell, n_max)]


@lru_cache(maxsize=None)
def _divisor_table(q: int, ell: int, n_max: int) -> tuple[tuple[int, ...], ...]:
    if ell == 1:
        return tuple(tuple([1] * q**n) for n in range(n_max + 1))
    prev = _divisor_table(q, ell - 1, n_max)
    cur = [[0] * q**n for n in range(n_max + 1)]
    polys = [list(monics(q, n)) for n in range(n_max + 1)]
    for a in range(n_max + 1):
        for g, dg in zip(polys[a], prev[a]):
            for b in range(n_max - a + 1):
                row = cur[a + b]
                for h in polys[b]:
                    row[monic_index(g * h)] += dg
    return tuple(tuple(row) for row in cur)


def divisor_function(f: FqPoly, ell: int) -> int:
    if not f.is_monic():
        raise ValueError("d_ell is defined on monic polynomials")
    return _divisor_table(f.p, ell, f.degree)[f.degree][monic_index(f)]


def divisor_generating_coeff(q: int, ell: int, n: int) -> int:
    """``[u^n] ((1 - u)/(1 - q u))^ell``: the d_ell mass of monics of degree n with f(0) != 0."""
    # (1-u)/(1-qu) = 1 + sum_{m>=1} (q-1) q^(m-1) u^m
    base = [1] + [(q - 1) * q ** (m - 1) for m in range(1, n + 1)]
    acc = [1] + [0] * n
    for _ in range(ell):
        acc = [sum(acc[i] * base[m - i] for i in range(m + 1)) for m in range(n + 1)]
    return acc[n]


# -- quadratic character -------------------------------------------------------------

def legendre(q: int, a: int) -> int:
    a %= q
    if a == 0:
        return 0
    return 1 if pow(a, (q - 1) // 2, q) == 1 else -1


def chi2(q: int, f: FqPoly) -> int:
    """Quadratic character of ``f(0)`` via Euler's criterion."""
    check_prime(q, odd=True)
    return legendre(q, f[0])


def residue_symbol(f: FqPoly, P: FqPoly) -> int:
    """Quadratic residue symbol of ``f`` modulo the monic irreducible ``P``."""
    r = f % P
    if r.is_zero():
        return 0
    e = (P.p ** P.degree - 1) // 2
    return 1 if r.powmod(e, P) == FqPoly(P.p, (1,)) else -1
