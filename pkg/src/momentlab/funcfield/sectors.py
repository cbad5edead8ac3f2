"""Unit groups mod S^k, the sector group, the map U_k and super-even characters.

Residues mod ``S^k`` are length-``k`` coefficient tuples, constant term first.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Sequence, Union

import numpy as np

from .fqpoly import FqPoly, check_prime

Residue = tuple[int, ...]


class GroupStructureError(RuntimeError):
    """A group-theoretic invariant failed; indicates a bug in the tables."""


# -- truncated power series ------------------------------------------------------------

def reduce(f: Union[FqPoly, Sequence[int]], q: int, k: int) -> Residue:
    c = f.coeffs if isinstance(f, FqPoly) else tuple(f)
    return tuple(c[i] % q if i < len(c) else 0 for i in range(k))


def series_mul(a: Residue, b: Residue, q: int) -> Residue:
    k = len(a)
    out = [0] * k
    for i, x in enumerate(a):
        if x:
            for j in range(k - i):
                out[i + j] += x * b[j]
    return tuple(v % q for v in out)


def series_inv(a: Residue, q: int) -> Residue:
    if a[0] % q == 0:
        raise ZeroDivisionError("not a unit mod S")
    k = len(a)
    inv0 = pow(a[0], -1, q)
    out = [0] * k
    out[0] = inv0
    for n in range(1, k):
        s = sum(a[i] * out[n - i] for i in range(1, n + 1))
        out[n] = (-s * inv0) % q
    return tuple(out)


def series_sigma(a: Residue, q: int) -> Residue:
    return tuple(c if i % 2 == 0 else (-c) % q for i, c in enumerate(a))


def series_pow(a: Residue, e: int, q: int) -> Residue:
    result = (1,) + (0,) * (len(a) - 1)
    base = a
    if e < 0:
        base, e = series_inv(a, q), -e
    while e:
        if e & 1:
            result = series_mul(result, base, q)
        base = series_mul(base, base, q)
        e >>= 1
    return result


def series_sqrt(x: Residue, q: int) -> Residue:
    """Square root with constant term 1 by Newton's iteration ``y <- (y + x/y)/2``."""
    if x[0] % q != 1:
        raise ValueError("need constant term 1")
    k = len(x)
    half = pow(2, -1, q)
    y = (1,) + (0,) * (k - 1)
    prec = 1
    while True:
        ratio = series_mul(x, series_inv(y, q), q)
        y = tuple((a + b) * half % q for a, b in zip(y, ratio))
        if prec >= k:
            break
        prec *= 2
    if series_mul(y, y, q) != x:
        raise GroupStructureError("square root did not converge")
    return y


def norm(a: Residue, q: int) -> Residue:
    return series_mul(a, series_sigma(a, q), q)


def is_even(a: Residue) -> bool:
    return all(c == 0 for c in a[1::2])


def in_sector_group(a: Residue, q: int) -> bool:
    return a[0] == 1 and norm(a, q) == (1,) + (0,) * (len(a) - 1)


# -- the map U_k ------------------------------------------------------------------------

@dataclass(frozen=True)
class SectorGroupElement:
    q: int
    k: int
    coeffs: Residue

    def __mul__(self, other: "SectorGroupElement") -> "SectorGroupElement":
        return SectorGroupElement(self.q, self.k, series_mul(self.coeffs, other.coeffs, self.q))

    def is_valid(self) -> bool:
        return in_sector_group(self.coeffs, self.q)


@lru_cache(maxsize=None)
def _u_residue(r: Residue, q: int) -> Residue:
    x = series_mul(r, series_inv(series_sigma(r, q), q), q)
    return series_sqrt(x, q)


def u_map(q: int, k: int, f: Union[FqPoly, Sequence[int]]) -> SectorGroupElement:
    """``sqrt(f / sigma(f)) mod S^k``."""
    r = reduce(f, q, k)
    if r[0] == 0:
        raise ValueError("U_k is defined only for f with f(0) != 0")
    return SectorGroupElement(q, k, _u_residue(r, q))


# -- the sector group ----------------------------------------------------------------

@dataclass
class SectorGroup:
    q: int
    k: int
    elements: list[Residue]
    table: list[list[int]]
    even_units: list[Residue]
    index: dict[Residue, int] = field(default_factory=dict)

    def __post_init__(self):
        self.index = {e: i for i, e in enumerate(self.elements)}

    @property
    def kappa(self) -> int:
        return self.k // 2

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def element(self, i: int) -> SectorGroupElement:
        return SectorGroupElement(self.q, self.k, self.elements[i])

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    def power(self, i: int, e: int) -> int:
        return self.index[series_pow(self.elements[i], e, self.q)]

    def project(self, f: Union[FqPoly, Sequence[int]]) -> int:
        """Index of ``U_k(f)``; by construction the S^1_k-component of ``f``."""
        return self.index[u_map(self.q, self.k, f).coeffs]


def _units(q: int, k: int):
    for tail in product(range(q), repeat=k - 1):
        for c0 in range(1, q):
            yield (c0,) + tail


@lru_cache(maxsize=None)
def sector_group(q: int, k: int) -> SectorGroup:
    """Enumerate ``S^1_k`` and ``H_k`` and check orders and the product decomposition."""
    check_prime(q, odd=True)
    if k < 2:
        raise ValueError("k must be at least 2")
    one = (1,) + (0,) * (k - 1)
    elements = sorted(
        (one[:1] + tail for tail in product(range(q), repeat=k - 1)),
        key=lambda r: (r != one, r),
    )
    elements = [r for r in elements if in_sector_group(r, q)]
    kappa = k // 2
    if len(elements) != q**kappa:
        raise GroupStructureError(f"|S^1_{k}| = {len(elements)}, expected {q**kappa}")
    even_units = [r for r in _units(q, k) if is_even(r)]
    if len(even_units) != (q - 1) * q ** ((k - 1) // 2):
        raise GroupStructureError(f"|H_{k}| = {len(even_units)}")
    # H_k x S^1_k -> units must be a bijection
    products = {series_mul(h, s, q) for h in even_units for s in elements}
    if len(products) != (q - 1) * q ** (k - 1):
        raise GroupStructureError("H_k x S^1_k does not cover the unit group exactly once")
    index = {e: i for i, e in enumerate(elements)}
    table = []
    for a in elements:
        row = []
        for b in elements:
            c = series_mul(a, b, q)
            if c not in index:
                raise GroupStructureError("S^1_k is not closed under multiplication")
            row.append(index[c])
        table.append(row)
    return SectorGroup(q, k, elements, table, even_units)


# -- characters ------------------------------------------------------------------------

def _basis(group: SectorGroup) -> tuple[list[int], list[int], dict[int, tuple[int, ...]]]:
    """Greedy basis of the abelian p-group: repeatedly take an element of maximal
    order modulo the span so far, then correct it into a direct complement.

    Returns basis indices, their orders and the exponent vector of every element.
    """
    n = len(group)
    logs: dict[int, tuple[int, ...]] = {0: ()}
    basis: list[int] = []
    orders: list[int] = []
    while len(logs) < n:
        best = None
        for g in range(n):
            r, x = 1, g
            while x not in logs:
                x = group.mul(x, g)
                r += 1
            if best is None or r > best[0]:
                best = (r, g, x)
        r, g, x = best
        e = logs[x]
        if any(ei % r for ei in e):
            raise GroupStructureError("greedy basis extraction failed")
        for b, o, ei in zip(basis, orders, e):
            g = group.mul(g, group.power(b, (-(ei // r)) % o))
        new: dict[int, tuple[int, ...]] = {}
        y = 0
        for j in range(r):
            for h, lh in logs.items():
                new[group.mul(h, y)] = lh + (j,)
            y = group.mul(y, g)
        if y != 0 or len(new) != len(logs) * r:
            raise GroupStructureError("basis element is not independent")
        logs = new
        basis.append(g)
        orders.append(r)
    return basis, orders, logs


@dataclass
class SuperEvenCharacter:
    """A character of ``S^1_k``, extended to units mod ``S^k`` through ``U_k``."""

    group: SectorGroup
    label: tuple[int, ...]
    values: np.ndarray
    swan: int

    @property
    def is_trivial(self) -> bool:
        return all(t == 0 for t in self.label)

    @property
    def primitive(self) -> bool:
        # maximal possible conductor for a super-even character mod S^k
        return self.swan == 2 * self.group.kappa - 1

    def at(self, i: int) -> complex:
        return complex(self.values[i])

    def __call__(self, f: Union[FqPoly, Sequence[int]]) -> complex:
        return complex(self.values[self.group.project(f)])


def _swan(values: np.ndarray, level_images: list[list[int]]) -> int:
    d = 0
    for j, imgs in enumerate(level_images):
        if any(abs(values[i] - 1) > 1e-9 for i in imgs):
            d = j
    return d


@lru_cache(maxsize=None)
def super_even_characters(q: int, k: int) -> tuple[SuperEvenCharacter, ...]:
    """All ``q^kappa`` characters, trivial one first, with Swan conductors."""
    group = sector_group(q, k)
    basis, orders, logs = _basis(group)
    exps = np.array([logs[i] for i in range(len(group))], dtype=float).reshape(len(group), len(orders))
    # images of the generators 1 + a S^j of Gamma_j
    level_images: list[list[int]] = [[]]
    for j in range(1, k):
        imgs = []
        for a in range(1, q):
            r = [0] * k
            r[0], r[j] = 1, a
            imgs.append(group.project(tuple(r)))
        level_images.append(imgs)
    chars = []
    for label in product(*(range(o) for o in orders)):
        phase = exps @ (np.array(label, dtype=float) / np.array(orders, dtype=float)) if orders else np.zeros(len(group))
        values = np.exp(2j * np.pi * phase)
        chars.append(SuperEvenCharacter(group, tuple(label), values, _swan(values, level_images)))
    if len(chars) != q ** (k // 2):
        raise GroupStructureError("wrong number of characters")
    return tuple(chars)


def orthogonality_error(chars: Sequence[SuperEvenCharacter]) -> float:
    """``max |sum_v conj(X1(v)) X2(v) - q^kappa [X1 = X2]|`` over all pairs."""
    M = np.array([c.values for c in chars])
    gram = M.conj() @ M.T
    size = M.shape[1]
    return float(np.max(np.abs(gram - size * np.eye(len(chars)))))


def multiplicativity_error(char: SuperEvenCharacter) -> float:
    g = char.group
    v = char.values
    return max(abs(v[g.mul(i, j)] - v[i] * v[j]) for i in range(len(g)) for j in range(len(g)))


def sector_equivalences(q: int, k: int, f: Union[FqPoly, Sequence[int]], v: Residue) -> tuple[bool, bool, bool, bool]:
    """The four sector-membership conditions for a unit ``f`` and ``v`` in ``S^1_k``:
    ``U_k(f)`` congruent to ``v``; ``U_k(f) = U_k(v)``; ``f H_k = v H_k``; all characters agree.
    """
    group = sector_group(q, k)
    r = reduce(f, q, k)
    uf = u_map(q, k, r).coeffs
    in_sector = uf == tuple(v)
    same_u = uf == u_map(q, k, v).coeffs
    same_coset = is_even(series_mul(r, series_inv(tuple(v), q), q))
    iv, jf = group.index[tuple(v)], group.index[uf]
    same_chars = all(abs(c.values[iv] - c.values[jf]) < 1e-9 for c in super_even_characters(q, k))
    return in_sector, same_u, same_coset, same_chars
