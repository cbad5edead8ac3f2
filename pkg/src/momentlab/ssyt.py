"""Tableau-counting engine for the symplectic and orthogonal moment integrals.

``J(m, n; N)`` is the coefficient of ``x^m y^n`` in the Haar average of
``det(1+Ux)^k det(1+Uy)^k``.  Over ``USp(2N)`` the average is a sum of Schur
functions over even partitions with largest part at most ``2N``; over
``O(2N+1)`` (total mass 2) it is twice the sum over partitions whose parts
all occur an even number of times, largest part at most ``2N+1``.  Evaluated
at ``(x,...,x, y,...,y)`` with ``k`` copies of each, the coefficient counts
semistandard tableaux with entries ``1..2k`` whose first ``k`` letters occur
``m`` times in total.

A tableau is split into its ``1..k`` part (a straight shape ``nu``, counted
by the hook-content formula) and its ``k+1..2k`` part (a skew shape counted
by chaining horizontal strips).  Everything is exact integer arithmetic.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterator

from .partitions import Partition, partitions_in_box


class Ensemble(str, enum.Enum):
    SYMPLECTIC = "sym"
    ORTHOGONAL = "orth"

    @classmethod
    def parse(cls, value: "str | Ensemble") -> "Ensemble":
        if isinstance(value, Ensemble):
            return value
        v = str(value).strip().lower()
        if v in ("sym", "symplectic", "sp", "usp"):
            return cls.SYMPLECTIC
        if v in ("orth", "orthogonal", "o"):
            return cls.ORTHOGONAL
        raise ValueError(f"unknown ensemble {value!r}")


def max_degree(ensemble, k: int, N: int) -> int:
    """Top exponent of ``det(1+Ux)^k``: ``2Nk`` on USp(2N), ``(2N+1)k`` on O(2N+1)."""
    ens = Ensemble.parse(ensemble)
    return 2 * N * k if ens is Ensemble.SYMPLECTIC else (2 * N + 1) * k


def mass(ensemble) -> int:
    return 1 if Ensemble.parse(ensemble) is Ensemble.SYMPLECTIC else 2


@dataclass(frozen=True)
class MomentValue:
    ensemble: Ensemble
    k: int
    n: int
    N: int
    value: int

    def __post_init__(self):
        if not isinstance(self.value, int) or self.value < 0:
            raise AssertionError(f"moment must be a nonnegative integer, got {self.value!r}")

    def __int__(self) -> int:
        return self.value


# -- shapes ---------------------------------------------------------------

def enumerate_shapes(ensemble, k: int, N: int, weight: int) -> list[Partition]:
    """Partitions of ``weight`` contributing to the Schur-sum model.

    Symplectic: every part even, largest part <= 2N.
    Orthogonal: every part repeated an even number of times, largest part <= 2N+1.
    At most ``2k`` parts in both cases.
    """
    ens = Ensemble.parse(ensemble)
    if weight < 0:
        raise ValueError("weight must be nonnegative")
    if weight % 2:
        return []
    half = weight // 2
    if ens is Ensemble.SYMPLECTIC:
        return [Partition(tuple(2 * p for p in lam)) for lam in partitions_in_box(half, 2 * k, N)]
    return [
        Partition(tuple(p for p in lam for _ in (0, 1)))
        for lam in partitions_in_box(half, k, 2 * N + 1)
    ]


def all_shapes(ensemble, k: int, N: int) -> list[Partition]:
    top = 2 * max_degree(ensemble, k, N)
    return [lam for w in range(0, top + 1, 2) for lam in enumerate_shapes(ensemble, k, N, w)]


# -- straight and skew tableau counts -------------------------------------

def hook_content_count(shape: Partition, letters: int) -> int:
    """Number of SSYT of ``shape`` with entries in ``1..letters`` (``s_shape(1^letters)``)."""
    if len(shape) > letters:
        return 0
    conj = shape.conjugate()
    num = 1
    den = 1
    for i, j in shape.cells():
        num *= letters + j - i
        den *= (shape[i] - j - 1) + (conj[j] - i - 1) + 1
    assert num % den == 0
    return num // den


def _horizontal_strips(inner: tuple[int, ...], outer: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    """All ``mu`` with ``inner <= mu <= outer`` and ``mu / inner`` a horizontal strip."""
    rows = len(outer)
    ranges = []
    for r in range(rows):
        lo = inner[r] if r < len(inner) else 0
        hi = outer[r]
        if r > 0:
            hi = min(hi, inner[r - 1] if r - 1 < len(inner) else 0)
        if hi < lo:
            return
        ranges.append(range(lo, hi + 1))
    for mu in product(*ranges):
        yield mu


@lru_cache(maxsize=None)
def _strip_chains(inner: tuple[int, ...], outer: tuple[int, ...], steps: int) -> int:
    # inner and outer are zero-padded to the same length
    if steps == 0:
        return 1 if inner == outer else 0
    if steps == 1:
        ok = all(
            inner[r] <= outer[r] and (r == 0 or outer[r] <= inner[r - 1]) for r in range(len(outer))
        )
        return 1 if ok else 0
    return sum(_strip_chains(mu, outer, steps - 1) for mu in _horizontal_strips(inner, outer))


def skew_count(outer: Partition, inner: Partition, letters: int) -> int:
    """Number of SSYT of skew shape ``outer / inner`` with entries from ``letters`` values."""
    if not outer.contains(inner):
        return 0
    rows = len(outer)
    a = tuple(inner[r] for r in range(rows))
    b = tuple(outer[r] for r in range(rows))
    return _strip_chains(a, b, letters)


def _subshapes(shape: Partition, size: int, max_rows: int) -> Iterator[Partition]:
    """Partitions ``nu`` of ``size`` with ``nu <= shape`` and at most ``max_rows`` rows."""
    rows = min(max_rows, len(shape))

    def rec(r, remaining, cap, prefix):
        if remaining == 0:
            yield Partition(tuple(prefix))
            return
        if r == rows:
            return
        hi = min(cap, shape[r], remaining)
        for p in range(hi, 0, -1):
            prefix.append(p)
            yield from rec(r + 1, remaining - p, p, prefix)
            prefix.pop()

    yield from rec(0, size, size, [])


def count_ssyt(shape: Partition, k: int, m: int, n: int) -> int:
    """SSYT of ``shape`` with entries ``1..2k``: ``m`` entries from ``1..k`` and ``n`` from ``k+1..2k``."""
    shape = shape if isinstance(shape, Partition) else Partition(tuple(shape))
    if len(shape) > 2 * k:
        raise ValueError(f"shape {shape} has more than 2k={2 * k} parts")
    if m < 0 or n < 0 or m + n != shape.size:
        raise ValueError(f"content m+n={m + n} does not match |shape|={shape.size}")
    return sum(
        hook_content_count(nu, k) * skew_count(shape, nu, k) for nu in _subshapes(shape, m, k)
    )


# -- moments ----------------------------------------------------------------

def J_moment(ensemble, k: int, m: int, n: int, N: int) -> int:
    """Coefficient of ``x^m y^n`` in the Haar average of ``det(1+Ux)^k det(1+Uy)^k``."""
    ens = Ensemble.parse(ensemble)
    if k < 1 or N < 0:
        raise ValueError("need k >= 1 and N >= 0")
    if m < 0 or n < 0:
        return 0
    total = sum(count_ssyt(lam, k, m, n) for lam in enumerate_shapes(ens, k, N, m + n))
    return mass(ens) * total


def I_moment(ensemble, k: int, n: int, N: int) -> MomentValue:
    """Diagonal moment ``I(n; N) = J(n, n; N)``."""
    ens = Ensemble.parse(ensemble)
    if n < 0:
        raise ValueError("n must be nonnegative")
    return MomentValue(ens, k, n, N, J_moment(ens, k, n, n, N))


def J_table(ensemble, k: int, N: int) -> list[list[int]]:
    """Full ``(D+1) x (D+1)`` table of ``J(m, n; N)``, ``D`` the top degree.

    Each admissible shape is visited once and its tableaux are distributed
    over ``(m, n)`` by the size of the ``1..k`` sub-shape.
    """
    ens = Ensemble.parse(ensemble)
    D = max_degree(ens, k, N)
    table = [[0] * (D + 1) for _ in range(D + 1)]
    w = mass(ens)
    for lam in all_shapes(ens, k, N):
        size = lam.size
        for m in range(0, min(size, D) + 1):
            n = size - m
            if n > D:
                continue
            for nu in _subshapes(lam, m, k):
                table[m][n] += w * hook_content_count(nu, k) * skew_count(lam, nu, k)
    return table


# -- the vertical-strip coefficient of the odd orthogonal expansion ------------

def vertical_strip_coeff(mu: Partition, N: int) -> int:
    """Closed form of ``sum (-1)^|lambda|`` over ``lambda_1 <= 2N`` with ``mu/lambda`` a vertical strip.

    Zero unless ``mu_1 <= 2N+1`` and every part smaller than ``2N+1`` has even
    multiplicity.  Otherwise ``(-1)^|mu|``, times ``(-1)^m`` when the part
    ``2N+1`` occurs ``m`` times (those rows are forced to shrink).
    """
    mu = mu if isinstance(mu, Partition) else Partition(tuple(mu))
    top = 2 * N + 1
    if mu.largest > top:
        return 0
    sign = -1 if mu.size % 2 else 1
    for part, mult in mu.multiplicities():
        if part == top:
            if mult % 2:
                sign = -sign
        elif mult % 2:
            return 0
    return sign


def vertical_strip_coeff_bruteforce(mu: Partition, N: int) -> int:
    """Same quantity by listing every removable vertical strip."""
    mu = mu if isinstance(mu, Partition) else Partition(tuple(mu))
    total = 0
    for strip in product((0, 1), repeat=len(mu)):
        lam = [p - s for p, s in zip(mu.parts, strip)]
        if any(a < b for a, b in zip(lam, lam[1:])):
            continue
        if (lam[0] if lam else 0) > 2 * N:
            continue
        total += -1 if sum(lam) % 2 else 1
    return total
