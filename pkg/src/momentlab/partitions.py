"""Integer partitions with the few operations the moment engines need."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import groupby
from typing import Iterator


@dataclass(frozen=True, order=True)
class Partition:
    """Weakly decreasing tuple of positive parts.

    Trailing zeros are stripped on construction, so ``Partition((2, 1, 0))``
    equals ``Partition((2, 1))``.
    """

    parts: tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        for a, b in zip(parts, parts[1:]):
            if a < b:
                raise ValueError(f"parts must be weakly decreasing: {parts}")
        if parts and parts[-1] < 0:
            raise ValueError(f"parts must be positive: {parts}")
        object.__setattr__(self, "parts", parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __getitem__(self, i: int) -> int:
        # zero-padded indexing is what the tableau code wants
        return self.parts[i] if i < len(self.parts) else 0

    def __repr__(self) -> str:
        return f"Partition{self.parts}"

    @property
    def size(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    @property
    def largest(self) -> int:
        return self.parts[0] if self.parts else 0

    def conjugate(self) -> "Partition":
        if not self.parts:
            return self
        return Partition(tuple(sum(1 for p in self.parts if p > i) for i in range(self.parts[0])))

    def is_even(self) -> bool:
        """Every part even."""
        return all(p % 2 == 0 for p in self.parts)

    def has_even_conjugate(self) -> bool:
        """Every part occurs an even number of times."""
        return all(len(list(g)) % 2 == 0 for _, g in groupby(self.parts))

    def multiplicities(self) -> list[tuple[int, int]]:
        """(distinct part, multiplicity) pairs, largest part first."""
        return [(p, len(list(g))) for p, g in groupby(self.parts)]

    def contains(self, other: "Partition") -> bool:
        return all(self[i] >= other[i] for i in range(max(len(self), len(other))))

    def cells(self) -> Iterator[tuple[int, int]]:
        for i, p in enumerate(self.parts):
            for j in range(p):
                yield i, j


def partitions_in_box(size: int, max_parts: int, max_part: int) -> Iterator[Partition]:
    """All partitions of ``size`` with at most ``max_parts`` parts, each at most ``max_part``."""

    def rec(remaining, parts_left, cap, prefix):
        if remaining == 0:
            yield Partition(tuple(prefix))
            return
        if parts_left == 0:
            return
        # the remaining parts cannot hold more than parts_left * cap
        if remaining > parts_left * cap:
            return
        for p in range(min(cap, remaining), 0, -1):
            prefix.append(p)
            yield from rec(remaining - p, parts_left - 1, p, prefix)
            prefix.pop()

    if size < 0:
        return
    yield from rec(size, max_parts, max_part, [])


def all_partitions_in_box(max_parts: int, max_part: int) -> Iterator[Partition]:
    """Every partition fitting in a ``max_parts`` x ``max_part`` rectangle, smallest sizes first."""
    for size in range(max_parts * max_part + 1):
        yield from partitions_in_box(size, max_parts, max_part)
