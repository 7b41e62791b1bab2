"""Integer partitions and set partitions with a cap on the part size."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .config import CapacityError, DomainError, dense_cap


@dataclass(frozen=True, order=True)
class PartitionShape:
    parts: tuple[int, ...]

    def __post_init__(self):
        if any(p < 1 for p in self.parts):
            raise DomainError("parts must be positive")
        if list(self.parts) != sorted(self.parts, reverse=True):
            raise DomainError("parts must be sorted in descending order")

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def k(self) -> int:
        return self.parts[0] if self.parts else 0


@dataclass(frozen=True)
class SetPartition:
    """Disjoint blocks of 1-based site labels covering ``1..N``.

    Blocks are stored canonically: each sorted, ordered by smallest element.
    Comparing ``key()`` tuples gives the lexicographic order used to pick a
    deterministic witness among tied minimizers.
    """

    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        blocks = tuple(sorted(tuple(sorted(b)) for b in self.blocks))
        flat = [s for b in blocks for s in b]
        if any(len(b) == 0 for b in blocks):
            raise DomainError("empty block")
        if sorted(flat) != list(range(1, len(flat) + 1)):
            raise DomainError(f"blocks {self.blocks} do not partition 1..{len(flat)}")
        object.__setattr__(self, "blocks", blocks)

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.blocks)

    @property
    def max_block(self) -> int:
        return max(len(b) for b in self.blocks)

    @property
    def shape(self) -> PartitionShape:
        return PartitionShape(tuple(sorted((len(b) for b in self.blocks), reverse=True)))

    def key(self) -> tuple[tuple[int, ...], ...]:
        return self.blocks

    def __str__(self):
        return "|".join("".join(str(s) if s < 10 else f"({s})" for s in b) for b in self.blocks)


def enumerate_partition_shapes(n: int, kmax: int) -> list[PartitionShape]:
    """Integer partitions of ``n`` with parts <= ``kmax``, in reverse lexicographic order."""
    if not 1 <= kmax <= n:
        raise DomainError(f"need 1 <= kmax <= n, got kmax={kmax}, n={n}")

    def gen(remaining, largest):
        if remaining == 0:
            yield ()
            return
        for part in range(min(remaining, largest), 0, -1):
            for rest in gen(remaining - part, part):
                yield (part,) + rest

    return [PartitionShape(parts) for parts in gen(n, kmax)]


def iter_blocks(n: int, kmax: int) -> Iterator[list[list[int]]]:
    """Stream raw block lists (mutable, reused between yields: copy to keep)."""
    blocks: list[list[int]] = []

    def place(site):
        if site > n:
            yield blocks
            return
        for b in blocks:
            if len(b) < kmax:
                b.append(site)
                yield from place(site + 1)
                b.pop()
        blocks.append([site])
        yield from place(site + 1)
        blocks.pop()

    yield from place(1)


def enumerate_set_partitions(n: int, kmax: int) -> Iterator[SetPartition]:
    """Every set partition of ``{1..n}`` with blocks of size <= ``kmax``, once each."""
    if n > dense_cap():
        raise CapacityError(f"{n} sites exceeds the dense cap of {dense_cap()}")
    if not 1 <= kmax <= n:
        raise DomainError(f"need 1 <= kmax <= n, got kmax={kmax}, n={n}")
    for blocks in iter_blocks(n, kmax):
        yield SetPartition(tuple(tuple(b) for b in blocks))
