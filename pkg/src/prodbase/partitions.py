"""Integer partitions: enumeration, counting, and the basis-type lower bound.

A partition is kept in canonical form (weakly decreasing positive parts, no
zero padding) and doubles as the structural type of a product basis: each part
is the dimension of one orthogonal subspace in the qudit-side decomposition.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = [
    "MAX_N",
    "Partition",
    "partitions_of",
    "partition_count",
    "type_count_lower_bound",
]

# p(64) = 1741630 fits comfortably in machine integers; C^(2*64) is still
# desk-scale, so 64 is where this library stops.
MAX_N = 64


@dataclass(frozen=True, order=True)
class Partition:
    """A weakly decreasing tuple of positive integers; `n` is their sum."""

    parts: tuple[int, ...]

    def __post_init__(self):
        if not self.parts:
            raise ValueError("partition needs at least one part")
        if any(not isinstance(p, int) or p < 1 for p in self.parts):
            raise ValueError(f"parts must be positive integers, got {self.parts!r}")
        if any(a < b for a, b in zip(self.parts, self.parts[1:])):
            raise ValueError(f"parts must be weakly decreasing, got {self.parts!r}")
        object.__setattr__(self, "parts", tuple(self.parts))

    @property
    def n(self) -> int:
        return sum(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)

    def __str__(self):
        return "+".join(str(p) for p in self.parts)

    @classmethod
    def from_string(cls, text: str) -> "Partition":
        """Parse '+'-separated parts, e.g. '3+2+1'."""
        try:
            parts = tuple(int(piece) for piece in text.split("+"))
        except ValueError:
            raise ValueError(f"invalid partition string {text!r}") from None
        return cls(parts)


def _check_range(n: int) -> None:
    if not isinstance(n, int) or not 1 <= n <= MAX_N:
        raise ValueError(f"n must be an integer in [1, {MAX_N}], got {n!r}")


def partitions_of(n: int) -> list[Partition]:
    """All partitions of n, in reverse lexicographic order."""
    _check_range(n)
    out: list[Partition] = []
    prefix: list[int] = []

    def descend(remaining: int, max_part: int) -> None:
        if remaining == 0:
            out.append(Partition(tuple(prefix)))
            return
        for part in range(min(max_part, remaining), 0, -1):
            prefix.append(part)
            descend(remaining - part, part)
            prefix.pop()

    descend(n, n)
    return out


def partition_count(n: int) -> int:
    """p(n), the number of partitions of n, by dynamic programming."""
    _check_range(n)
    table = [1] + [0] * n
    for part in range(1, n + 1):
        for total in range(part, n + 1):
            table[total] += table[total - part]
    return table[n]


def type_count_lower_bound(n: int) -> int:
    """Lower bound p(n) + 1 on the number of structural types of product bases.

    One type per partition, plus one extra because the all-in-one-subspace
    partition is realized by two structurally distinct bases (coinciding vs
    differing qudit-side group bases).
    """
    return partition_count(n) + 1
