"""Brute-force orbit enumeration for products of set-partition actions of S_N.

A point of the product space is a tuple of ordered partitions of {1,...,N},
one per requested shape.  Two points lie in the same S_N-orbit exactly when
all their cell cardinalities agree, where a cell is the intersection of one
block from each component partition; so the nested tuple of cell counts is a
complete orbit invariant and classes can be counted without walking the
group.  (An explicit flood-fill over generators confirms this in the tests.)

The product space grows very fast, so enumeration is gated by a ceiling on
N: 10 when there are at most two shapes, 8 for three or more.  The
MULTINOM_BRUTE_CEILING environment variable overrides both.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from itertools import combinations, product

PAIR_CEILING = 10
TRIPLE_CEILING = 8
CEILING_ENV = "MULTINOM_BRUTE_CEILING"


class BruteForceLimitError(RuntimeError):
    """Requested N is above the configured enumeration ceiling."""


@dataclass(frozen=True)
class PartitionShape:
    """Ordered block sizes of a set partition of {1,...,weight}."""

    block_sizes: tuple[int, ...]

    def __post_init__(self) -> None:
        sizes = tuple(self.block_sizes)
        if not sizes or any(s < 1 for s in sizes):
            raise ValueError(f"block sizes must be positive, got {sizes}")
        object.__setattr__(self, "block_sizes", sizes)

    @property
    def weight(self) -> int:
        return sum(self.block_sizes)


@dataclass(frozen=True)
class OrbitClass:
    """One orbit: its cell-count invariant (nested tuples) and exact size."""

    invariant: tuple
    size: int


def _ordered_partitions(n: int, sizes: tuple[int, ...]):
    """All ordered partitions of {0..n-1} with the given block sizes, as
    tuples of bitmasks, in a fixed deterministic order."""

    def rec(avail: tuple[int, ...], sizes: tuple[int, ...]):
        if not sizes:
            yield ()
            return
        for combo in combinations(avail, sizes[0]):
            mask = 0
            for b in combo:
                mask |= 1 << b
            taken = set(combo)
            rest = tuple(x for x in avail if x not in taken)
            for tail in rec(rest, sizes[1:]):
                yield (mask,) + tail

    return rec(tuple(range(n)), sizes)


def _cell_invariant(point: tuple[tuple[int, ...], ...], full: int) -> tuple:
    def rec(mask: int, rest):
        if not rest:
            return mask.bit_count()
        return tuple(rec(mask & block, rest[1:]) for block in rest[0])

    return rec(full, point)


def _ceiling(num_shapes: int) -> int:
    env = os.environ.get(CEILING_ENV)
    if env is not None:
        return int(env)
    return PAIR_CEILING if num_shapes <= 2 else TRIPLE_CEILING


def enumerate_orbits(N: int, shapes) -> list[OrbitClass]:
    """Orbit classes of the product action, via exhaustive enumeration.

    ``shapes`` is a list of PartitionShape (bare block-size tuples are
    coerced), each of weight N.  Classes come back sorted by invariant;
    their sizes sum to the product of the component space cardinalities.
    Raises BruteForceLimitError when N exceeds the ceiling.
    """
    shapes = [s if isinstance(s, PartitionShape) else PartitionShape(tuple(s)) for s in shapes]
    if not shapes:
        raise ValueError("need at least one shape")
    for s in shapes:
        if s.weight != N:
            raise ValueError(f"shape {s.block_sizes} has weight {s.weight}, not {N}")
    ceiling = _ceiling(len(shapes))
    if N > ceiling:
        raise BruteForceLimitError(
            f"N={N} exceeds the brute-force ceiling {ceiling} for "
            f"{len(shapes)} shape(s); set {CEILING_ENV} to raise it"
        )
    spaces = [list(_ordered_partitions(N, s.block_sizes)) for s in shapes]
    full = (1 << N) - 1
    counts: dict[tuple, int] = {}
    for point in product(*spaces):
        inv = _cell_invariant(point, full)
        counts[inv] = counts.get(inv, 0) + 1
    return [OrbitClass(inv, sz) for inv, sz in sorted(counts.items())]
