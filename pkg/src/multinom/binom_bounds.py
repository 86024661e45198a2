"""Orbit sizes, the lcm identity, and gcd lower bounds for binomial pairs.

For 0 < i <= j <= N/2, the symmetric group S_N acts on pairs of 2-block
ordered set partitions of {1,...,N} with block sizes (i, N-i) and (j, N-j).
The orbits are indexed by h = |A intersect D| in [0, i], with sizes

    Q_h = C(N,i) C(i,h) C(N-i, j-i+h) = C(N,j) C(j,i-h) C(N-j,h),

each divisible by L = lcm(C(N,i), C(N,j)).  Playing the Q_h against each
other bounds L from above and hence gcd(C(N,i), C(N,j)) = product/L from
below; the bounds involve square roots, so every comparison here is done on
exact rational squares.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd, lcm


def _check_pair(N: int, i: int, j: int, min_i: int) -> None:
    if not (min_i <= i <= j and 2 * j <= N):
        raise ValueError(f"need {min_i} <= i <= j <= N/2, got N={N} i={i} j={j}")


@dataclass(frozen=True)
class OrbitSpectrum:
    """Orbit sizes Q_h, h = 0..i, for block sizes (i, N-i) x (j, N-j)."""

    N: int
    i: int
    j: int
    sizes: dict[int, int]


@dataclass(frozen=True)
class BoundReport:
    """gcd/lcm of a binomial pair and the exact lower bounds on the gcd.

    The two bounds are irrational (each carries a square root), so they are
    stored squared, as exact rationals: gcd >= bound iff gcd**2 >= bound_sq.
    """

    N: int
    i: int
    j: int
    gcd: int
    lcm: int
    bound_exact_sq: Fraction
    bound_rough_sq: Fraction
    satisfied: bool


def orbit_spectrum(N: int, i: int, j: int) -> OrbitSpectrum:
    """All Q_h for the pair action; both closed forms are cross-asserted."""
    _check_pair(N, i, j, min_i=1)
    sizes = {}
    for h in range(i + 1):
        left = comb(N, i) * comb(i, h) * comb(N - i, j - i + h)
        assert left == comb(N, j) * comb(j, i - h) * comb(N - j, h)
        sizes[h] = left
    assert sum(sizes.values()) == comb(N, i) * comb(N, j)
    return OrbitSpectrum(N, i, j, sizes)


def identity_A(N: int, i: int, j: int) -> int:
    """(i-1) Q_1^2 - 2i Q_0 Q_2, checked against its closed form.

    The closed form is ((j-i+2)(N-j)/(i-1)) C(N,j)^2 C(j,i-2)^2 (N-i+1);
    the value is positive and divisible by L^2.  Requires i >= 2.
    """
    _check_pair(N, i, j, min_i=2)
    q = orbit_spectrum(N, i, j).sizes
    val = (i - 1) * q[1] * q[1] - 2 * i * q[0] * q[2]
    num = (j - i + 2) * (N - j) * (N - i + 1) * comb(N, j) ** 2 * comb(j, i - 2) ** 2
    closed, rem = divmod(num, i - 1)
    assert rem == 0 and val == closed, f"identity fails at {(N, i, j)}"
    assert val > 0
    L = lcm(comb(N, i), comb(N, j))
    assert val % (L * L) == 0
    return val


def gcd_bound_report(N: int, i: int, j: int) -> BoundReport:
    """gcd(C(N,i), C(N,j)) with its two exact lower bounds (i >= 2).

    bound_exact is ((N-i+2)(N-i+1)/(i(i-1))) * sqrt(2^(2i-3)(i-1)/N^3);
    bound_rough is sqrt(N) * 2^(i-7/2) / (i sqrt(i-1)).  Stored squared.
    """
    _check_pair(N, i, j, min_i=2)
    a, b = comb(N, i), comb(N, j)
    g = gcd(a, b)
    exact_sq = Fraction(
        (N - i + 2) ** 2 * (N - i + 1) ** 2 * 2 ** (2 * i - 3) * (i - 1),
        i * i * (i - 1) * (i - 1) * N ** 3,
    )
    rough_sq = Fraction(
        N * 2 ** max(0, 2 * i - 7), i * i * (i - 1) * 2 ** max(0, 7 - 2 * i)
    )
    return BoundReport(
        N=N,
        i=i,
        j=j,
        gcd=g,
        lcm=a * b // g,
        bound_exact_sq=exact_sq,
        bound_rough_sq=rough_sq,
        satisfied=Fraction(g * g) >= exact_sq,
    )


def verify_es_pair(N: int, i: int, j: int) -> bool:
    """Erdos-Szekeres strengthening: gcd(C(N,i), C(N,j)) >= 2**i (i >= 1)."""
    _check_pair(N, i, j, min_i=1)
    return gcd(comb(N, i), comb(N, j)) >= 2 ** i
