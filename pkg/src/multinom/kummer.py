"""Multinomial coefficients, carry counting, p-acceptability, p-thresholds.

The central fact (Kummer's carry lemma, which generalizes from binomials to
any number of arguments): the exponent of a prime p in the multinomial
coefficient ch(a_1,...,a_k) = (a_1+...+a_k)! / a_1!...a_k! equals the number
of carries performed when a_1+...+a_k is added in base p.  That count is
computed here branch-free as

    (sum of base-p digit sums of the parts - digit sum of the total) / (p-1).

A decomposition of N is "p-acceptable" when that count is zero, i.e. ch is
coprime to p.  For p > N the addition is a single carry-free column, so every
decomposition is p-acceptable; only primes <= N ever matter.
"""

from __future__ import annotations

from dataclasses import dataclass

from .num_core import (
    FactoredInteger,
    digit_sum,
    digit_sum_table,
    is_prime,
    padic_valuation,
    primes_up_to,
)


@dataclass(frozen=True, order=True)
class Decomposition:
    """A weight N split into an ordered multiset of positive parts.

    Parts are stored nonincreasing (the canonical form); instances compare
    lexicographically on the part vector.
    """

    parts: tuple[int, ...]

    def __post_init__(self) -> None:
        parts = tuple(sorted(self.parts, reverse=True))
        if not parts:
            raise ValueError("a decomposition needs at least one part")
        if parts[-1] < 1:
            raise ValueError(f"all parts must be positive, got {parts}")
        object.__setattr__(self, "parts", parts)

    @property
    def weight(self) -> int:
        return sum(self.parts)

    @property
    def nomiality(self) -> int:
        """Number of parts."""
        return len(self.parts)

    def __str__(self) -> str:
        return "+".join(str(x) for x in self.parts)


@dataclass(frozen=True)
class AcceptanceProfile:
    """Per-prime acceptability of one decomposition, over all primes <= weight."""

    decomposition: Decomposition
    acceptable: dict[int, bool]


def carry_count(parts, p: int) -> int:
    """Number of base-p carries when the parts are added; equals v_p(ch(parts)).

    Parts may include zeros (they carry nothing); the list must be nonempty.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    parts = list(parts)
    if not parts:
        raise ValueError("parts must be nonempty")
    if any(x < 0 for x in parts):
        raise ValueError(f"parts must be nonnegative, got {parts}")
    total = sum(parts)
    s = sum(digit_sum(x, p) for x in parts) - digit_sum(total, p)
    q, r = divmod(s, p - 1)
    assert r == 0, "digit-sum excess is always a multiple of p-1"
    return q


def ch_value(parts) -> tuple[FactoredInteger, int]:
    """ch(parts) = (sum parts)!/prod(part!) as (factored form, exact integer).

    Computed from carry counts rather than factorials, so the factored form
    is exact and divisibility queries are one dictionary probe.  Zero parts
    are ignored; the value is invariant under permutation of the parts.
    """
    parts = [x for x in parts if x != 0] or [0]
    total = sum(parts)
    exps = {}
    for p in primes_up_to(total):
        c = carry_count(parts, p)
        if c:
            exps[p] = c
    factored = FactoredInteger.from_exponents(exps)
    return factored, factored.value


def is_p_acceptable(d: Decomposition, p: int) -> bool:
    """True when the parts of d add without carrying in base p.

    Equivalently, ch(d.parts) is coprime to p.  Always true for p > d.weight
    and for single-part decompositions.
    """
    return carry_count(d.parts, p) == 0


def p_threshold(N: int, p: int, k: int = 3) -> int | None:
    """Largest part in any p-acceptable k-part decomposition of N.

    None when N has base-p digit sum < k: then no such decomposition exists
    at all.  Otherwise the k-1 smallest extractable prime-power summands are
    peeled off in turn (each is the largest power of p dividing the running
    remainder), and the threshold is what remains.
    """
    if N < 1:
        raise ValueError(f"N must be positive, got {N}")
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    if digit_sum(N, p) < k:
        return None
    m = N
    for _ in range(k - 1):
        m -= p ** padic_valuation(m, p)
    return m


def acceptance_profile(d: Decomposition) -> AcceptanceProfile:
    """Acceptability of d at every prime <= its weight."""
    n = d.weight
    table = {}
    for p in primes_up_to(n):
        t = digit_sum_table(n, p)
        table[p] = sum(t[x] for x in d.parts) == t[n]
    return AcceptanceProfile(d, table)
