"""Exact integer groundwork: primes, prime powers, base-p digits, factorizations.

Everything here is deterministic and pure.  Inputs are expected to stay in
machine-word range (the interesting weights are a few thousand at most);
only downstream multinomial values need arbitrary precision, and those are
reconstructed from factored form elsewhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache


def is_prime(n: int) -> bool:
    """Deterministic primality by trial division (fine for word-sized n)."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@lru_cache(maxsize=64)
def primes_up_to(limit: int) -> tuple[int, ...]:
    """All primes <= limit, ascending, by a plain sieve of Eratosthenes."""
    if limit < 2:
        return ()
    sieve = bytearray([1]) * (limit + 1)
    sieve[0] = sieve[1] = 0
    p = 2
    while p * p <= limit:
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
        p += 1
    return tuple(i for i in range(2, limit + 1) if sieve[i])


@dataclass(frozen=True)
class PrimePower:
    """A value p**e with p prime and e >= 1."""

    p: int
    e: int

    def __post_init__(self) -> None:
        if self.e < 1:
            raise ValueError(f"exponent must be >= 1, got {self.e}")
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @property
    def value(self) -> int:
        return self.p ** self.e

    def __str__(self) -> str:
        return f"{self.p}^{self.e}" if self.e > 1 else str(self.p)


@dataclass(frozen=True)
class FactoredInteger:
    """A positive integer as an ordered product of prime powers.

    Primes strictly increase along ``factors``; the empty product is 1.
    """

    factors: tuple[PrimePower, ...] = ()

    def __post_init__(self) -> None:
        ps = [f.p for f in self.factors]
        if any(a >= b for a, b in zip(ps, ps[1:])):
            raise ValueError(f"primes must strictly increase, got {ps}")

    @classmethod
    def from_exponents(cls, exponents: dict[int, int]) -> "FactoredInteger":
        """Build from a prime -> exponent map; zero exponents are dropped."""
        fs = tuple(PrimePower(p, e) for p, e in sorted(exponents.items()) if e)
        return cls(fs)

    @property
    def value(self) -> int:
        v = 1
        for f in self.factors:
            v *= f.value
        return v

    def exponent(self, p: int) -> int:
        for f in self.factors:
            if f.p == p:
                return f.e
        return 0

    def __int__(self) -> int:
        return self.value

    def __str__(self) -> str:
        return " * ".join(str(f) for f in self.factors) if self.factors else "1"


def digits_base_p(n: int, p: int) -> list[int]:
    """Base-p digits of n, least significant first, no trailing zeros.

    n = sum(d * p**i for i, d in enumerate(digits)); n = 0 gives [].
    """
    if not is_prime(p):
        raise ValueError(f"base {p} is not prime")
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    out = []
    while n:
        n, r = divmod(n, p)
        out.append(r)
    return out


def digit_sum(n: int, p: int) -> int:
    """Sum of the base-p digits of n (p prime, n >= 0)."""
    if not is_prime(p):
        raise ValueError(f"base {p} is not prime")
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    s = 0
    while n:
        n, r = divmod(n, p)
        s += r
    return s


def digit_sum_table(limit: int, p: int) -> list[int]:
    """table[m] = base-p digit sum of m, for 0 <= m <= limit.

    O(limit) via table[m] = table[m // p] + m % p; the workhorse behind the
    bulk acceptability scans.
    """
    t = [0] * (limit + 1)
    for m in range(1, limit + 1):
        t[m] = t[m // p] + m % p
    return t


def padic_valuation(n: int, p: int) -> int:
    """Exponent of p in n (n >= 1)."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def prime_powers_up_to(limit: int) -> list[PrimePower]:
    """All prime powers p**e <= limit, sorted by value; empty for limit < 2."""
    out = []
    for p in primes_up_to(limit):
        v, e = p, 1
        while v <= limit:
            out.append(PrimePower(p, e))
            v *= p
            e += 1
    out.sort(key=lambda q: q.value)
    return out


def as_prime_power(n: int) -> PrimePower | None:
    """PrimePower form of n if n is one, else None."""
    if n < 2:
        return None
    p = n
    f = 2
    while f * f <= n:
        if n % f == 0:
            p = f
            break
        f += 1 if f == 2 else 2
    m, e = n, 0
    while m % p == 0:
        m //= p
        e += 1
    return PrimePower(p, e) if m == 1 else None


def largest_prime_power_leq(n: int) -> PrimePower:
    """The largest prime power <= n (n >= 2)."""
    if n < 2:
        raise ValueError(f"no prime power <= {n}")
    m = n
    while True:
        q = as_prime_power(m)
        if q is not None:
            return q
        m -= 1


def prime_power_factors(n: int) -> FactoredInteger:
    """Factor n >= 1 into powers of distinct primes (trial division)."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    exps: dict[int, int] = {}
    f = 2
    while f * f <= n:
        while n % f == 0:
            exps[f] = exps.get(f, 0) + 1
            n //= f
        f += 1
    if n > 1:
        exps[n] = exps.get(n, 0) + 1
    return FactoredInteger.from_exponents(exps)
