"""Exhaustive counterexample scan for Wasserman's conjecture (k of k, gcd > 1).

A counterexample of weight N for a given k is a family of k proper k-part
decompositions of N such that every prime p has at least one p-acceptable
member: equivalently, the gcd of the k multinomial coefficients is 1.  Since
only primes <= N can divide any of them, "coverage" of the primes <= N is the
whole story.

Two cheap structural filters close most weights before any search runs:

  * digit-sum: if N has base-p digit sum < k for some prime p, no k-part
    decomposition is p-acceptable at all;
  * gap bound (k = 3 only): a counterexample needs a decomposition with a
    part >= the largest prime power q <= N, written N = (N-i-j) + i + j with
    N-i-j >= q.  The i=j=1 route forces N >= 1726 (N >= 6910 when N is even,
    and N-1 must have at least 3 distinct prime factors), and 2 < i+j < 11
    is impossible; so when the i=j=1 route is barred and N - q < 11, the
    weight is excluded.

Whatever survives is settled by an exact depth-k set-cover search: branch on
the prime with the fewest acceptable decompositions, recurse on the primes
still uncovered.  Near a large prime power the branch factor is tiny, which
is what makes the scan fast.  scan_range drives the whole pipeline over a
range of weights, optionally in parallel and with an atomic, resumable
checkpoint; its output is deterministic regardless of worker count.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd

from .kummer import Decomposition, ch_value
from .num_core import (
    FactoredInteger,
    PrimePower,
    digit_sum,
    digit_sum_table,
    largest_prime_power_leq,
    padic_valuation,
    prime_power_factors,
    prime_powers_up_to,
    primes_up_to,
)

STATUS_EXCLUDED_DIGITSUM = "excluded-digitsum"
STATUS_EXCLUDED_GAP = "excluded-gap"
STATUS_UNRESOLVED = "unresolved"
STATUS_SEARCHED_NONE = "searched-none"
STATUS_WITNESS = "witness"
STATUS_INCONCLUSIVE = "inconclusive"

CASE_UNIT_TAIL = "i=j=1"
CASE_LARGE_TAIL = "i+j>2"


class SearchLimitError(RuntimeError):
    """The branch-node budget ran out before the search was exhausted."""


@dataclass(frozen=True)
class FilterVerdict:
    """Outcome of the structural filters for one weight."""

    n: int
    status: str
    p: int | None = None
    detail: str = ""


@dataclass(frozen=True)
class GapRecord:
    """A pair of consecutive prime powers at least min_length apart."""

    lower: PrimePower
    upper: PrimePower

    @property
    def length(self) -> int:
        return self.upper.value - self.lower.value


@dataclass(frozen=True)
class CoverageReport:
    """Which primes <= n a family of decompositions leaves uncovered."""

    n: int
    decompositions: tuple[Decomposition, ...]
    uncovered: frozenset[int]
    covered: bool


@dataclass(frozen=True)
class RelevantPrimeReport:
    """Relevant primes of a pair of 3-part decompositions, and the C invariant.

    A prime is relevant when it divides N(N-1)(N-2) but neither decomposition
    is p-acceptable.  C multiplies, over the relevant primes, the prime-power
    factor of N-2, the square of the one of N-1, and the cube of the one of N
    (for even N and relevant 2, both the N-2 and the N contributions appear).
    C always exceeds 3^6 (1 - 4/N), and 3^3 2^6 (1 - 4/N) when 2 is not
    relevant.
    """

    a: Decomposition
    b: Decomposition
    relevant_primes: frozenset[int]
    c_value: FactoredInteger
    bound_36: Fraction
    bound_3326: Fraction
    exceeds_bound: bool


@dataclass(frozen=True)
class ScanRecord:
    """Final status of one scanned weight (also the checkpoint line format)."""

    n: int
    status: str
    p: int | None = None
    witness: tuple[tuple[int, ...], ...] | None = None

    def to_json_dict(self) -> dict:
        d: dict = {"n": self.n, "status": self.status}
        if self.p is not None:
            d["p"] = self.p
        if self.witness is not None:
            d["witness"] = [list(parts) for parts in self.witness]
        return d

    @classmethod
    def from_json_dict(cls, d: dict) -> "ScanRecord":
        witness = d.get("witness")
        return cls(
            n=d["n"],
            status=d["status"],
            p=d.get("p"),
            witness=None if witness is None else tuple(tuple(w) for w in witness),
        )


@dataclass
class ScanReport:
    """All records of a scan, ascending in n, plus any inconclusive weights."""

    n_lo: int
    n_hi: int
    k: int
    use_filters: bool
    records: list[ScanRecord] = field(default_factory=list)
    inconclusive: list[int] = field(default_factory=list)

    @property
    def witnesses(self) -> list[ScanRecord]:
        return [r for r in self.records if r.status == STATUS_WITNESS]

    def to_payload(self) -> dict:
        witnesses = []
        for r in self.witnesses:
            entry = r.to_json_dict()
            entry["acceptability"] = {
                str(p): flags for p, flags in witness_acceptability(r.n, r.witness).items()
            }
            witnesses.append(entry)
        return {
            "range": [self.n_lo, self.n_hi],
            "k": self.k,
            "filters": self.use_filters,
            "witnesses": witnesses,
            "inconclusive": list(self.inconclusive),
            "verdicts": [r.to_json_dict() for r in self.records],
        }


def _partition_tuples(n: int, k: int, cap: int | None = None):
    """Partitions of n into exactly k positive parts, as nonincreasing tuples,
    in descending lexicographic order."""
    if cap is None:
        cap = n - k + 1
    if k < 1 or n < k:
        return
    if k == 1:
        if n <= cap:
            yield (n,)
        return
    lo = -(-n // k)  # ceil(n / k)
    for first in range(min(cap, n - k + 1), lo - 1, -1):
        for rest in _partition_tuples(n - first, k - 1, first):
            yield (first,) + rest


def decompositions(N: int, k: int):
    """Every multiset of k positive integers summing to N, exactly once,
    in descending lexicographic order of the nonincreasing part vectors.
    Empty for N < k."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    for parts in _partition_tuples(N, k):
        yield Decomposition(parts)


def digit_sum_survivors(limit: int, k: int = 3) -> list[int]:
    """Weights n <= limit whose base-p digit sum is >= k for every prime p.

    These are exactly the n not expressible with fewer than k nonzero prime-
    base digits, i.e. the weights the digit-sum filter cannot exclude.  (For
    p > n the digit sum is n itself, so n < k never survives.)
    """
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    out = []
    for n in range(k, limit + 1):
        if all(digit_sum(n, p) >= k for p in primes_up_to(n)):
            out.append(n)
    return out


def gap_records(limit: int, min_length: int = 12) -> list[GapRecord]:
    """Consecutive prime-power pairs (q1, q2) with q1 < limit and
    q2 - q1 >= min_length."""
    if limit < 3:
        return []
    # Bertrand guarantees the successor of any q1 < limit shows up by 2*limit.
    pps = prime_powers_up_to(2 * limit)
    out = []
    for lower, upper in zip(pps, pps[1:]):
        if lower.value >= limit:
            break
        if upper.value - lower.value >= min_length:
            out.append(GapRecord(lower, upper))
    return out


def gap_candidates(limit: int) -> list[int]:
    """Weights n < limit exceeding the largest prime power <= n by >= 12.

    Everything else below 1726 is closed by the structural filters plus the
    relative-primality argument for n = q + 11; below 1009 there are exactly
    sixteen such weights.
    """
    if limit < 3:
        return []
    pps = prime_powers_up_to(2 * limit)
    out = []
    for lower, upper in zip(pps, pps[1:]):
        if lower.value >= limit:
            break
        lo = lower.value + 12
        hi = min(upper.value - 1, limit - 1)
        out.extend(range(lo, hi + 1))
    return out


def exclusion_verdict(n: int, k: int = 3) -> FilterVerdict:
    """Structural filter verdict for weight n.

    Digit-sum exclusion applies for any k and reports the smallest witnessing
    prime.  The gap-bound exclusion encodes theorems specific to k = 3 and is
    skipped for other k.
    """
    if n < 3:
        raise ValueError(f"n must be >= 3, got {n}")
    for p in primes_up_to(n):
        s = digit_sum(n, p)
        if s < k:
            return FilterVerdict(
                n, STATUS_EXCLUDED_DIGITSUM, p=p, detail=f"base-{p} digit sum {s} < {k}"
            )
    if k == 3:
        unit_tail_barred = (
            n < 1726
            or (n % 2 == 0 and n < 6910)
            or len(prime_power_factors(n - 1).factors) < 3
        )
        q = largest_prime_power_leq(n)
        margin = n - q.value
        if unit_tail_barred and margin < 11:
            return FilterVerdict(
                n,
                STATUS_EXCLUDED_GAP,
                detail=(
                    f"margin over largest prime power {q} is {margin} < 11 "
                    f"and the (N-2)+1+1 route is barred"
                ),
            )
    return FilterVerdict(n, STATUS_UNRESOLVED, detail="no structural exclusion applies")


def coverage(decomps, n: int) -> CoverageReport:
    """Which primes <= n have no acceptable member among the given family.

    covered is equivalent to the gcd of the exact multinomial values being 1;
    both are computed and cross-asserted.
    """
    decomps = tuple(d if isinstance(d, Decomposition) else Decomposition(tuple(d)) for d in decomps)
    if not decomps:
        raise ValueError("need at least one decomposition")
    for d in decomps:
        if d.weight != n:
            raise ValueError(f"decomposition {d} has weight {d.weight}, not {n}")
    uncovered = set()
    for p in primes_up_to(n):
        t = digit_sum_table(n, p)
        if not any(sum(t[x] for x in d.parts) == t[n] for d in decomps):
            uncovered.add(p)
    covered = not uncovered
    g = reduce(gcd, (ch_value(d.parts)[1] for d in decomps))
    assert covered == (g == 1), "coverage and gcd criteria must agree"
    return CoverageReport(n, decomps, frozenset(uncovered), covered)


def relevant_c_value(n: int, relevant_primes) -> FactoredInteger:
    """The C invariant for a given relevant-prime set at weight n:
    prime-power factor of n-2, squared for n-1, cubed for n."""
    exps = {}
    for p in relevant_primes:
        e = (
            padic_valuation(n - 2, p)
            + 2 * padic_valuation(n - 1, p)
            + 3 * padic_valuation(n, p)
        )
        if e:
            exps[p] = e
    return FactoredInteger.from_exponents(exps)


def relevant_report(a: Decomposition, b: Decomposition) -> RelevantPrimeReport:
    """Relevant primes and C invariant of a pair of 3-part decompositions."""
    if a.nomiality != 3 or b.nomiality != 3:
        raise ValueError("both decompositions must have exactly 3 parts")
    n = a.weight
    if b.weight != n:
        raise ValueError(f"weights differ: {a.weight} vs {b.weight}")
    if n < 12:
        raise ValueError(f"weight must be >= 12, got {n}")
    product = n * (n - 1) * (n - 2)
    relevant = set()
    for p in primes_up_to(n):
        if product % p:
            continue
        t = digit_sum_table(n, p)
        if sum(t[x] for x in a.parts) == t[n]:
            continue
        if sum(t[x] for x in b.parts) == t[n]:
            continue
        relevant.add(p)
    c = relevant_c_value(n, relevant)
    bound_36 = Fraction(3 ** 6) * (1 - Fraction(4, n))
    bound_3326 = Fraction(3 ** 3 * 2 ** 6) * (1 - Fraction(4, n))
    applicable = bound_36 if 2 in relevant else bound_3326
    return RelevantPrimeReport(
        a=a,
        b=b,
        relevant_primes=frozenset(relevant),
        c_value=c,
        bound_36=bound_36,
        bound_3326=bound_3326,
        exceeds_bound=c.value > applicable,
    )


def search_counterexample(n: int, k: int = 3, node_limit: int | None = None):
    """Exact search for k proper k-part decompositions of n covering all primes.

    Returns the witness family (list of k Decompositions) or None when the
    exhaustive search proves none exists.  The search is complete: it branches
    on the uncovered prime with the fewest acceptable decompositions (ties to
    the smaller prime) and recurses with one fewer pick.  If node_limit
    branches are exceeded, SearchLimitError is raised; None is never returned
    early.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if n < k:
        return None
    decs = list(_partition_tuples(n, k))
    ps = primes_up_to(n)
    acceptable: list[list[int]] = []
    cover = [0] * len(decs)
    for pi, p in enumerate(ps):
        t = digit_sum_table(n, p)
        target = t[n]
        found = []
        for di, parts in enumerate(decs):
            s = 0
            for x in parts:
                s += t[x]
            if s == target:
                found.append(di)
                cover[di] |= 1 << pi
        if not found:
            return None  # no decomposition is p-acceptable: n cannot be covered
        acceptable.append(found)

    nodes = 0

    def most_constrained(uncovered: int) -> int:
        best_pi, best_len = -1, None
        m = uncovered
        while m:
            pi = (m & -m).bit_length() - 1
            if best_len is None or len(acceptable[pi]) < best_len:
                best_pi, best_len = pi, len(acceptable[pi])
            m &= m - 1
        return best_pi

    def extend(uncovered: int, chosen: list[int], picks_left: int):
        nonlocal nodes
        if uncovered == 0:
            return chosen
        if picks_left == 0:
            return None
        pi = most_constrained(uncovered)
        for di in acceptable[pi]:
            nodes += 1
            if node_limit is not None and nodes > node_limit:
                raise SearchLimitError(
                    f"search for n={n}, k={k} exceeded the node budget {node_limit}"
                )
            hit = extend(uncovered & ~cover[di], chosen + [di], picks_left - 1)
            if hit is not None:
                return hit
        return None

    solution = extend((1 << len(ps)) - 1, [], k)
    if solution is None:
        return None
    while len(solution) < k:  # cover completed early: pad the family out to k
        solution.append(solution[-1] if solution else 0)
    witness = [Decomposition(decs[di]) for di in solution]
    assert coverage(witness, n).covered
    return witness


def witness_acceptability(n: int, witness) -> dict[int, list[bool]]:
    """Per-prime acceptability of each member of a witness family, so an
    emitted witness can be audited independently: every prime <= n must have
    at least one True."""
    families = [tuple(parts) for parts in witness]
    out = {}
    for p in primes_up_to(n):
        t = digit_sum_table(n, p)
        out[p] = [sum(t[x] for x in parts) == t[n] for parts in families]
    return out


def _scan_one(n: int, k: int, use_filters: bool, node_limit: int | None) -> ScanRecord:
    if use_filters and n >= 3:
        verdict = exclusion_verdict(n, k)
        if verdict.status == STATUS_EXCLUDED_DIGITSUM:
            return ScanRecord(n, STATUS_EXCLUDED_DIGITSUM, p=verdict.p)
        if verdict.status == STATUS_EXCLUDED_GAP:
            return ScanRecord(n, STATUS_EXCLUDED_GAP)
    try:
        witness = search_counterexample(n, k, node_limit)
    except SearchLimitError:
        return ScanRecord(n, STATUS_INCONCLUSIVE)
    if witness is None:
        return ScanRecord(n, STATUS_SEARCHED_NONE)
    return ScanRecord(n, STATUS_WITNESS, witness=tuple(d.parts for d in witness))


def _scan_chunk(args) -> list[ScanRecord]:
    ns, k, use_filters, node_limit = args
    return [_scan_one(n, k, use_filters, node_limit) for n in ns]


def _load_checkpoint(path: str) -> tuple[dict[int, ScanRecord], list[str]]:
    """Read a newline-delimited checkpoint; on duplicate n the last line wins."""
    records: dict[int, ScanRecord] = {}
    lines: list[str] = []
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line:
                continue
            records_dict = json.loads(line)
            rec = ScanRecord.from_json_dict(records_dict)
            records[rec.n] = rec
            lines.append(line)
    return records, lines


def _write_checkpoint(path: str, lines: list[str]) -> None:
    """Atomically replace the checkpoint file (write to temp, then rename)."""
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        for line in lines:
            fh.write(line + "\n")
    os.replace(tmp, path)


def scan_range(
    n_lo: int,
    n_hi: int,
    k: int = 3,
    use_filters: bool = True,
    jobs: int = 1,
    checkpoint_path: str | None = None,
    node_limit: int | None = None,
    on_record=None,
) -> ScanReport:
    """Filter and, where needed, exhaustively search every weight in [n_lo, n_hi].

    Records come back in ascending n, identically regardless of the worker
    count.  With a checkpoint path, each completed weight is persisted
    (atomically) as it finishes and already-recorded weights are skipped on
    resume, so an interrupted scan replays to the same report.  Weights whose
    search hits node_limit are listed as inconclusive and are not written to
    the checkpoint.  on_record, when given, is called with each newly
    computed (non-inconclusive) record in ascending order.
    """
    if n_lo > n_hi:
        raise ValueError(f"empty range [{n_lo}, {n_hi}]")
    done: dict[int, ScanRecord] = {}
    lines: list[str] = []
    if checkpoint_path and os.path.exists(checkpoint_path):
        done, lines = _load_checkpoint(checkpoint_path)

    todo = [n for n in range(n_lo, n_hi + 1) if n not in done]
    computed: dict[int, ScanRecord] = {}
    inconclusive: list[int] = []

    def take(rec: ScanRecord) -> None:
        if rec.status == STATUS_INCONCLUSIVE:
            inconclusive.append(rec.n)
            return
        computed[rec.n] = rec
        if checkpoint_path:
            lines.append(json.dumps(rec.to_json_dict(), sort_keys=True))
            _write_checkpoint(checkpoint_path, lines)
        if on_record is not None:
            on_record(rec)

    if jobs <= 1 or len(todo) <= 1:
        for n in todo:
            take(_scan_one(n, k, use_filters, node_limit))
    else:
        jobs = min(jobs, len(todo))
        chunk_size = -(-len(todo) // jobs)
        chunks = [todo[i : i + chunk_size] for i in range(0, len(todo), chunk_size)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for chunk_records in pool.map(
                _scan_chunk, [(c, k, use_filters, node_limit) for c in chunks]
            ):
                for rec in chunk_records:
                    take(rec)

    records = [
        done[n] if n in done else computed[n]
        for n in range(n_lo, n_hi + 1)
        if n in done or n in computed
    ]
    return ScanReport(n_lo, n_hi, k, use_filters, records, sorted(inconclusive))


FAMILY_159 = ((157, 1, 1), (144, 12, 3), (53, 53, 53), (79, 79, 1))
FAMILY_46 = ((44, 2), (36, 10), (23, 23))
FAMILY_65 = ((64, 1), (25, 25, 5, 5, 5), (13, 13, 13, 13, 13))


@dataclass(frozen=True)
class FamilyCheck:
    """One known family: its gcd, reciprocal-nomiality sum, and verdict."""

    weight: int
    members: tuple[Decomposition, ...]
    gcd_value: int
    reciprocal_sum: Fraction
    min_part: int
    ok: bool


@dataclass(frozen=True)
class StrengtheningReport:
    """The three families refuting natural strengthenings of the conjecture."""

    quad_trinomials_159: FamilyCheck
    binomials_46: FamilyCheck
    mixed_nomiality_65: FamilyCheck

    @property
    def ok(self) -> bool:
        return (
            self.quad_trinomials_159.ok
            and self.binomials_46.ok
            and self.mixed_nomiality_65.ok
        )


def _family_check(parts_lists, extra_ok) -> FamilyCheck:
    members = tuple(Decomposition(p) for p in parts_lists)
    weight = members[0].weight
    assert all(d.weight == weight for d in members)
    g = reduce(gcd, (ch_value(d.parts)[1] for d in members))
    rsum = sum((Fraction(1, d.nomiality) for d in members), Fraction(0))
    min_part = min(min(d.parts) for d in members)
    ok = g == 1 and extra_ok(members, rsum, min_part)
    return FamilyCheck(weight, members, g, rsum, min_part, ok)


def strengthening_checks() -> StrengtheningReport:
    """Verify the three coprime families of weights 159, 46, and 65.

    Four trinomials of weight 159 with gcd 1 (so four trinomials need not
    share a divisor); three binomials of weight 46, all parts > 1, with gcd 1;
    and a mixed family of weight 65 whose reciprocal nomialities sum to
    9/10 < 1, also with gcd 1.
    """
    return StrengtheningReport(
        quad_trinomials_159=_family_check(
            FAMILY_159,
            lambda ms, rsum, mn: len(ms) == 4 and all(d.nomiality == 3 for d in ms),
        ),
        binomials_46=_family_check(
            FAMILY_46,
            lambda ms, rsum, mn: mn > 1 and all(d.nomiality == 2 for d in ms),
        ),
        mixed_nomiality_65=_family_check(
            FAMILY_65, lambda ms, rsum, mn: rsum == Fraction(9, 10)
        ),
    )


def summand_bound_filters(d: Decomposition, c_value=None, case: str = CASE_UNIT_TAIL) -> bool:
    """Optional pruning predicates on the summands of a 3-part decomposition.

    In the i=j=1 case every part must be >= 216; in the i+j>2 case every
    part times C must be >= 108(N-4).  Pruning accelerators only: these
    thresholds come from a companion analysis and are never the sole grounds
    for excluding a weight here.
    """
    if d.nomiality != 3:
        raise ValueError("the summand bounds apply to 3-part decompositions")
    if case == CASE_UNIT_TAIL:
        return all(x >= 216 for x in d.parts)
    if case == CASE_LARGE_TAIL:
        if c_value is None:
            raise ValueError(f"case {case!r} needs the C invariant")
        c = int(c_value)
        return all(x * c >= 108 * (d.weight - 4) for x in d.parts)
    raise ValueError(f"unknown case {case!r}")
