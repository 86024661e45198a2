import json
import random
from fractions import Fraction
from functools import reduce
from math import factorial, gcd

import pytest

from multinom.kummer import Decomposition
from multinom.num_core import digit_sum_table, largest_prime_power_leq, primes_up_to
from multinom.wasserman_search import (
    STATUS_EXCLUDED_DIGITSUM,
    STATUS_EXCLUDED_GAP,
    STATUS_SEARCHED_NONE,
    STATUS_UNRESOLVED,
    STATUS_WITNESS,
    CASE_LARGE_TAIL,
    CASE_UNIT_TAIL,
    ScanRecord,
    SearchLimitError,
    coverage,
    decompositions,
    digit_sum_survivors,
    exclusion_verdict,
    gap_candidates,
    gap_records,
    relevant_c_value,
    relevant_report,
    scan_range,
    search_counterexample,
    strengthening_checks,
    summand_bound_filters,
)

SURVIVORS_25 = [15, 21, 35, 39, 45, 51, 52, 55, 57, 63, 69, 70, 75, 76, 77, 78,
                85, 87, 88, 91, 92, 93, 95, 99, 100]
GAP_PAIRS_13 = [(199, 211), (211, 223), (293, 307), (317, 331), (467, 479),
                (529, 541), (661, 673), (773, 787), (797, 809), (841, 853),
                (863, 877), (887, 907), (997, 1009)]
CANDIDATES_16 = [305, 306, 329, 330, 785, 786, 875, 876,
                 899, 900, 901, 902, 903, 904, 905, 906]


def factorial_ch(parts):
    v = factorial(sum(parts))
    for x in parts:
        v //= factorial(x)
    return v


def test_decompositions_order_and_counts():
    assert [d.parts for d in decompositions(6, 3)] == [(4, 1, 1), (3, 2, 1), (2, 2, 2)]
    assert len(list(decompositions(7, 3))) == 4
    assert (144, 12, 3) in {d.parts for d in decompositions(159, 3)}
    assert list(decompositions(2, 3)) == []
    assert [d.parts for d in decompositions(5, 1)] == [(5,)]
    with pytest.raises(ValueError):
        list(decompositions(5, 0))


def test_decompositions_cover_all_multisets_once():
    for n, k in [(12, 2), (12, 3), (12, 4), (20, 3)]:
        seen = [d.parts for d in decompositions(n, k)]
        assert len(seen) == len(set(seen))
        assert all(sum(p) == n and len(p) == k and min(p) >= 1 for p in seen)
        assert seen == sorted(seen, reverse=True)


def test_digit_sum_survivors():
    assert digit_sum_survivors(100, 3) == SURVIVORS_25
    assert digit_sum_survivors(20, 3) == [15]
    assert digit_sum_survivors(4, 3) == []
    with pytest.raises(ValueError):
        digit_sum_survivors(10, 1)


def test_gap_records():
    got = [(g.lower.value, g.upper.value) for g in gap_records(1000, 12)]
    assert got == GAP_PAIRS_13
    assert gap_records(100, 12) == []
    only = gap_records(200, 12)
    assert [(g.lower.value, g.upper.value, g.length) for g in only] == [(199, 211, 12)]


def test_gap_candidates():
    assert gap_candidates(1009) == CANDIDATES_16
    assert gap_candidates(300) == []
    assert gap_candidates(331) == [305, 306, 329, 330]


def test_exclusion_verdict_examples():
    v = exclusion_verdict(306)
    assert v.status == STATUS_EXCLUDED_DIGITSUM and v.p == 17

    v = exclusion_verdict(100)  # a survivor, but 100 - 97 = 3 < 11
    assert v.status == STATUS_EXCLUDED_GAP

    assert exclusion_verdict(305).status == STATUS_UNRESOLVED
    with pytest.raises(ValueError):
        exclusion_verdict(2)


def test_exclusion_verdict_margin_eleven_stays_unresolved():
    # the gap bar is strictly "margin < 11", so weights sitting exactly 11
    # above a prime power fall through to the full search
    for n in (210, 222, 304, 328):
        assert n - largest_prime_power_leq(n).value == 11
        assert exclusion_verdict(n).status == STATUS_UNRESOLVED


def test_exclusion_verdict_other_k():
    assert exclusion_verdict(9, 2).status == STATUS_EXCLUDED_DIGITSUM  # 9 = 3^2
    assert exclusion_verdict(10, 2).status == STATUS_UNRESOLVED  # no gap filter for k != 3


def test_coverage_known_families():
    fam159 = [(157, 1, 1), (144, 12, 3), (53, 53, 53), (79, 79, 1)]
    rep = coverage(fam159, 159)
    assert rep.covered and rep.uncovered == frozenset()

    rep = coverage([(44, 2), (36, 10), (23, 23)], 46)
    assert rep.covered

    rep = coverage([(3, 2, 1), (2, 2, 2), (4, 1, 1)], 6)
    assert not rep.covered
    assert rep.uncovered >= {2, 3, 5}

    with pytest.raises(ValueError):
        coverage([(3, 2, 1), (4, 2, 1)], 6)


def test_coverage_agrees_with_gcd_oracle():
    rng = random.Random(1337)
    for _ in range(60):
        n = rng.randint(6, 60)
        fam = []
        for _m in range(rng.randint(1, 4)):
            k = rng.randint(2, 4)
            cuts = sorted(rng.sample(range(1, n), k - 1))
            parts = tuple(b - a for a, b in zip([0] + cuts, cuts + [n]))
            fam.append(parts)
        rep = coverage(fam, n)
        g = reduce(gcd, (factorial_ch(p) for p in fam))
        assert rep.covered == (g == 1)


def test_relevant_report_examples():
    rep = relevant_report(Decomposition((13, 1, 1)), Decomposition((5, 5, 5)))
    assert rep.relevant_primes == frozenset({2, 3, 7})
    assert rep.c_value.value == 5292  # 3^3 * 2^2 * 7^2
    assert rep.bound_36 == Fraction(729) * Fraction(11, 15)
    assert rep.exceeds_bound

    rep = relevant_report(Decomposition((5, 5, 5)), Decomposition((5, 5, 5)))
    assert rep.relevant_primes == frozenset({2, 3, 7, 13})
    assert rep.c_value.value == 5292 * 13

    with pytest.raises(ValueError):
        relevant_report(Decomposition((13, 1, 1)), Decomposition((5, 5, 4)))
    with pytest.raises(ValueError):
        relevant_report(Decomposition((13, 2)), Decomposition((5, 5, 5)))


def test_relevant_c_value_180m_plus_11_family():
    # weights 180M + 11 with the right digit conditions leave {2, 3, 5}
    # relevant and C = 2^2 * 3^2 * 5^2 = 900
    for n in (911, 2171):
        assert relevant_c_value(n, [2, 3, 5]).value == 900
    # even weight: both the factor of N-2 and the cube of the factor of N count
    assert relevant_c_value(16, [2]).value == 2 ** 13


def test_relative_primality_instance_check():
    # If the big-part decomposition (N-i-j, i, j) is acceptable at the base of
    # the largest prime power <= N, with gcd(i, j) = 1 and
    # gcd(N-i-j, i+j-1) = 1, then no prime dividing N(N-1) accepts it either
    # way -- so any prime left to that decomposition must divide N-2.
    for n in range(5, 201):
        q = largest_prime_power_leq(n)
        tmax = digit_sum_table(n, q.p)
        divisors = [p for p in primes_up_to(n) if (n * (n - 1)) % p == 0]
        tables = {p: digit_sum_table(n, p) for p in divisors}
        for i in range(1, n // 3 + 1):
            for j in range(i, (n - i + 1) // 2 + 1):
                big = n - i - j
                if big < j:
                    continue
                if tmax[big] + tmax[i] + tmax[j] != tmax[n]:
                    continue
                assert big >= q.value  # acceptability forces a part >= p_max^d
                if gcd(i, j) != 1 or gcd(big, i + j - 1) != 1:
                    continue
                for p in divisors:
                    t = tables[p]
                    assert t[big] + t[i] + t[j] != t[n], (n, i, j, p)


def test_search_counterexample_none_cases():
    assert search_counterexample(6) is None
    assert search_counterexample(78) is None
    assert search_counterexample(305) is None
    assert search_counterexample(2, 3) is None  # vacuous: no proper 3-part decompositions
    assert search_counterexample(46, 2) is None  # two proper binomials always share a divisor


def test_search_counterexample_k1_witness():
    w = search_counterexample(5, 1)
    assert [d.parts for d in w] == [(5,)]


def test_search_completeness_against_triple_brute_force():
    # independent oracle: try every multiset of <= 3 decompositions; the
    # branch-and-cover search must say None exactly when none of them covers
    from itertools import combinations_with_replacement

    from multinom.wasserman_search import _partition_tuples

    for n in range(3, 27):
        ps = primes_up_to(n)
        full = (1 << len(ps)) - 1
        masks = []
        tables = [digit_sum_table(n, p) for p in ps]
        for parts in _partition_tuples(n, 3):
            m = 0
            for pi, t in enumerate(tables):
                if t[parts[0]] + t[parts[1]] + t[parts[2]] == t[n]:
                    m |= 1 << pi
            masks.append(m)
        brute = any(
            a | b | c == full for a, b, c in combinations_with_replacement(masks, 3)
        )
        assert brute == (search_counterexample(n, 3) is not None)
        assert not brute  # no covering triple exists at these weights


def test_search_node_limit():
    with pytest.raises(SearchLimitError):
        search_counterexample(305, 3, node_limit=2)


def test_scan_statuses_to_100():
    rep = scan_range(3, 100)
    assert not rep.witnesses and not rep.inconclusive
    by_status = {}
    for r in rep.records:
        by_status.setdefault(r.status, []).append(r.n)
    # the 25 survivors all sit within 10 of a prime power, so they gap out
    assert by_status[STATUS_EXCLUDED_GAP] == SURVIVORS_25
    assert len(by_status[STATUS_EXCLUDED_DIGITSUM]) == 73  # 75 of 1..100 minus n = 1, 2
    assert STATUS_SEARCHED_NONE not in by_status


def test_scan_unfiltered_soundness_to_120():
    # no weight the filters exclude hides a witness: the unfiltered search
    # agrees there are none at all
    unfiltered = scan_range(3, 120, use_filters=False)
    assert not unfiltered.witnesses
    assert all(r.status == STATUS_SEARCHED_NONE for r in unfiltered.records)


def test_scan_k1_witness_record():
    rep = scan_range(5, 5, k=1)
    (rec,) = rep.records
    assert rec.status == STATUS_WITNESS and rec.witness == ((5,),)


def test_scan_inconclusive_on_node_limit():
    rep = scan_range(305, 305, node_limit=2)
    assert rep.inconclusive == [305]
    assert rep.records == []


def test_scan_worker_determinism():
    one = scan_range(3, 140, jobs=1)
    two = scan_range(3, 140, jobs=2)
    assert one.records == two.records
    assert json.dumps(one.to_payload()) == json.dumps(two.to_payload())


def test_scan_checkpoint_resume(tmp_path):
    ckpt = tmp_path / "scan.jsonl"
    base = scan_range(3, 80)

    class Stop(Exception):
        pass

    seen = 0

    def interrupt(_rec):
        nonlocal seen
        seen += 1
        if seen >= 25:
            raise Stop

    with pytest.raises(Stop):
        scan_range(3, 80, checkpoint_path=str(ckpt), on_record=interrupt)
    partial = [json.loads(line) for line in ckpt.read_text().splitlines()]
    assert 25 <= len(partial) < 78
    assert not (tmp_path / "scan.jsonl.tmp").exists()  # writes go temp-then-rename

    resumed = scan_range(3, 80, checkpoint_path=str(ckpt))
    assert resumed.records == base.records
    again = scan_range(3, 80, checkpoint_path=str(ckpt))
    assert again.records == base.records


def test_scan_checkpoint_last_write_wins(tmp_path):
    ckpt = tmp_path / "scan.jsonl"
    ckpt.write_text(
        '{"n": 10, "status": "searched-none"}\n'
        '{"n": 10, "status": "excluded-digitsum", "p": 7}\n'
    )
    rep = scan_range(10, 10, checkpoint_path=str(ckpt))
    assert rep.records == [ScanRecord(10, STATUS_EXCLUDED_DIGITSUM, p=7)]


def test_scan_checkpoint_witness_roundtrip(tmp_path):
    ckpt = tmp_path / "scan.jsonl"
    rep = scan_range(5, 5, k=1, checkpoint_path=str(ckpt))
    line = json.loads(ckpt.read_text().splitlines()[0])
    assert line == {"n": 5, "status": "witness", "witness": [[5]]}
    resumed = scan_range(5, 5, k=1, checkpoint_path=str(ckpt))
    assert resumed.records == rep.records


def test_scan_validation():
    with pytest.raises(ValueError):
        scan_range(10, 3)


def test_strengthening_checks():
    rep = strengthening_checks()
    assert rep.ok
    assert rep.quad_trinomials_159.gcd_value == 1
    assert len(rep.quad_trinomials_159.members) == 4
    assert rep.binomials_46.gcd_value == 1
    assert rep.binomials_46.min_part == 2
    assert rep.mixed_nomiality_65.gcd_value == 1
    assert rep.mixed_nomiality_65.reciprocal_sum == Fraction(9, 10)


def test_summand_bound_filters():
    assert not summand_bound_filters(Decomposition((500, 300, 215)), case=CASE_UNIT_TAIL)
    assert summand_bound_filters(Decomposition((216, 400, 384)), case=CASE_UNIT_TAIL)
    d = Decomposition((96, 2, 2))  # weight 100: 2 * 5292 >= 108 * 96
    assert summand_bound_filters(d, c_value=5292, case=CASE_LARGE_TAIL)
    assert not summand_bound_filters(d, c_value=40, case=CASE_LARGE_TAIL)
    with pytest.raises(ValueError):
        summand_bound_filters(Decomposition((4, 4)), case=CASE_UNIT_TAIL)
    with pytest.raises(ValueError):
        summand_bound_filters(Decomposition((4, 4, 4)), case="bogus")
    with pytest.raises(ValueError):
        summand_bound_filters(Decomposition((4, 4, 4)), case=CASE_LARGE_TAIL)
