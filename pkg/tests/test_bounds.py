import io
import math
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from zvseq.bounds import (
    BOUND_REPORT_COLUMNS,
    BoundInterval,
    best_run_bounds,
    bound_report_rows,
    combine,
    elgamal_tuple_bounds,
    mu_bounds,
    run_bounds_difference,
    run_bounds_invertible,
    run_bounds_sum,
    successor_set,
    tuple_count_split,
    tuple_coverage_check,
    write_bound_report,
)
from zvseq.errors import InvariantViolation, ParameterError
from zvseq.modarith import primes_in_range, primitive_roots
from zvseq.seqgen import ElGamalParams, elgamal_sequence
from zvseq.stats import run_counts, run_prefix_counts, tuple_counts

SMALL_GRID = [
    (p, g, v)
    for p in primes_in_range(5, 400)
    for g in primitive_roots(p, 3)
    for v in range(2, 6)
    if v < p - 1
]


def test_tuple_bounds_examples(elgamal_13_2_2):
    b = elgamal_tuple_bounds(13, 2, 2, 2)
    assert (b.lower, b.upper, b.source, b.aux) == (3, 4, "tuple_thm", {"q": 6, "r": 1})
    assert set(tuple_counts(elgamal_13_2_2, 2).counts.values()) == {3}
    b = elgamal_tuple_bounds(13, 2, 2, 1)
    assert (b.lower, b.upper, b.source) == (6, 6, "exact_balance")


def test_tuple_bounds_at_large_prime_and_generator():
    # 1759 = 48 * 36 + 31, floor(48/2) = 24
    b = elgamal_tuple_bounds(1759, 6, 2, 3)
    assert (b.lower, b.upper, b.aux) == (216, 225, {"q": 48, "r": 31})
    ts = tuple_counts(elgamal_sequence(ElGamalParams(1759, 6, 2)), 3)
    assert b.lower <= ts.min_count and ts.max_count <= b.upper


def test_tuple_bounds_vacuous_when_q_is_zero():
    b = elgamal_tuple_bounds(13, 7, 2, 3)
    assert b.lower == 0 and b.vacuous and b.aux["q"] == 0


def test_bound_interval_rejects_malformed():
    with pytest.raises(InvariantViolation):
        BoundInterval(3, 2, "tuple_thm")
    with pytest.raises(InvariantViolation):
        BoundInterval(-1, 2, "tuple_thm")


@pytest.mark.parametrize("p, v, t, expected", [(13, 2, 2, (4, 0, 3, 4)), (11, 2, 2, (2, 2, 2, 3))])
def test_tuple_count_split_examples(p, v, t, expected):
    s = tuple_count_split(p, v, t)
    assert (s.n_lower, s.n_upper, s.lower_value, s.upper_value) == expected
    assert s.p_is_one_mod_vt == (p % v**t == 1)
    dense = tuple_counts(elgamal_sequence(ElGamalParams(p, v, v)), t).dense().tolist()
    assert dense.count(s.lower_value) == s.n_lower and dense.count(s.upper_value) == s.n_upper


def test_tuple_count_split_needs_v_primitive():
    with pytest.raises(ParameterError):
        tuple_count_split(7, 2, 2)  # 2 has order 3 mod 7


def test_mu_bounds_examples(elgamal_13_2_2):
    b = mu_bounds(13, 2, 2, 3)
    assert (b.lower, b.upper) == (1, 2)
    for z in product(range(2), repeat=3):
        assert run_prefix_counts(elgamal_13_2_2, z) in b
    assert mu_bounds(13, 2, 2, 2).aux["q"] == 6
    with pytest.raises(ParameterError):
        mu_bounds(13, 2, 2, 1)


def test_mu_bounds_bracket_direct_counts_at_1097():
    seq = elgamal_sequence(ElGamalParams(1097, 3, 2))
    b = mu_bounds(1097, 3, 2, 3)
    assert all(run_prefix_counts(seq, z) in b for z in product(range(2), repeat=3))


def test_run_bounds_sum_example(elgamal_13_2_2):
    b = run_bounds_sum(13, 2, 2, 1)
    assert (b.lower, b.upper) == (1, 2)
    runs = run_counts(elgamal_13_2_2)
    assert runs.rho(0, 1) == runs.rho(1, 1) == 1


def test_run_bounds_invertible_examples():
    b = run_bounds_invertible(13, 7, 2, 1)
    assert b.lower == 0 and b.vacuous and b.aux["q"] == 0
    with pytest.raises(ParameterError):
        run_bounds_invertible(13, 2, 2, 1)
    runs = run_counts(elgamal_sequence(ElGamalParams(1097, 3, 2)))
    b = run_bounds_invertible(1097, 3, 2, 2)
    assert runs.rho(0, 2) in b and runs.rho(1, 2) in b


def test_run_bounds_difference_clamps_and_keeps_raw():
    b = run_bounds_difference(5, 3, 2, 1)
    assert b.raw_lower == -4 and b.lower == 0 and b.vacuous


def test_difference_versus_sum_at_1759():
    for g in primitive_roots(1759, 1759):
        d, s = run_bounds_difference(1759, g, 2, 3), run_bounds_sum(1759, g, 2, 3)
        assert (d.lower > s.lower) == (g == 6), g
    assert run_bounds_difference(1759, 6, 2, 3).lower == 27
    assert best_run_bounds(1759, 6, 2, 3).source_lower == ("runs_diff",)


def test_difference_versus_sum_at_1097():
    uppers = {g: (run_bounds_sum(1097, g, 2, 3).upper, run_bounds_difference(1097, g, 2, 3).upper) for g in (3, 5, 6)}
    assert uppers == {3: (112, 162), 5: (81, 135), 6: (81, 81)}
    best = best_run_bounds(1097, 6, 2, 3)
    assert set(best.source_upper) == {"runs_diff", "runs_sum"}


def test_combine():
    a = BoundInterval(1, 9, "runs_diff")
    b = BoundInterval(3, 9, "runs_sum")
    c = combine([a, b])
    assert (c.lower, c.upper, c.source_lower, c.source_upper) == (3, 9, ("runs_sum",), ("runs_diff", "runs_sum"))
    with pytest.raises(InvariantViolation):
        combine([BoundInterval(0, 1, "runs_diff"), BoundInterval(2, 3, "runs_sum")])
    with pytest.raises(ParameterError):
        combine([])


@pytest.mark.parametrize("g, v, a, expected", [(2, 5, 1, {1, 2}), (2, 3, 0, {0, 2})])
def test_successor_set_examples(g, v, a, expected):
    assert successor_set(g, v, a) == expected


def test_successor_set_needs_small_generator():
    with pytest.raises(ParameterError):
        successor_set(3, 3, 0)


def test_successor_relation_holds_for_small_generators():
    checked = 0
    for p in primes_in_range(5, 300):
        for g in primitive_roots(p, 4):
            for v in range(g + 1, min(9, p - 1)):
                if p % v != 1:
                    continue
                seq = list(elgamal_sequence(ElGamalParams(p, g, v)))
                pairs = zip(seq, seq[1:] + seq[:1])
                assert all(b in successor_set(g, v, a) for a, b in pairs), (p, g, v)
                checked += 1
    assert checked > 20


def test_coverage_examples():
    c = tuple_coverage_check(13, 2, 2, 2)
    assert c.sufficient and c.necessary and c.exact
    c = tuple_coverage_check(13, 2, 2, 4)
    assert not c.exact and not c.necessary
    assert tuple_counts(elgamal_sequence(ElGamalParams(13, 2, 2)), 4).support_size < 16
    c = tuple_coverage_check(13, 2, 3, 1)
    assert not c.necessary and c.exact is None


def test_coverage_verdicts_agree_with_scans():
    for p, g, v in SMALL_GRID:
        seq = elgamal_sequence(ElGamalParams(p, g, v))
        for t in (1, 2, 3):
            if t > p - 1:
                continue
            full = tuple_counts(seq, t).support_size == v**t
            c = tuple_coverage_check(p, g, v, t)
            if c.sufficient:
                assert full, (p, g, v, t)
            if full and g >= v:
                assert c.necessary
            if c.exact is not None:
                assert c.exact == full


def test_containment_and_invertible_improvement_on_small_grid():
    for p, g, v in SMALL_GRID:
        seq = elgamal_sequence(ElGamalParams(p, g, v))
        runs = run_counts(seq)
        for t in range(1, min(4, p - 1) + 1):
            ts = tuple_counts(seq, t)
            tb = elgamal_tuple_bounds(p, g, v, t)
            assert tb.lower <= ts.min_count <= ts.max_count <= tb.upper
            best = best_run_bounds(p, g, v, t)
            parts = [run_bounds_difference(p, g, v, t), run_bounds_sum(p, g, v, t), best]
            if math.gcd(g, v) == 1:
                inv = run_bounds_invertible(p, g, v, t)
                parts.append(inv)
                assert inv.width <= parts[1].width
            for b in range(v):
                assert all(runs.rho(b, t) in part for part in parts), (p, g, v, t, b)


@given(st.lists(st.tuples(st.integers(0, 50), st.integers(0, 50)), min_size=1, max_size=5), st.integers(0, 50), st.integers(0, 50))
@settings(max_examples=100)
def test_combining_more_intervals_never_widens(pairs, lo, hi):
    intervals = [BoundInterval(min(a, b), max(a, b), "runs_sum") for a, b in pairs]
    try:
        base = combine(intervals)
    except InvariantViolation:
        return
    extra = BoundInterval(min(lo, hi), max(lo, hi), "runs_diff")
    try:
        more = combine(intervals + [extra])
    except InvariantViolation:
        return
    assert more.lower >= base.lower and more.upper <= base.upper


def test_bound_report_csv():
    buf = io.StringIO()
    write_bound_report(buf, bound_report_rows(13, 2, 2, 2))
    lines = buf.getvalue().splitlines()
    assert lines[0] == ",".join(BOUND_REPORT_COLUMNS)
    assert lines[1] == "13,2,2,2,tuple,3,4,tuple_thm,tuple_thm,0"
    assert [ln.split(",")[4] for ln in lines[1:]] == ["tuple", "mu", "runs_diff", "runs_sum", "runs_best"]
