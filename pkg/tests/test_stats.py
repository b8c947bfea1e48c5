import io
from collections import Counter
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zvseq.errors import ParameterError, ResourceCapError
from zvseq.seqgen import SequenceZv, reduce_permutation
from zvseq.stats import (
    TupleStats,
    balance_profile,
    decode_tuple,
    encode_tuple,
    run_counts,
    run_prefix_counts,
    tuple_balance_deviation,
    tuple_counts,
    write_stats_csv,
)

sequences = st.integers(2, 4).flatmap(
    lambda v: st.lists(st.integers(0, v - 1), min_size=1, max_size=64).map(lambda s: SequenceZv(v, s))
)


def naive_lambda(seq, z):
    n, t = len(seq), len(z)
    return sum(all(seq[i + k] == z[k] for k in range(t)) for i in range(n))


def naive_runs(seq):
    """Maximal circular blocks found by walking from a symbol change."""
    s = list(seq)
    n = len(s)
    if len(set(s)) == 1:
        return {(s[0], n): 1}
    start = next(i for i in range(n) if s[i] != s[i - 1])
    s = s[start:] + s[:start]
    out = Counter()
    i = 0
    while i < n:
        j = i
        while j < n and s[j] == s[i]:
            j += 1
        out[(s[i], j - i)] += 1
        i = j
    return dict(out)


def test_tuple_counts_elgamal_example(elgamal_13_2_2):
    ts = tuple_counts(elgamal_13_2_2, 2)
    assert [ts.count(z) for z in product(range(2), repeat=2)] == [3, 3, 3, 3]


@pytest.mark.parametrize(
    "symbols, t, expected",
    [((0, 1, 0, 1), 1, {(0,): 2, (1,): 2}), ((0, 0, 1, 1), 2, {(0, 0): 1, (0, 1): 1, (1, 1): 1, (1, 0): 1})],
)
def test_tuple_counts_small_examples(symbols, t, expected):
    ts = tuple_counts(SequenceZv(2, symbols), t)
    assert dict(ts.items()) == expected


def test_tuple_counts_rejects_long_tuples():
    with pytest.raises(ParameterError):
        tuple_counts(SequenceZv(2, [0, 1]), 3)


def test_tuple_counts_huge_alphabet_falls_back_to_python_ints():
    v = 2**40
    seq = SequenceZv(v, [v - 1, 5, v - 1, 5])
    ts = tuple_counts(seq, 2)
    assert ts.count((v - 1, 5)) == 2 and ts.count((5, v - 1)) == 2


def test_encode_decode_roundtrip():
    for z in product(range(3), repeat=3):
        assert decode_tuple(encode_tuple(z, 3), 3, 3) == z


def test_run_counts_elgamal_example(elgamal_13_2_2):
    rs = run_counts(elgamal_13_2_2)
    assert rs.per_symbol == {(b, t): 1 for b in (0, 1) for t in (1, 2, 3)}
    assert rs.totals == {1: 2, 2: 2, 3: 2}


@pytest.mark.parametrize(
    "symbols, expected", [((0, 1, 0, 1), {(0, 1): 2, (1, 1): 2}), ((0, 0, 0, 0), {(0, 4): 1})]
)
def test_run_counts_small_examples(symbols, expected):
    assert run_counts(SequenceZv(2, symbols)).per_symbol == expected


def test_balance_profile_examples(elgamal_13_2_2):
    bp = balance_profile(elgamal_13_2_2)
    assert bp.counts == {0: 6, 1: 6} and bp.max_difference == 0
    bp = balance_profile(SequenceZv(2, [0, 0, 1]))
    assert bp.counts == {0: 2, 1: 1} and bp.max_difference == 1
    bp = balance_profile(reduce_permutation(range(1, 13), 5))
    assert list(bp.counts.values()) == [2, 3, 3, 2, 2] and bp.max_difference == 1


def test_tuple_balance_deviation_examples(elgamal_13_2_2):
    assert tuple_balance_deviation(tuple_counts(elgamal_13_2_2, 2), 2) == 0
    assert tuple_balance_deviation(tuple_counts(SequenceZv(2, [0, 1, 0, 1]), 2), 2) == 2
    assert tuple_balance_deviation(TupleStats(1, 1, 3, {0: 3}), 1) == 0


def test_tuple_balance_deviation_cap():
    ts = tuple_counts(SequenceZv(10, list(range(10))), 8)
    with pytest.raises(ResourceCapError):
        tuple_balance_deviation(ts, 10)
    assert tuple_balance_deviation(ts, 10, cap=10**9) == 1


def test_run_prefix_counts_direct(elgamal_13_2_2):
    # windows matching 0 then anything but 0: exactly the ends of runs of 0
    assert run_prefix_counts(elgamal_13_2_2, (0, 0)) == 3


def test_stats_csv(elgamal_13_2_2):
    buf = io.StringIO()
    write_stats_csv(buf, [tuple_counts(elgamal_13_2_2, 2)], run_counts(elgamal_13_2_2))
    lines = buf.getvalue().splitlines()
    assert lines[0] == "kind,key,count"
    assert "tuple,01,3" in lines and "run_symbol,0:3,1" in lines and "run_total,2,2" in lines


@given(sequences, st.integers(1, 4), st.integers(0, 70))
@settings(max_examples=150, deadline=None)
def test_tuple_counts_match_naive_and_are_rotation_invariant(seq, t, k):
    if t > len(seq):
        return
    ts = tuple_counts(seq, t)
    assert sum(ts.counts.values()) == len(seq)
    for z in product(range(seq.v), repeat=t):
        assert ts.count(z) == naive_lambda(seq, z)
    assert tuple_counts(seq.rotate(k), t).counts == ts.counts


@given(sequences, st.integers(1, 3))
@settings(max_examples=100, deadline=None)
def test_marginalization(seq, t):
    if t + 1 > len(seq):
        return
    short, long_ = tuple_counts(seq, t), tuple_counts(seq, t + 1)
    for z in product(range(seq.v), repeat=t):
        assert sum(long_.count(z + (c,)) for c in range(seq.v)) == short.count(z)


@given(sequences, st.integers(0, 70))
@settings(max_examples=150, deadline=None)
def test_runs_match_naive_and_partition_occurrences(seq, k):
    rs = run_counts(seq)
    assert rs.per_symbol == naive_runs(seq)
    assert run_counts(seq.rotate(k)).per_symbol == rs.per_symbol
    ones = tuple_counts(seq, 1)
    for b in range(seq.v):
        assert sum(t * c for (a, t), c in rs.per_symbol.items() if a == b) == ones.count((b,))
    for t, c in rs.totals.items():
        assert c == sum(rs.rho(b, t) for b in range(seq.v))


@given(sequences)
@settings(max_examples=60, deadline=None)
def test_dense_counts_consistent(seq):
    t = min(2, len(seq))
    ts = tuple_counts(seq, t)
    dense = ts.dense()
    assert int(dense.sum()) == len(seq)
    assert ts.min_count == int(dense.min()) and ts.max_count == int(dense.max())
    assert tuple_balance_deviation(ts) == int(np.ptp(dense))
