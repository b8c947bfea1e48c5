import io
import random
from collections import Counter
from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zvseq.errors import ParameterError
from zvseq.modarith import primes_in_range, primitive_roots
from zvseq.seqgen import (
    ElGamalParams,
    SequenceZv,
    elgamal_permutation,
    elgamal_sequence,
    least_period,
    lift_count,
    random_balanced_sequence,
    read_sequence,
    reduce_permutation,
    write_sequence,
)

POWERS_OF_2_MOD_13 = (1, 2, 4, 8, 3, 6, 12, 11, 9, 5, 10, 7)


def test_elgamal_sequence_examples():
    assert elgamal_sequence(ElGamalParams(13, 2, 2)).to_tuple() == (1, 0, 0, 0, 1, 0, 0, 1, 1, 1, 0, 1)
    # v = p-1 falls outside 1 < v < p-1, so reach it through the permutation reduction
    mod12 = reduce_permutation(elgamal_permutation(13, 2), 12)
    assert mod12.to_tuple() == tuple(x % 12 for x in POWERS_OF_2_MOD_13)
    assert elgamal_sequence(ElGamalParams(5, 2, 2)).to_tuple() == (1, 0, 0, 1)


@pytest.mark.parametrize("p, g, v", [(12, 2, 2), (13, 3, 2), (13, 2, 1), (13, 2, 12), (2, 1, 2)])
def test_elgamal_params_rejects_bad_input(p, g, v):
    with pytest.raises(ParameterError):
        ElGamalParams(p, g, v)


def test_elgamal_permutation_matches_pow():
    for p in [3, 5, 13, 1009, 7919, 104729]:
        g = primitive_roots(p, 1)[0]
        expected = [pow(g, i, p) for i in range(p - 1)]
        assert elgamal_permutation(p, g).tolist() == expected


@pytest.mark.parametrize(
    "perm, v, expected",
    [
        ([1, 2, 3, 4], 2, (1, 0, 1, 0)),
        ([4, 1, 3, 2], 2, (0, 1, 1, 0)),
        (list(POWERS_OF_2_MOD_13), 3, (1, 2, 1, 2, 0, 0, 0, 2, 0, 2, 1, 1)),
    ],
)
def test_reduce_permutation_examples(perm, v, expected):
    assert reduce_permutation(perm, v).to_tuple() == expected


@pytest.mark.parametrize("perm", [[1, 2, 2, 4], [0, 1, 2, 3], [], [1, 2, 5]])
def test_reduce_permutation_rejects_non_permutations(perm):
    with pytest.raises(ParameterError):
        reduce_permutation(perm, 2)


def test_random_balanced_support():
    members = {"0011", "0101", "0110", "1001", "1010", "1100"}
    for seed in range(20):
        assert "".join(map(str, random_balanced_sequence(2, 4, seed))) in members
    assert set(random_balanced_sequence(2, 2, 3).to_tuple()) == {0, 1}


def test_random_balanced_rejects_non_divisor():
    with pytest.raises(ParameterError):
        random_balanced_sequence(3, 7, 0)


def test_random_balanced_is_uniform_over_b36():
    rng = np.random.default_rng(2024)
    draws = 10**5
    freq = Counter(random_balanced_sequence(3, 6, rng).to_tuple() for _ in range(draws))
    assert len(freq) == 90
    expected = draws / 90
    sigma = (draws * (1 / 90) * (89 / 90)) ** 0.5
    assert all(abs(c - expected) < 5 * sigma for c in freq.values())


def test_random_balanced_accepts_stdlib_rng():
    seq = random_balanced_sequence(4, 12, random.Random(5))
    assert Counter(seq) == {a: 3 for a in range(4)}


def test_sequence_is_immutable():
    seq = SequenceZv(2, [0, 1])
    with pytest.raises(AttributeError):
        seq.v = 3
    with pytest.raises(ValueError):
        seq.symbols[0] = 1


def test_sequence_rejects_out_of_range_symbols():
    with pytest.raises(ParameterError):
        SequenceZv(2, [0, 2])


def test_serialization_roundtrip(elgamal_13_2_2):
    buf = io.StringIO()
    write_sequence(elgamal_13_2_2, buf)
    assert buf.getvalue() == "v=2 n=12\n1 0 0 0 1 0 0 1 1 1 0 1\n"
    buf.seek(0)
    assert read_sequence(buf) == elgamal_13_2_2


def test_read_sequence_rejects_length_mismatch():
    with pytest.raises(ParameterError):
        read_sequence(io.StringIO("v=2 n=3\n0 1\n"))


@pytest.mark.parametrize("symbols, expected", [((0, 1, 0, 1), 2), ((0, 0, 0, 0), 1), ((0, 0, 1), 3)])
def test_least_period_examples(symbols, expected):
    assert least_period(SequenceZv(2, symbols)) == expected


def test_least_period_of_elgamal_example(elgamal_13_2_2):
    assert least_period(elgamal_13_2_2) == 12


@given(st.lists(st.integers(0, 2), min_size=1, max_size=8), st.integers(1, 4))
def test_least_period_of_repetition(block, reps):
    seq = SequenceZv(3, block * reps)
    d = least_period(seq)
    assert len(block) % d == 0 or d <= len(block)
    assert all(seq[i] == seq[i + d] for i in range(len(seq)))


@pytest.mark.parametrize("p, v, expected", [(5, 2, 4), (3, 2, 1), (7, 3, 8)])
def test_lift_count_examples(p, v, expected):
    assert lift_count(p, v) == expected


def test_lift_count_rejects_non_divisor():
    with pytest.raises(ParameterError):
        lift_count(7, 4)


@pytest.mark.parametrize("p, v", [(3, 2), (5, 2), (7, 2), (7, 3)])
def test_lift_count_by_exhaustion(p, v):
    fibres = Counter(tuple(x % v for x in perm) for perm in permutations(range(1, p)))
    balanced = {w: c for w, c in fibres.items() if len(set(Counter(w).values())) == 1 and len(Counter(w)) == v}
    assert balanced and set(balanced.values()) == {lift_count(p, v)}


def _reduction_profile(seq, v):
    return sorted(Counter(seq).get(a, 0) for a in range(v))


def test_balance_of_elgamal_and_reductions():
    for p in primes_in_range(5, 400):
        g = primitive_roots(p, 1)[0]
        for v in range(2, min(9, p - 1)):
            counts = _reduction_profile(elgamal_sequence(ElGamalParams(p, g, v)), v)
            assert counts[-1] - counts[0] <= 1
            if (p - 1) % v == 0:
                assert set(counts) == {(p - 1) // v}
            else:
                alpha = p % v
                if alpha > 1:
                    assert counts.count((p - 1) // v + 1) == alpha - 1


@given(st.permutations(list(range(1, 11))), st.integers(2, 9))
@settings(max_examples=100, deadline=None)
def test_random_permutation_reductions_are_balanced_and_aperiodic(perm, v):
    # permutations of Z_11^*; maximal period is forced whenever 11 is not 1 mod v
    seq = reduce_permutation(perm, v)
    counts = _reduction_profile(seq, v)
    assert counts[-1] - counts[0] <= 1
    if 11 % v != 1:
        assert least_period(seq) == 10
