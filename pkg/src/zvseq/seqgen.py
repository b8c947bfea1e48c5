"""Sequences over Z_v: ElGamal sequences, permutation reductions, random balanced words."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Iterable, TextIO, Union

import numpy as np

from .errors import ParameterError
from .modarith import is_prime, is_primitive_root

RandomSource = Union[np.random.Generator, random.Random, int, None]


@dataclass(frozen=True)
class ElGamalParams:
    p: int
    g: int
    v: int

    def __post_init__(self):
        if self.p < 3 or not is_prime(self.p):
            raise ParameterError(f"p={self.p} is not an odd prime")
        if not 1 < self.v < self.p - 1:
            raise ParameterError(f"v={self.v} must satisfy 1 < v < p-1={self.p - 1}")
        if not 1 < self.g < self.p or not is_primitive_root(self.g, self.p):
            raise ParameterError(f"g={self.g} is not a primitive root mod {self.p}")


class SequenceZv:
    """An immutable circular sequence over Z_v.

    ``symbols`` is a read-only int64 array; equality compares v and contents.
    """

    __slots__ = ("v", "symbols")

    def __init__(self, v: int, symbols: Iterable[int] | np.ndarray):
        if v < 1:
            raise ParameterError(f"alphabet size must be positive, got {v}")
        arr = np.array(symbols, dtype=np.int64)
        if arr.ndim != 1 or arr.size == 0:
            raise ParameterError("a sequence needs at least one symbol")
        if arr.min() < 0 or arr.max() >= v:
            raise ParameterError(f"symbols must lie in [0, {v})")
        arr.flags.writeable = False
        object.__setattr__(self, "v", int(v))
        object.__setattr__(self, "symbols", arr)

    def __setattr__(self, name, value):
        raise AttributeError("SequenceZv is immutable")

    def __len__(self) -> int:
        return int(self.symbols.size)

    def __iter__(self):
        return iter(self.symbols.tolist())

    def __getitem__(self, i):
        return int(self.symbols[i % len(self)])

    def __eq__(self, other) -> bool:
        if not isinstance(other, SequenceZv):
            return NotImplemented
        return self.v == other.v and np.array_equal(self.symbols, other.symbols)

    def __hash__(self) -> int:
        return hash((self.v, self.symbols.tobytes()))

    def __repr__(self) -> str:
        body = " ".join(map(str, self.symbols[:20].tolist()))
        if len(self) > 20:
            body += " ..."
        return f"SequenceZv(v={self.v}, n={len(self)}, [{body}])"

    @property
    def n(self) -> int:
        return len(self)

    def to_tuple(self) -> tuple[int, ...]:
        return tuple(self.symbols.tolist())

    def rotate(self, k: int) -> "SequenceZv":
        return SequenceZv(self.v, np.roll(self.symbols, -k))


def write_sequence(seq: SequenceZv, fh: TextIO) -> None:
    fh.write(f"v={seq.v} n={len(seq)}\n")
    fh.write(" ".join(map(str, seq.symbols.tolist())) + "\n")


def read_sequence(fh: TextIO) -> SequenceZv:
    header = fh.readline().split()
    try:
        fields = dict(item.split("=", 1) for item in header)
        v, n = int(fields["v"]), int(fields["n"])
    except (KeyError, ValueError) as exc:
        raise ParameterError(f"bad sequence header: {' '.join(header)!r}") from exc
    symbols = [int(tok) for tok in fh.readline().split()]
    if len(symbols) != n:
        raise ParameterError(f"header says n={n} but found {len(symbols)} symbols")
    return SequenceZv(v, symbols)


def elgamal_permutation(p: int, g: int) -> np.ndarray:
    """The powers g^0, g^1, ..., g^(p-2) mod p, in {1, ..., p-1}.

    Built by iterated multiplication: one block of consecutive powers by a
    scalar loop, then each subsequent block is the previous one times g^B.
    """
    n = p - 1
    block = max(1, math.isqrt(n))
    out = np.empty(n, dtype=np.int64)
    x = 1
    for i in range(min(block, n)):
        out[i] = x
        x = x * g % p
    step = x  # g^block mod p
    if p * p < 2**63:  # block products stay inside int64
        for start in range(block, n, block):
            stop = min(start + block, n)
            out[start:stop] = out[start - block : stop - block] * step % p
    else:
        for i in range(block, n):
            out[i] = int(out[i - 1]) * g % p
    return out


def elgamal_sequence(params: ElGamalParams) -> SequenceZv:
    return SequenceZv(params.v, elgamal_permutation(params.p, params.g) % params.v)


def reduce_permutation(perm: Iterable[int], v: int) -> SequenceZv:
    arr = np.asarray(list(perm), dtype=np.int64)
    n = arr.size
    if n == 0 or not np.array_equal(np.sort(arr), np.arange(1, n + 1)):
        raise ParameterError("input is not a permutation of {1, ..., p-1}")
    if v < 2:
        raise ParameterError(f"alphabet size must be at least 2, got {v}")
    return SequenceZv(v, arr % v)


def as_generator(rng: RandomSource) -> np.random.Generator | random.Random:
    if isinstance(rng, (np.random.Generator, random.Random)):
        return rng
    return np.random.default_rng(rng)


def random_balanced_sequence(v: int, n: int, rng: RandomSource = None) -> SequenceZv:
    """A uniform member of B(v, n) via an unbiased shuffle of the fixed multiset."""
    if v < 1 or n < 1 or n % v:
        raise ParameterError(f"v={v} must divide n={n}")
    base = np.repeat(np.arange(v, dtype=np.int64), n // v)
    gen = as_generator(rng)
    if isinstance(gen, random.Random):
        items = base.tolist()
        gen.shuffle(items)
        return SequenceZv(v, items)
    gen.shuffle(base)
    return SequenceZv(v, base)


def _divisors(n: int) -> list[int]:
    small, large = [], []
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
    return small + large[::-1]


def least_period(seq: SequenceZv) -> int:
    s = seq.symbols
    n = s.size
    for d in _divisors(n):
        # for d | n, linear d-periodicity over the whole word is circular periodicity
        if d == n or np.array_equal(s[d:], s[:-d]):
            return d
    return n


def lift_count(p: int, v: int) -> int:
    """Number of permutations of Z_p^* reducing mod v to one fixed balanced word."""
    if v < 1 or (p - 1) % v:
        raise ParameterError(f"v={v} does not divide p-1={p - 1}")
    return math.factorial((p - 1) // v) ** v
