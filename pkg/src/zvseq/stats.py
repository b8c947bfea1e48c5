"""Circular occurrence statistics: tuple counts, runs, balance."""

from __future__ import annotations

import csv
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, TextIO

import numpy as np

from .errors import ParameterError, ResourceCapError
from .seqgen import SequenceZv

DEFAULT_ENUMERATION_CAP = 10**7
# window codes are built as int64; beyond this fall back to Python ints
_INT64_CODE_LIMIT = 2**62


def encode_tuple(z: Iterable[int], v: int) -> int:
    code = 0
    for c in z:
        code = code * v + int(c)
    return code


def decode_tuple(code: int, v: int, t: int) -> tuple[int, ...]:
    digits = [0] * t
    for i in range(t - 1, -1, -1):
        code, digits[i] = divmod(code, v)
    return tuple(digits)


def render_tuple(z: Iterable[int]) -> str:
    z = list(z)
    if all(c < 10 for c in z):
        return "".join(map(str, z))
    return "-".join(map(str, z))


@dataclass(frozen=True)
class TupleStats:
    """lambda(z) for every t-tuple; keys are base-v codes, absent keys mean 0."""

    t: int
    v: int
    n: int
    counts: dict[int, int]

    def count(self, z: Iterable[int]) -> int:
        z = tuple(z)
        if len(z) != self.t:
            raise ParameterError(f"expected a {self.t}-tuple, got {z}")
        return self.counts.get(encode_tuple(z, self.v), 0)

    def items(self):
        for code in sorted(self.counts):
            yield decode_tuple(code, self.v, self.t), self.counts[code]

    @property
    def support_size(self) -> int:
        return len(self.counts)

    @property
    def max_count(self) -> int:
        return max(self.counts.values())

    @property
    def min_count(self) -> int:
        """Minimum over all of Z_v^t, so 0 whenever some tuple never occurs."""
        if len(self.counts) < self.v**self.t:
            return 0
        return min(self.counts.values())

    def dense(self) -> np.ndarray:
        """All v^t counts in base-v order, zeros included."""
        out = np.zeros(self.v**self.t, dtype=np.int64)
        for code, c in self.counts.items():
            out[code] = c
        return out


@dataclass(frozen=True)
class RunStats:
    per_symbol: dict[tuple[int, int], int]
    totals: dict[int, int] = field(default_factory=dict)

    def rho(self, b: int, t: int) -> int:
        return self.per_symbol.get((b, t), 0)

    def total(self, t: int) -> int:
        return self.totals.get(t, 0)


@dataclass(frozen=True)
class BalanceProfile:
    counts: dict[int, int]
    max_difference: int

    @property
    def is_balanced(self) -> bool:
        return self.max_difference <= 1


def window_codes(seq: SequenceZv, t: int) -> np.ndarray:
    """Base-v code of the circular window starting at each index."""
    n, v = len(seq), seq.v
    if not 1 <= t <= n:
        raise ParameterError(f"tuple length t={t} must lie in [1, n={n}]")
    s = seq.symbols
    if v**t >= _INT64_CODE_LIMIT:
        codes = np.zeros(n, dtype=object)
        s = s.astype(object)
    else:
        codes = np.zeros(n, dtype=np.int64)
    ext = np.concatenate([s, s[: t - 1]])
    for k in range(t):
        codes = codes * v + ext[k : k + n]
    return codes


def tuple_counts(seq: SequenceZv, t: int) -> TupleStats:
    codes = window_codes(seq, t)
    if codes.dtype == object:
        counts = dict(Counter(codes.tolist()))
    else:
        keys, freq = np.unique(codes, return_counts=True)
        counts = dict(zip(keys.tolist(), freq.tolist()))
    return TupleStats(t=t, v=seq.v, n=len(seq), counts=counts)


def run_counts(seq: SequenceZv) -> RunStats:
    """Count circular maximal blocks; a constant sequence is one run of length n."""
    s = seq.symbols
    n = s.size
    change = np.flatnonzero(s != np.roll(s, 1))
    if change.size == 0:
        b = int(s[0])
        return RunStats({(b, n): 1}, {n: 1})
    # change[k] is where a run starts; the last one wraps to change[0] + n
    starts = change
    lengths = np.diff(np.append(starts, starts[0] + n))
    symbols = s[starts]
    per_symbol: Counter = Counter(zip(symbols.tolist(), lengths.tolist()))
    totals: Counter = Counter(lengths.tolist())
    return RunStats(dict(per_symbol), dict(totals))


def run_prefix_counts(seq: SequenceZv, z: Iterable[int]) -> int:
    """mu(z): windows that match z on the first t-1 symbols and differ at the last."""
    z = tuple(z)
    t = len(z)
    if t < 2:
        raise ParameterError("mu(z) needs a tuple of length at least 2")
    head = tuple_counts(seq, t - 1).count(z[:-1])
    return head - tuple_counts(seq, t).count(z)


def balance_profile(seq: SequenceZv) -> BalanceProfile:
    freq = np.bincount(seq.symbols, minlength=seq.v)
    counts = {a: int(c) for a, c in enumerate(freq.tolist())}
    return BalanceProfile(counts, int(freq.max() - freq.min()))


def tuple_balance_deviation(
    stats: TupleStats, v: int | None = None, cap: int = DEFAULT_ENUMERATION_CAP
) -> int:
    """max |lambda(z1) - lambda(z2)| over all of Z_v^t, including absent tuples."""
    v = stats.v if v is None else v
    size = v**stats.t
    if size > cap:
        raise ResourceCapError(f"v^t = {size} exceeds the enumeration cap {cap}")
    dense = np.zeros(size, dtype=np.int64)
    for code, c in stats.counts.items():
        dense[code] = c
    return int(dense.max() - dense.min())


def write_stats_csv(
    fh: TextIO, tuples: Iterable[TupleStats] = (), runs: RunStats | None = None
) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["kind", "key", "count"])
    for ts in tuples:
        for z, c in ts.items():
            writer.writerow(["tuple", render_tuple(z), c])
    if runs is not None:
        for (b, t), c in sorted(runs.per_symbol.items()):
            writer.writerow(["run_symbol", f"{b}:{t}", c])
        for t, c in sorted(runs.totals.items()):
            writer.writerow(["run_total", str(t), c])
