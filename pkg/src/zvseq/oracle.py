"""Exhaustive ground truth over B(v, n).

Everything here counts by brute force and deliberately shares no code with
``stats`` or ``theory``, so agreement between them is a real cross-check.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product
from typing import Iterator, Sequence

from .errors import ParameterError, ResourceCapError
from .seqgen import SequenceZv

DEFAULT_CAP = 10**7


def balanced_population(v: int, n: int) -> int:
    if v < 1 or n < 1 or n % v:
        raise ParameterError(f"v={v} must divide n={n}")
    return math.factorial(n) // math.factorial(n // v) ** v


def _words(v: int, n: int, cap: int) -> Iterator[list[int]]:
    """Balanced words in lexicographic order via the next-permutation successor."""
    size = balanced_population(v, n)
    if size > cap:
        raise ResourceCapError(f"|B({v},{n})| = {size} exceeds the cap {cap}")
    w = [a for a in range(v) for _ in range(n // v)]
    while True:
        yield w
        i = n - 2
        while i >= 0 and w[i] >= w[i + 1]:
            i -= 1
        if i < 0:
            return
        j = n - 1
        while w[j] <= w[i]:
            j -= 1
        w[i], w[j] = w[j], w[i]
        w[i + 1 :] = reversed(w[i + 1 :])


def enumerate_balanced(v: int, n: int, cap: int = DEFAULT_CAP) -> Iterator[SequenceZv]:
    for w in _words(v, n, cap):
        yield SequenceZv(v, w)


def _occurrences(w: Sequence[int], z: Sequence[int]) -> int:
    n, t = len(w), len(z)
    return sum(all(w[(i + k) % n] == z[k] for k in range(t)) for i in range(n))


def _window_histogram(w: Sequence[int], t: int) -> dict[tuple[int, ...], int]:
    n = len(w)
    out: dict[tuple[int, ...], int] = {}
    for i in range(n):
        key = tuple(w[(i + k) % n] for k in range(t))
        out[key] = out.get(key, 0) + 1
    return out


def _runs_of(w: Sequence[int], b: int, t: int) -> int:
    """Starts i with w[i-1] != b, w[i..i+t-1] == b, w[i+t] != b (all circular)."""
    n = len(w)
    return sum(
        w[(i - 1) % n] != b
        and w[(i + t) % n] != b
        and all(w[(i + k) % n] == b for k in range(t))
        for i in range(n)
    )


def _least_period(w: Sequence[int]) -> int:
    n = len(w)
    for d in range(1, n + 1):
        if n % d == 0 and all(w[i] == w[(i + d) % n] for i in range(n)):
            return d
    return n


@dataclass(frozen=True)
class CountDistribution:
    """How many words attain each count value."""

    support: dict[int, int]
    population: int

    def __post_init__(self):
        if sum(self.support.values()) != self.population:
            raise ParameterError("frequencies do not sum to the population")

    def moment(self, k: int) -> Fraction:
        return Fraction(sum(c**k * f for c, f in self.support.items()), self.population)

    @property
    def mean(self) -> Fraction:
        return self.moment(1)

    @property
    def variance(self) -> Fraction:
        m = self.mean
        return self.moment(2) - m * m

    def merge(self, other: "CountDistribution") -> "CountDistribution":
        merged = dict(self.support)
        for c, f in other.support.items():
            merged[c] = merged.get(c, 0) + f
        return CountDistribution(merged, self.population + other.population)

    def to_json(self, v: int, n: int, kind: str, key: str) -> str:
        payload = {
            "v": v,
            "n": n,
            "kind": kind,
            "key": key,
            "histogram": [[c, f] for c, f in sorted(self.support.items())],
            "population": self.population,
        }
        return json.dumps(payload, sort_keys=True)


def _distribution(values: dict[int, int]) -> CountDistribution:
    return CountDistribution(dict(sorted(values.items())), sum(values.values()))


def exact_tuple_distribution(
    v: int, n: int, z: Sequence[int], cap: int = DEFAULT_CAP
) -> CountDistribution:
    z = tuple(z)
    if not z or any(not 0 <= c < v for c in z):
        raise ParameterError(f"z={z} is not a non-empty tuple over Z_{v}")
    hist: dict[int, int] = {}
    for w in _words(v, n, cap):
        c = _occurrences(w, z)
        hist[c] = hist.get(c, 0) + 1
    return _distribution(hist)


def exact_tuple_distributions(
    v: int, n: int, t: int, cap: int = DEFAULT_CAP
) -> dict[tuple[int, ...], CountDistribution]:
    """Distributions for every z in Z_v^t from a single pass over B(v, n)."""
    keys = list(product(range(v), repeat=t))
    hists: dict[tuple[int, ...], dict[int, int]] = {z: {} for z in keys}
    for w in _words(v, n, cap):
        seen = _window_histogram(w, t)
        for z in keys:
            c = seen.get(z, 0)
            h = hists[z]
            h[c] = h.get(c, 0) + 1
    return {z: _distribution(h) for z, h in hists.items()}


def exact_run_distribution(
    v: int, n: int, b: int, t: int, cap: int = DEFAULT_CAP
) -> CountDistribution:
    if not 0 <= b < v or t < 1:
        raise ParameterError(f"bad run target b={b}, t={t}")
    hist: dict[int, int] = {}
    for w in _words(v, n, cap):
        c = _runs_of(w, b, t)
        hist[c] = hist.get(c, 0) + 1
    return _distribution(hist)


def exact_period_census(v: int, n: int, cap: int = DEFAULT_CAP) -> dict[int, int]:
    census: dict[int, int] = {}
    for w in _words(v, n, cap):
        d = _least_period(w)
        census[d] = census.get(d, 0) + 1
    return dict(sorted(census.items()))


@dataclass(frozen=True)
class NormalitySummary:
    mean: Fraction
    variance: Fraction
    skewness: float | None  # None when the variance is zero
    excess_kurtosis: float | None


def normality_diagnostic(dist: CountDistribution) -> NormalitySummary:
    if dist.population < 2:
        raise ParameterError("need a population of at least 2")
    mean, var = dist.mean, dist.variance
    if var == 0:
        return NormalitySummary(mean, var, None, None)
    n = dist.population
    m3 = Fraction(sum((c - mean) ** 3 * f for c, f in dist.support.items()), n)
    m4 = Fraction(sum((c - mean) ** 4 * f for c, f in dist.support.items()), n)
    skew = float(m3) / float(var) ** 1.5
    kurt = float(m4 / (var * var)) - 3.0
    return NormalitySummary(mean, var, skew, kurt)


def exhaustive_max_period_count(p: int, v: int, cap: int = DEFAULT_CAP) -> int:
    """Permutations of {1, ..., p-1} whose reduction mod v has least period p-1."""
    n = p - 1
    if n < 1 or v < 1:
        raise ParameterError(f"bad parameters p={p}, v={v}")
    if math.factorial(n) > cap:
        raise ResourceCapError(f"{n}! permutations exceed the cap {cap}")
    return sum(
        _least_period([x % v for x in perm]) == n for perm in permutations(range(1, p))
    )
