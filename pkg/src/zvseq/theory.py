"""Closed-form counts and moments for balanced sequences over Z_v.

Exact quantities use Python integers and ``Fraction``; huge counts switch to
base-2 logarithms evaluated with mpmath.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, total_ordering
from typing import Sequence

import mpmath

from .errors import InvariantViolation, ParameterError, UnsupportedRegimeError
from .modarith import factorize, is_prime, mobius

EXACTNESS_THRESHOLD = 20000
LOG_DPS = 50


def descending_product(x: int, m: int) -> int:
    """(x)_m = x(x-1)...(x-m+1)."""
    if m < 0:
        raise ParameterError(f"m must be non-negative, got {m}")
    if 0 <= x < m:
        return 0
    return math.prod(range(x - m + 1, x + 1)) if m else 1


@lru_cache(maxsize=4096)
def _factorial(n: int) -> int:
    return math.factorial(n)


def _log2_factorial(n: int) -> mpmath.mpf:
    with mpmath.workdps(LOG_DPS):
        return mpmath.loggamma(n + 1) / mpmath.log(2)


@total_ordering
class BigCount:
    """A non-negative count held exactly, or as log2 when too large to be useful exactly."""

    __slots__ = ("_exact", "_log2")

    def __init__(self, exact: int | None = None, log2: mpmath.mpf | None = None):
        if (exact is None) == (log2 is None):
            raise ParameterError("BigCount needs exactly one of exact or log2")
        if exact is not None and exact < 0:
            raise ParameterError(f"count must be non-negative, got {exact}")
        self._exact = exact
        self._log2 = log2

    @classmethod
    def from_mpf(cls, value: mpmath.mpf) -> "BigCount":
        if value < 0:
            raise InvariantViolation(f"negative count {value}")
        with mpmath.workdps(LOG_DPS):
            return cls(log2=mpmath.log(value, 2) if value > 0 else mpmath.ninf)

    @property
    def mode(self) -> str:
        return "exact" if self._exact is not None else "log"

    @property
    def is_exact(self) -> bool:
        return self._exact is not None

    @property
    def value(self) -> int:
        if self._exact is None:
            raise ParameterError("count is held in log-space only")
        return self._exact

    @property
    def log2(self) -> mpmath.mpf:
        if self._log2 is not None:
            return self._log2
        with mpmath.workdps(LOG_DPS):
            if self._exact == 0:
                return mpmath.ninf
            return mpmath.log(mpmath.mpf(self._exact), 2)

    def to_mpf(self) -> mpmath.mpf:
        with mpmath.workdps(LOG_DPS):
            if self._exact is not None:
                return mpmath.mpf(self._exact)
            return mpmath.power(2, self._log2)

    def _key(self, other: "BigCount"):
        if self.is_exact and other.is_exact:
            return self._exact, other._exact
        return self.log2, other.log2

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = BigCount(other)
        if not isinstance(other, BigCount):
            return NotImplemented
        a, b = self._key(other)
        return a == b

    def __lt__(self, other) -> bool:
        if isinstance(other, int):
            other = BigCount(other)
        if not isinstance(other, BigCount):
            return NotImplemented
        a, b = self._key(other)
        return a < b

    def __hash__(self) -> int:
        return hash(self._exact) if self.is_exact else hash(("log", str(self._log2)))

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        if self.is_exact:
            return f"BigCount({self._exact})"
        return f"BigCount(log2={mpmath.nstr(self._log2, 12)})"


def _check_divides(v: int, rho: int) -> None:
    if v < 1 or rho < 1 or rho % v:
        raise ParameterError(f"v={v} must divide rho={rho}")


def _multinomial(v: int, rho: int) -> int:
    return _factorial(rho) // _factorial(rho // v) ** v


def _multinomial_mpf(v: int, rho: int) -> mpmath.mpf:
    return mpmath.exp(mpmath.loggamma(rho + 1) - v * mpmath.loggamma(rho // v + 1))


def _exact_mode(size: int, threshold: int) -> bool:
    return size <= threshold


def count_period_dividing(v: int, rho: int, threshold: int = EXACTNESS_THRESHOLD) -> BigCount:
    """s(v, rho): balanced words of length rho, i.e. the multinomial rho!/((rho/v)!)^v."""
    _check_divides(v, rho)
    if _exact_mode(rho, threshold):
        return BigCount(_multinomial(v, rho))
    with mpmath.workdps(LOG_DPS):
        return BigCount(log2=(_log2_factorial(rho) - v * _log2_factorial(rho // v)))


def _period_exact_int(v: int, rho: int) -> int:
    k = rho // v
    return sum(mobius(d) * _multinomial(v, rho // d) for d in factorize(k).divisors())


def _period_exact_mpf(v: int, rho: int) -> mpmath.mpf:
    k = rho // v
    total = mpmath.mpf(0)
    for d in factorize(k).divisors():
        mu = mobius(d)
        if mu:
            total += mu * _multinomial_mpf(v, rho // d)
    return total


def count_period_exact(v: int, rho: int, threshold: int = EXACTNESS_THRESHOLD) -> BigCount:
    """t(v, rho): balanced words of length rho whose least period is exactly rho."""
    _check_divides(v, rho)
    if _exact_mode(rho, threshold):
        return BigCount(_period_exact_int(v, rho))
    with mpmath.workdps(LOG_DPS):
        return BigCount.from_mpf(_period_exact_mpf(v, rho))


def _check_prime_divisor(p: int, v: int) -> None:
    if not is_prime(p):
        raise ParameterError(f"p={p} is not prime")
    if v < 1 or (p - 1) % v:
        raise ParameterError(f"v={v} does not divide p-1={p - 1}")


def count_max_period_permutations(
    p: int, v: int, threshold: int = EXACTNESS_THRESHOLD
) -> BigCount:
    """T: permutations of Z_p^* whose reduction mod v has period p-1."""
    _check_prime_divisor(p, v)
    n = p - 1
    if _exact_mode(n, threshold):
        return BigCount(_period_exact_int(v, n) * _factorial(n // v) ** v)
    with mpmath.workdps(LOG_DPS):
        lift = mpmath.exp(v * mpmath.loggamma(n // v + 1))
        return BigCount.from_mpf(_period_exact_mpf(v, n) * lift)


def max_period_count_bounds(
    p: int, v: int, threshold: int = EXACTNESS_THRESHOLD
) -> tuple[BigCount, BigCount]:
    """Inclusion-exclusion bounds on T using only the maximal proper periods.

    With k = (p-1)/v and Q its prime divisors, lower subtracts the count for
    every (p-1)/q, q in Q, and upper subtracts only the one for q = min Q.
    """
    _check_prime_divisor(p, v)
    n = p - 1
    primes = factorize(n // v).primes
    if _exact_mode(n, threshold):
        total = _factorial(n)
        lift = _factorial(n // v) ** v
        if not primes:
            return BigCount(total), BigCount(total)
        lower = total - sum(_multinomial(v, n // q) for q in primes) * lift
        upper = total - _multinomial(v, n // primes[0]) * lift
        return BigCount(max(lower, 0)), BigCount(upper)
    with mpmath.workdps(LOG_DPS):
        total = mpmath.factorial(n)
        lift = mpmath.exp(v * mpmath.loggamma(n // v + 1))
        if not primes:
            return BigCount.from_mpf(total), BigCount.from_mpf(total)
        lower = total - mpmath.fsum(_multinomial_mpf(v, n // q) for q in primes) * lift
        upper = total - _multinomial_mpf(v, n // primes[0]) * lift
        return BigCount.from_mpf(max(lower, mpmath.mpf(0))), BigCount.from_mpf(upper)


def short_period_probability(p: int, v: int, full_census: bool = False) -> mpmath.mpf:
    """Probability that a uniform permutation reduces mod v to a period below p-1.

    Closed form v!(q!)^v/(vq)! when (p-1)/v = q is prime; the full census sums
    the Moebius terms of 1 - t(v, p-1)/s(v, p-1) without forming the difference.
    """
    _check_prime_divisor(p, v)
    n = p - 1
    k = n // v
    with mpmath.workdps(LOG_DPS):
        if not full_census:
            if not is_prime(k):
                raise ParameterError(f"(p-1)/v = {k} is not prime")
            log_prob = mpmath.loggamma(v + 1) + v * mpmath.loggamma(k + 1) - mpmath.loggamma(n + 1)
            return +mpmath.exp(log_prob)
        ref = mpmath.loggamma(n + 1) - v * mpmath.loggamma(k + 1)
        total = mpmath.mpf(0)
        for d in factorize(k).divisors()[1:]:
            mu = mobius(d)
            if mu:
                m = n // d
                log_s = mpmath.loggamma(m + 1) - v * mpmath.loggamma(m // v + 1)
                total -= mu * mpmath.exp(log_s - ref)
        return +total


@dataclass(frozen=True)
class MomentPair:
    mean: Fraction
    variance: Fraction

    def __post_init__(self):
        if self.variance < 0:
            raise InvariantViolation(f"negative variance {self.variance}")


def _validate_balanced_shape(v: int, n: int) -> int:
    if v < 2:
        raise ParameterError(f"alphabet size must be at least 2, got {v}")
    if n < v or n % v:
        raise ParameterError(f"v={v} must divide n={n}")
    return n // v


def _profile(z: Sequence[int], v: int) -> list[int]:
    counts = [0] * v
    for c in z:
        counts[c] += 1
    return counts


def tuple_moments_exact(v: int, n: int, z: Sequence[int]) -> MomentPair:
    """Mean and variance of lambda(z) over all balanced words in B(v, n)."""
    l = _validate_balanced_shape(v, n)
    z = tuple(int(c) for c in z)
    t = len(z)
    if t < 1 or any(not 0 <= c < v for c in z):
        raise ParameterError(f"z={z} is not a non-empty tuple over Z_{v}")
    if n <= 2 * t - 2:
        raise UnsupportedRegimeError(f"need n > 2t-2, got n={n}, t={t}")
    prof = _profile(z, v)
    ff = descending_product

    mean = Fraction(math.prod(ff(l, c) for c in prof), ff(n - 1, t - 1))
    second = Fraction(math.prod(ff(l, 2 * c) for c in prof), ff(n - 1, 2 * t - 2))
    overlap = Fraction(0)
    for k in range(1, t):
        if all(z[i + k] == z[i] for i in range(t - k)):
            head = _profile(z[:k], v)
            overlap += Fraction(
                math.prod(ff(l, c + h) for c, h in zip(prof, head)), ff(n - 1, t + k - 1)
            )
    return MomentPair(mean, mean - mean * mean + second + 2 * overlap)


def _adjacent_run_pairs(v: int, n: int, t: int) -> int:
    """Ordered pairs of runs of one symbol packed as b^t x b^t y into n = 2t+2.

    Counts (start, x, y) over starts and non-b fillers that leave the word balanced.
    """
    l = n // v
    if l != 2 * t:
        return 0
    # the two fillers, together, must supply all l copies of each of the v-1 other symbols
    fillers = sum(
        1
        for x in range(1, v)
        for y in range(1, v)
        if all((x == a) + (y == a) == l for a in range(1, v))
    )
    return n * fillers


def run_moments_exact(v: int, n: int, t: int) -> MomentPair:
    """Mean and variance of rho(b, t) over B(v, n); the same for every symbol b."""
    l = _validate_balanced_shape(v, n)
    if t < 1:
        raise ParameterError(f"run length must be positive, got {t}")
    if n < t + 2:
        raise UnsupportedRegimeError(f"need n >= t+2, got n={n}, t={t}")
    ff = descending_product
    others = l * (v - 1)

    mean = Fraction((others - 1) * (v - 1) * l * ff(l, t), ff(n - 1, t + 1))
    if n >= 2 * t + 3:
        pairs = Fraction(
            (v - 1) * l * ff(l, 2 * t) * (others - 1) ** 2 * (others - 2), ff(n - 1, 2 * t + 2)
        )
    elif n == 2 * t + 2:
        # the generic term divides by zero here; count the rigid configurations directly
        pairs = Fraction(_adjacent_run_pairs(v, n, t), _multinomial(v, n))
    else:
        pairs = Fraction(0)
    return MomentPair(mean, mean - mean * mean + pairs)


# Polynomial coefficients of the 1/n expansions. `t` is tuple or run length.


def _a1(v: int, t: int) -> int:
    return -(t * t - 2 * t * v + v * v - t) * (v - 1)


def _b1(v: int, t: int) -> int:
    return (
        3 * (v - 1) * t**4
        - 2 * (6 * v * v - v - 1) * t**3
        + 3 * (6 * v**3 + 2 * v * v - v + 1) * t * t
        - 2 * (6 * v**4 + 3 * v**3 - 3 * v * v + v + 1) * t
        + 3 * v**5
        + v**4
        - 2 * v**3
    ) * (v - 1)


def _a3(v: int, t: int) -> Fraction:
    return Fraction(2 * v**t - 3 * (v - 1) * t * t + 2 * (v * v - v - 2) * t + 2)


def _b3(v: int, t: int) -> Fraction:
    return Fraction(
        -12 * (t * t - 2 * v * t - t + v * v) * (v - 1) * v**t
        + 45 * (v - 1) ** 2 * t**4
        - 4 * (21 * v - 26) * (v + 1) * (v - 1) * t**3
        + 6 * (9 * v**3 + v * v - 17 * v - 14) * (v - 1) * t * t
        - 12 * (v**4 - 2 * v * v - 4 * v - 2) * (v - 1) * t
        - (3 * v - 1) * (v + 6) * (v - 1) * v
    )


def _a4(v: int, t: int) -> Fraction:
    return Fraction(
        2 * (v + 1) * v**t
        + (v - 1) ** 2 * t * t
        - 2 * (v - 1) * (v * v - v + 2) * t
        + v**4
        - 2 * v**3
        + v * v
        - 2 * v
        - 2,
        v - 1,
    )


def _b4(v: int, t: int) -> Fraction:
    return Fraction(
        12 * (v * v * t - t + 2 * v) * v**t
        - 3 * (v - 1) ** 3 * t**4
        + 4 * (v - 1) ** 2 * (v + 1) * (3 * v - 2) * t**3
        - 18 * (v * v - v + 1) * (v + 2) * (v - 1) ** 2 * t * t
        + 12 * (v**3 + v * v + 2) * (v * v - v - 1) * (v - 1) * t
        - (3 * v**6 - 5 * v**5 - v**4 + 5 * v**3 - 2 * v * v + 24) * v,
        v - 1,
    )


def _a5(v: int, t: int) -> Fraction:
    return Fraction(2 * v**t + (v - 1) * t * t - 2 * (v * v - v + 2) * t + (v * v - 2 * v + 2) * (v + 1))


def _b5(v: int, t: int) -> Fraction:
    return Fraction(
        12 * (v - 1) * t * v**t
        - 3 * (v - 1) ** 2 * t**4
        + 4 * (v - 1) * (v + 1) * (3 * v - 2) * t**3
        - 18 * (v * v - v + 1) * (v + 2) * (v - 1) * t * t
        + 12 * (v**4 + v**3 - v * v + 2) * (v - 1) * t
        - (3 * v - 2) * (v + 1) * (v - 1) * v**3
    )


def _a6(v: int, t: int) -> int:
    return (v - 1) * (v ** (t + 2) - (v - 1) ** 3 * t * t + 2 * (v - 1) ** 2 * t - (v - 1) * (v + 1))


def _b6(v: int, t: int) -> int:
    w = v - 1
    return (
        v ** (t + 2) * (-(w**2) * t * t + w * (v + 3) * t - 2)
        + 3 * w**5 * t**4
        - 4 * w**4 * (v + 4) * t**3
        + w**3 * (v * v + 8 * v + 31) * t * t
        - 2 * w**2 * (v * v + 2 * v + 13) * t
        + 8 * w
    )


@dataclass(frozen=True)
class TupleMomentApproximations:
    """Second-order expansions in 1/n; O(1/n) accurate, not certified bounds."""

    e_lower: float
    e_upper: float
    var_lower: float
    var_upper: float
    var_upper_nonoverlap: float


@dataclass(frozen=True)
class RunMomentApproximations:
    e_leading: float
    var_leading: float


def tuple_moment_approximations(v: int, n: int, t: int) -> TupleMomentApproximations:
    _validate_balanced_shape(v, n)
    if t < 1:
        raise ParameterError(f"tuple length must be positive, got {t}")
    if n <= 2 * t - 2:
        raise UnsupportedRegimeError(f"need n > 2t-2, got n={n}, t={t}")
    lead = Fraction(n, v**t)
    e_lower = lead * (1 + Fraction(_a1(v, t), 2 * n) + Fraction(_b1(v, t), 24 * n * n))
    if t < v:
        # every symbol of z can be distinct, which sharpens the maximum
        upper_a = t * (t - 1)
        upper_b = (3 * t - 2) * (t + 1) * (t - 1) * t
    else:
        upper_a = t * (v - 1)
        upper_b = (3 * (v + 1) * t * t - 2 * (v + 1) * t + (3 * v * v + 5 * v - 6) * v) * (v - 1)
    e_upper = lead * (1 + Fraction(upper_a, 2 * n) + Fraction(upper_b, 24 * n * n))
    scale = Fraction(n, v ** (2 * t))
    var_lower = scale * (_a3(v, t) / 2 + _b3(v, t) / (24 * n))
    var_upper = scale * (_a4(v, t) / 2 + _b4(v, t) / (24 * n))
    var_nonoverlap = scale * (_a5(v, t) / 2 + _b5(v, t) / (24 * n))
    return TupleMomentApproximations(
        float(e_lower), float(e_upper), float(var_lower), float(var_upper), float(var_nonoverlap)
    )


def run_moment_approximations(v: int, n: int, t: int) -> RunMomentApproximations:
    if v < 2 or n < 1 or t < 1:
        raise ParameterError(f"need v >= 2, n >= 1, t >= 1; got v={v}, n={n}, t={t}")
    w = v - 1
    e = Fraction(n * w, v ** (t + 2)) * (w - Fraction(w * w * t * t - (v + 3) * w * t + 2, 2 * n))
    var = Fraction(n * w, v ** (2 * t + 4)) * (_a6(v, t) + Fraction(_b6(v, t), 2 * n))
    return RunMomentApproximations(float(e), float(var))
