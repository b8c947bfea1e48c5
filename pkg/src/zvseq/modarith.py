"""Modular arithmetic, primality, factorization and primitive roots."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache

from .errors import ParameterError

# Deterministic Miller-Rabin: the first 12 primes are a witness set for every
# n < 3.3e24, which covers all 64-bit inputs.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_TRIAL_LIMIT = 10**6


@dataclass(frozen=True)
class Factorization:
    n: int
    prime_powers: tuple[tuple[int, int], ...]

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(q for q, _ in self.prime_powers)

    def divisors(self) -> list[int]:
        divs = [1]
        for q, e in self.prime_powers:
            divs = [d * q**k for d in divs for k in range(e + 1)]
        return sorted(divs)

    def __iter__(self):
        return iter(self.prime_powers)


def mod_pow(base: int, exp: int, modulus: int) -> int:
    """Return ``base**exp % modulus`` by square-and-multiply."""
    if modulus < 2:
        raise ParameterError(f"modulus must be >= 2, got {modulus}")
    if exp < 0:
        raise ParameterError(f"exponent must be non-negative, got {exp}")
    # builtin three-argument pow is square-and-multiply
    return pow(base, exp, modulus)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=1)
def _small_primes() -> tuple[int, ...]:
    sieve = bytearray([1]) * (_TRIAL_LIMIT + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(_TRIAL_LIMIT) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, _TRIAL_LIMIT + 1, i)))
    return tuple(i for i, flag in enumerate(sieve) if flag)


def primes_in_range(lo: int, hi: int) -> list[int]:
    """All primes p with lo <= p <= hi, by a segmented sieve."""
    lo = max(lo, 2)
    if hi < lo:
        return []
    size = hi - lo + 1
    seg = bytearray([1]) * size
    root = math.isqrt(hi)
    if root > _TRIAL_LIMIT:
        return [p for p in range(lo, hi + 1) if is_prime(p)]
    for q in _small_primes():
        if q > root:
            break
        start = max(q * q, (lo + q - 1) // q * q)
        seg[start - lo :: q] = bytearray(len(range(start, hi + 1, q)))
    return [lo + i for i, flag in enumerate(seg) if flag]


def _pollard_brent(n: int, rng: random.Random) -> int:
    """Return a non-trivial factor of the odd composite n."""
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def factorize(n: int) -> Factorization:
    """Complete factorization: trial division to 10**6, then Pollard-Brent rho."""
    if n < 1:
        raise ParameterError(f"cannot factor {n}")
    counts: dict[int, int] = {}
    m = n
    for q in _small_primes():
        if q * q > m:
            break
        while m % q == 0:
            counts[q] = counts.get(q, 0) + 1
            m //= q
    if m > 1:
        rng = random.Random(m)  # seeded so factorize is a pure function
        stack = [m]
        while stack:
            f = stack.pop()
            if is_prime(f):
                counts[f] = counts.get(f, 0) + 1
            else:
                d = _pollard_brent(f, rng)
                stack.extend((d, f // d))
    return Factorization(n, tuple(sorted(counts.items())))


def mobius(n: int) -> int:
    if n < 1:
        raise ParameterError(f"mobius undefined for {n}")
    fac = factorize(n)
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if len(fac.prime_powers) % 2 else 1


def euler_phi(n: int) -> int:
    result = n
    for q, _ in factorize(n):
        result -= result // q
    return result


def is_primitive_root(g: int, p: int) -> bool:
    if not is_prime(p):
        raise ParameterError(f"{p} is not prime")
    g %= p
    if g == 0:
        return False
    if p == 2:
        return g == 1
    return all(pow(g, (p - 1) // q, p) != 1 for q in factorize(p - 1).primes)


def primitive_roots(p: int, count: int) -> list[int]:
    """The ``count`` smallest primitive roots of p, ascending from 2."""
    if not is_prime(p):
        raise ParameterError(f"{p} is not prime")
    qs = factorize(p - 1).primes
    found: list[int] = []
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in qs):
            found.append(g)
            if len(found) == count:
                break
    return found
