"""Exact rationals, p-adic valuations and harmonic-number primitives.

Everything downstream works over ``ExactRational`` (a reduced GMP rational).
Valuations are plain Python integers, with ``INF`` standing for the valuation
of zero so that membership tests ``x in c*Z_p`` accept ``x = 0``.
"""
from __future__ import annotations

import math
import threading
from functools import lru_cache
from typing import Iterable, Union

import gmpy2
from gmpy2 import mpq, mpz

ExactRational = type(mpq(0))
Valuation = Union[int, float]

INF = math.inf

Number = Union[int, "mpq"]


def Q(num, den=1) -> ExactRational:
    """Build a reduced exact rational."""
    return mpq(num, den)


@lru_cache(maxsize=65536)
def is_prime(p: int) -> bool:
    return p >= 2 and bool(gmpy2.is_prime(p, 50))


def _require_prime(p) -> None:
    if not isinstance(p, (int, type(mpz(0)))) or not is_prime(int(p)):
        raise ValueError(f"p must be prime, got {p!r}")


def primes_up_to(n: int) -> list[int]:
    """Primes p <= n by a plain sieve."""
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, n + 1, i)))
    return [i for i, flag in enumerate(sieve) if flag]


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of a positive integer, by trial division."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


def factor_small(n: int, bound: int = 100_000) -> tuple[dict[int, int], int]:
    """Partial factorisation of ``n > 0`` over primes below ``bound``.

    Returns the factor dictionary and the unfactored cofactor (1 if complete).
    """
    n = int(n)
    out: dict[int, int] = {}
    for p in primes_up_to(min(bound, math.isqrt(n) + 1)):
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
    if n > 1 and (n < bound * bound or is_prime(n)):
        out[n] = out.get(n, 0) + 1
        n = 1
    return out, n


def vp_int(n, p: int) -> Valuation:
    """Exponent of the prime ``p`` in the integer ``n`` (``INF`` for 0)."""
    _require_prime(p)
    n = mpz(n)
    if n == 0:
        return INF
    return int(gmpy2.remove(n, p)[1])


def vp_rat(x, p: int) -> Valuation:
    """p-adic valuation of a rational (``INF`` for 0)."""
    x = mpq(x)
    if x == 0:
        _require_prime(p)
        return INF
    return vp_int(x.numerator, p) - vp_int(x.denominator, p)


def in_multiple(x, c, p: int) -> bool:
    """Whether ``x`` lies in ``c * Z_p``, i.e. ``v_p(x) >= v_p(c)``."""
    return vp_rat(x, p) >= vp_rat(c, p)


def is_integral(x) -> bool:
    return mpq(x).denominator == 1


def legendre_vp_factorial(n: int, p: int) -> int:
    """v_p(n!) = sum_k floor(n / p^k), without forming n!."""
    if n < 0:
        raise ValueError("n must be non-negative")
    _require_prime(p)
    total = 0
    n //= p
    while n:
        total += n
        n //= p
    return total


@lru_cache(maxsize=4096)
def factorial(n: int) -> int:
    return int(gmpy2.fac(n))


# -- harmonic numbers ---------------------------------------------------------

DEFAULT_HARMONIC_CACHE = 10_000


class _HarmonicCache:
    """Prefix table H_0..H_bound, grown lazily under a single writer lock."""

    def __init__(self, bound: int = DEFAULT_HARMONIC_CACHE):
        self.bound = bound
        self._table = [mpq(0)]
        self._lock = threading.Lock()

    def get(self, n: int):
        if n < len(self._table):
            return self._table[n]
        if n > self.bound:
            top = self.get(self.bound)
            return top + _reciprocal_range_sum(self.bound + 1, n + 1)
        with self._lock:
            table = self._table
            h = table[-1]
            for j in range(len(table), n + 1):
                h = h + mpq(1, j)
                table.append(h)
        return self._table[n]


def _reciprocal_range_sum(a: int, b: int):
    """sum_{a <= j < b} 1/j by balanced (binary-splitting) summation."""

    def split(lo, hi):
        if hi - lo == 1:
            return mpz(1), mpz(lo)
        mid = (lo + hi) // 2
        p1, q1 = split(lo, mid)
        p2, q2 = split(mid, hi)
        return p1 * q2 + p2 * q1, q1 * q2

    if b <= a:
        return mpq(0)
    num, den = split(a, b)
    return mpq(num, den)


_HARMONIC = _HarmonicCache()


def set_harmonic_cache_bound(bound: int) -> None:
    """Reconfigure the prefix-table bound (call before parallel use)."""
    global _HARMONIC
    _HARMONIC = _HarmonicCache(bound)


def harmonic(n: int):
    """H_n = 1 + 1/2 + ... + 1/n, with H_0 = 0."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return _HARMONIC.get(n)


def harmonic_shifted(x, m: int):
    """H(x, m) = sum_{n=0}^{m-1} 1/(x+n) for rational x > 0."""
    x = mpq(x)
    if x <= 0:
        raise ValueError("x must be positive")
    total = mpq(0)
    for n in range(m):
        total += 1 / (x + n)
    return total


def harmonic_power(n: int, alpha: int):
    """H_n^(alpha) = sum_{j=1}^n 1/j^alpha."""
    if alpha < 1:
        raise ValueError("alpha must be >= 1")
    if alpha == 1:
        return harmonic(n)
    return sum((mpq(1, j**alpha) for j in range(1, n + 1)), mpq(0))


def gamma_p(n: int, p: int) -> int:
    """Morita's p-adic gamma on positive integers: (-1)^n prod_{k<n, p∤k} k."""
    if n < 1:
        raise ValueError("gamma_p is only defined here for n >= 1")
    _require_prime(p)
    prod = mpz(1)
    for k in range(1, n):
        if k % p:
            prod *= k
    return int(-prod if n % 2 else prod)


def theta(L: int) -> int:
    """Denominator of H_L, via L!/gcd(L!, L! H_L)."""
    if L < 1:
        raise ValueError("L must be >= 1")
    f = factorial(L)
    return f // math.gcd(f, int(f * harmonic(L)))


def theta_from_valuations(L: int) -> int:
    """Same quantity as :func:`theta` via prod_{p<=L} p^{-min(0, v_p(H_L))}."""
    h = harmonic(L)
    out = 1
    for p in primes_up_to(L):
        out *= p ** (-min(0, vp_rat(h, p)))
    return out


# -- p-adic reciprocal sums ---------------------------------------------------


class PrecisionExhausted(ArithmeticError):
    """A fixed-precision p-adic accumulator could not resolve a valuation."""


class PadicHarmonicTable:
    """Prefix sums of p^E/n modulo p^(E+K), for n <= n_max.

    ``E = floor(log_p n_max)`` clears every denominator, so each entry is an
    exact residue of p^E * H_n. Differences give exact valuations of
    H_a - H_b as long as they do not vanish at working precision.
    """

    def __init__(self, p: int, n_max: int, precision: int = 40):
        _require_prime(p)
        self.p = p
        self.n_max = n_max
        self.precision = precision
        e = 0
        while p ** (e + 1) <= n_max:
            e += 1
        self.scale = e
        self.modulus = p ** (e + precision)
        mod = self.modulus
        pw = [p ** (e - v) for v in range(e + 1)]
        sums = [0] * (n_max + 1)
        s = 0
        for n in range(1, n_max + 1):
            u, v = n, 0
            while u % p == 0:
                u //= p
                v += 1
            s = (s + pw[v] * pow(u, -1, mod)) % mod
            sums[n] = s
        self._sums = sums

    def vp_difference(self, a: int, b: int, shift=0) -> Valuation:
        """v_p(H_a - H_b - shift) for integer ``shift``."""
        if max(a, b) > self.n_max:
            raise ValueError("index beyond table")
        d = (self._sums[a] - self._sums[b] - shift * self.p**self.scale) % self.modulus
        if d == 0:
            if a == b and shift == 0:
                return INF
            raise PrecisionExhausted(f"H_{a}-H_{b} vanishes mod p^{self.precision}")
        return int(gmpy2.remove(mpz(d), self.p)[1]) - self.scale

    def vp_harmonic(self, n: int, shift=0) -> Valuation:
        return self.vp_difference(n, 0, shift)


@lru_cache(maxsize=64)
def padic_harmonic_table(p: int, n_max: int, precision: int = 40) -> PadicHarmonicTable:
    return PadicHarmonicTable(p, n_max, precision)


def vp_harmonic_difference(a: int, b: int, p: int) -> Valuation:
    """Exact v_p(H_a - H_b); uses rationals inside the prefix cache, else p-adics."""
    if a == b:
        return INF
    if max(a, b) <= _HARMONIC.bound:
        return vp_rat(harmonic(a) - harmonic(b), p)
    top = max(a, b)
    n_max = 1 << (top - 1).bit_length()
    return padic_harmonic_table(p, n_max).vp_difference(a, b)


def vp_factorial_ratio(num: Iterable[int], den: Iterable[int], p: int) -> int:
    """v_p(prod n_i! / prod d_j!) by Legendre sums."""
    return sum(legendre_vp_factorial(n, p) for n in num) - sum(
        legendre_vp_factorial(d, p) for d in den
    )


def sum_inverses_mod(p: int, n: int, modulus: int) -> int:
    """sum_{j=1}^{n} j^{-1} mod ``modulus`` for j coprime to p."""
    s = 0
    for j in range(1, n + 1):
        if j % p:
            s += pow(j, -1, modulus)
    return s % modulus
