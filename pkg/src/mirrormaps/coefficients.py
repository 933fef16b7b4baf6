"""Coefficient families: factorial ratios, Zudilin's generalisation, and friends.

``bN`` and ``bVec`` are the plain multinomial coefficients (Nm)!/m!^N and
their products. ``bbN``/``bbVec`` are the Zudilin coefficients built from
the residues coprime to N; they can be evaluated either as a Pochhammer
product or as a ratio of factorials, and the two must agree.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Callable, Sequence

from gmpy2 import mpq

from .padic import (
    factorial,
    harmonic,
    harmonic_shifted,
    prime_factors,
    vp_factorial_ratio,
)

PLAIN = "plain"
ZUDILIN = "zudilin"
FAMILIES = (PLAIN, ZUDILIN)


# -- plain multinomials --------------------------------------------------------


@lru_cache(maxsize=1 << 16)
def bN(N: int, m: int) -> int:
    """(Nm)!/m!^N."""
    if N < 1 or m < 0:
        raise ValueError("need N >= 1 and m >= 0")
    return factorial(N * m) // factorial(m) ** N


def vp_bN(N: int, m: int, p: int) -> int:
    """v_p((Nm)!/m!^N) by Legendre sums."""
    return vp_factorial_ratio([N * m], [m] * N, p)


def bVec(Nvec: Sequence[int], m: int) -> int:
    out = 1
    for N in Nvec:
        out *= bN(N, m)
    return out


def capital_M(Nvec: Sequence[int]) -> int:
    """Product of N_j!; every bVec(Nvec, m) with m >= 1 is a multiple of it."""
    out = 1
    for N in Nvec:
        out *= factorial(N)
    return out


# -- Zudilin data --------------------------------------------------------------


def euler_phi(N: int) -> int:
    out = N
    for p in prime_factors(N):
        out = out // p * (p - 1)
    return out


@dataclass(frozen=True)
class ZudilinData:
    N: int
    phi: int
    residues: tuple
    C: int
    alpha: tuple
    beta: tuple

    def normalize(self) -> tuple[tuple, tuple]:
        """Cancel entries common to alpha and beta (display form)."""
        a, b = Counter(self.alpha), Counter(self.beta)
        common = a & b
        a.subtract(common)
        b.subtract(common)
        na = tuple(sorted(a.elements(), reverse=True))
        nb = tuple(sorted(b.elements(), reverse=True))
        return na, nb

    def to_dict(self) -> dict:
        na, nb = self.normalize()
        return {
            "N": str(self.N),
            "phi": str(self.phi),
            "residues": [str(r) for r in self.residues],
            "C": str(self.C),
            "alpha": [str(a) for a in self.alpha],
            "beta": [str(b) for b in self.beta],
            "alpha_reduced": [str(a) for a in na],
            "beta_reduced": [str(b) for b in nb],
        }


@lru_cache(maxsize=None)
def zudilin_data(N: int) -> ZudilinData:
    """Residues, C_N and the alpha/beta factorial-ratio vectors for N.

    alpha collects N divided by products of an even number of distinct prime
    factors of N, beta the odd ones; beta is then padded with 1's until both
    vectors have the same sum.
    """
    if N < 1:
        raise ValueError("N must be positive")
    primes = prime_factors(N)
    phi = euler_phi(N)
    residues = tuple(r for r in range(1, N + 1) if math.gcd(r, N) == 1)
    C = N**phi
    for p in primes:
        C *= p ** (phi // (p - 1))
    alpha, beta = [], []
    for size in range(len(primes) + 1):
        for subset in combinations(primes, size):
            q = N // math.prod(subset)
            (alpha if size % 2 == 0 else beta).append(q)
    pad = sum(alpha) - sum(beta)
    if pad < 0:
        raise ArithmeticError(f"negative padding for N={N}")
    beta.extend([1] * pad)
    return ZudilinData(
        N,
        phi,
        residues,
        C,
        tuple(sorted(alpha, reverse=True)),
        tuple(sorted(beta, reverse=True)),
    )


def _pochhammer(x, m: int):
    out = mpq(1)
    for i in range(m):
        out *= x + i
    return out


@lru_cache(maxsize=1 << 16)
def _bbN_factorial(N: int, m: int) -> int:
    data = zudilin_data(N)
    num = math.prod(factorial(a * m) for a in data.alpha)
    den = math.prod(factorial(b * m) for b in data.beta)
    q, r = divmod(num, den)
    if r:
        raise ArithmeticError(f"Zudilin coefficient not integral at N={N}, m={m}")
    return q


def bbN(N: int, m: int, mode: str = "factorial"):
    """Zudilin coefficient C_N^m prod_j (r_j/N)_m / m!.

    ``mode="pochhammer"`` evaluates that product directly as one rational;
    ``mode="factorial"`` uses prod (alpha_j m)! / prod (beta_j m)!.
    """
    if m < 0:
        raise ValueError("m must be non-negative")
    if mode == "factorial":
        return mpq(_bbN_factorial(N, m))
    if mode == "pochhammer":
        data = zudilin_data(N)
        out = mpq(data.C) ** m
        fm = factorial(m)
        for r in data.residues:
            out *= _pochhammer(mpq(r, N), m) / fm
        return out
    raise ValueError(f"unknown mode {mode!r}")


def vp_bbN(N: int, m: int, p: int) -> int:
    data = zudilin_data(N)
    return vp_factorial_ratio([a * m for a in data.alpha], [b * m for b in data.beta], p)


def bbVec(Nvec: Sequence[int], m: int) -> int:
    out = 1
    for N in Nvec:
        out *= _bbN_factorial(N, m)
    return out


@lru_cache(maxsize=1 << 16)
def _hN_alphabeta(N: int, m: int):
    data = zudilin_data(N)
    out = mpq(0)
    for a in data.alpha:
        out += a * harmonic(a * m)
    for b in data.beta:
        out -= b * harmonic(b * m)
    return out


def hN(N: int, m: int, mode: str = "alphabeta"):
    """sum_j H(r_j/N, m) - phi(N) H_m, in either of its two forms."""
    if mode == "alphabeta":
        return _hN_alphabeta(N, m)
    if mode == "residues":
        data = zudilin_data(N)
        out = -data.phi * harmonic(m)
        for r in data.residues:
            out += harmonic_shifted(mpq(r, N), m)
        return out
    raise ValueError(f"unknown mode {mode!r}")


def delta(N: int, x) -> int:
    """sum floor(alpha_i x) - sum floor(beta_i x)."""
    x = mpq(x)
    data = zudilin_data(N)

    def fl(c):
        y = c * x
        return y.numerator // y.denominator

    return sum(fl(a) for a in data.alpha) - sum(fl(b) for b in data.beta)


def divisor_vector(N: int) -> tuple:
    """Divisors of N other than 1, in decreasing order."""
    return tuple(d for d in range(N, 1, -1) if N % d == 0)


# -- dispatch ------------------------------------------------------------------


def coefficient(Nvec: Sequence[int], m: int, family: str = PLAIN) -> int:
    """B_N(m) or its Zudilin analogue, with the convention B(n) = 0 for n < 0."""
    if m < 0:
        return 0
    if family == PLAIN:
        return bVec(Nvec, m)
    if family == ZUDILIN:
        return bbVec(Nvec, m)
    raise ValueError(f"unknown family {family!r}")


def coefficient_function(Nvec: Sequence[int], family: str = PLAIN) -> Callable[[int], int]:
    Nvec = tuple(Nvec)
    return lambda m: coefficient(Nvec, m, family)


def vp_coefficient(Nvec: Sequence[int], m: int, p: int, family: str = PLAIN) -> int:
    if family == PLAIN:
        return sum(vp_bN(N, m, p) for N in Nvec)
    return sum(vp_bbN(N, m, p) for N in Nvec)


@dataclass(frozen=True)
class HyperSpec:
    """Parameters selecting one mirror-map instance."""

    Nvec: tuple
    L: int | None = None
    family: str = PLAIN

    def __post_init__(self):
        object.__setattr__(self, "Nvec", tuple(int(n) for n in self.Nvec))
        if not self.Nvec or min(self.Nvec) < 1:
            raise ValueError("Nvec must be a non-empty vector of positive integers")
        if self.family not in FAMILIES:
            raise ValueError(f"family must be one of {FAMILIES}")
        if self.L is not None and not 1 <= self.L <= max(self.Nvec):
            raise ValueError(f"L must lie in 1..{max(self.Nvec)}, got {self.L}")

    def to_dict(self) -> dict:
        return {
            "Nvec": [str(n) for n in self.Nvec],
            "L": None if self.L is None else str(self.L),
            "family": self.family,
        }
