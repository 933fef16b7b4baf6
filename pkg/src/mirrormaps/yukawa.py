"""Yukawa coupling in the q coordinate and its Lambert-series content."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from gmpy2 import mpq

from .maps import build_plain_vector_q
from .series import TruncSeries, compose, reversion

QUINTIC = (5,)


@dataclass(frozen=True)
class YukawaResult:
    K: TruncSeries
    k: list
    n: list
    integral: list

    def to_dict(self) -> dict:
        return {
            "order": str(self.K.order),
            "K": [str(c) for c in self.K.coeffs],
            "k_d": [str(x) for x in self.k],
            "n_d": [str(x) for x in self.n],
            "n_d_integral": list(self.integral),
        }


def threefold_dimension(Nvec: Sequence[int]) -> int:
    return sum(Nvec) - len(Nvec) - 1


def yukawa_K(Nvec: Sequence[int], order: int) -> TruncSeries:
    """K(q) = prod N_j / (1 - lam z) * F(z)^-2 * (q z'/z)^d with z = z(q).

    The map is built to ``order``; composition and the q z'/z factor cost one
    order, so K is returned at ``order - 1``.
    """
    if order < 2:
        raise ValueError("order must be at least 2")
    Nvec = tuple(Nvec)
    inst = build_plain_vector_q(Nvec, order)
    z = reversion(inst.q)
    lam = math.prod(n**n for n in Nvec)
    d = threefold_dimension(Nvec)
    F_of_z = compose(inst.F, z)
    # q z'(q)/z(q) = theta(z)/z, computed after removing the common factor q
    log_deriv = z.theta().shift_down(1) / z.shift_down(1)
    out_order = order - 1
    front = (1 - lam * z).truncate(out_order).inverse() * math.prod(Nvec)
    K = front * F_of_z.truncate(out_order).inverse() ** 2 * log_deriv**d
    return K.truncate(out_order)


def lambert_decompose(K: TruncSeries) -> list:
    """k_1..k_D with K - K(0) = sum k_d q^d/(1 - q^d)."""
    k = [mpq(0)] * (K.order + 1)
    for d in range(1, K.order + 1):
        c = K[d]
        for e in range(1, d // 2 + 1):
            if d % e == 0:
                c -= k[e]
        k[d] = c
    return k[1:]


def lambert_synthesize(k: Sequence, constant=0) -> TruncSeries:
    """constant + sum_d k_d q^d/(1 - q^d), to order len(k)."""
    D = len(k)
    c = [mpq(constant)] + [mpq(0)] * D
    for e, ke in enumerate(k, start=1):
        for m in range(e, D + 1, e):
            c[m] += ke
    return TruncSeries(c, D)


def instanton_numbers(Nvec: Sequence[int], D: int) -> YukawaResult:
    """n_d = k_d / d^3 for d = 1..D; needs a threefold vector."""
    Nvec = tuple(Nvec)
    if threefold_dimension(Nvec) != 3:
        raise ValueError(f"{Nvec} is not a threefold vector: sum N_j - k - 1 != 3")
    K = yukawa_K(Nvec, D + 1)
    k = lambert_decompose(K)
    n = [kd / d**3 for d, kd in enumerate(k, start=1)]
    integral = [x.denominator == 1 for x in n]
    if Nvec == QUINTIC and not all(integral):
        bad = integral.index(False) + 1
        raise ArithmeticError(f"quintic instanton number n_{bad} is not an integer")
    return YukawaResult(K, k, n, integral)
