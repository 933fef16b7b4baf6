"""Executable instances of the congruences behind the integrality theorems.

Every check evaluates both sides exactly (or with an exact p-adic residue
when harmonic indices get large) and compares an achieved valuation with a
target. Hypotheses are validated strictly: out-of-range parameters raise
``HypothesisError`` instead of producing a meaningless valuation.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

from gmpy2 import mpq

from .certify import is_wolstenholme_prime, omega_cap, xi
from .coefficients import (
    PLAIN,
    ZUDILIN,
    bN,
    bbVec,
    capital_M,
    coefficient,
    vp_bN,
    vp_coefficient,
)
from .maps import build_F_vec, build_G_L
from .padic import (
    INF,
    _require_prime,
    factorial,
    gamma_p,
    harmonic,
    legendre_vp_factorial,
    primes_up_to,
    theta,
    vp_harmonic_difference,
    vp_int,
    vp_rat,
)
from .report import CertReport
from .series import TruncSeries, min_valuation_report, substitute_pth_power


class HypothesisError(ValueError):
    """Parameters fall outside a lemma's hypotheses."""


def _require(cond: bool, what: str) -> None:
    if not cond:
        raise HypothesisError(f"hypothesis fails: {what}")


# -- the sums C, C~ and S --------------------------------------------------------


def c_sum(Nvec: Sequence[int], L: int, p: int, a: int, K: int, family: str = PLAIN):
    """sum_{j<=K} B(a+jp) B(K-j) (H_{L(K-j)} - p H_{La+Ljp})."""
    _require_prime(p)
    if not 0 <= a < p:
        raise ValueError("need 0 <= a < p")
    Nvec = tuple(Nvec)
    total = mpq(0)
    for j in range(K + 1):
        b = coefficient(Nvec, a + j * p, family) * coefficient(Nvec, K - j, family)
        if b:
            total += b * (harmonic(L * (K - j)) - p * harmonic(L * a + L * j * p))
    return total


def c_tilde(N: int, k: int, p: int, a: int, K: int):
    """The analogue of C for (H_{Nm} - H_m) weights with Nvec = (N,..,N)."""
    _require_prime(p)
    if not 0 <= a < p:
        raise ValueError("need 0 <= a < p")

    def w(m):
        return harmonic(N * m) - harmonic(m)

    total = mpq(0)
    for j in range(K + 1):
        b = (bN(N, a + j * p) * bN(N, K - j)) ** k
        total += b * (w(K - j) - p * w(a + j * p))
    return total


def s_sum(Nvec: Sequence[int], p: int, a: int, K: int, s: int, m: int, family: str = PLAIN):
    """Block sum over j in [m p^s, (m+1) p^s) of B(a+jp)B(K-j) - B(j)B(a+(K-j)p).

    B vanishes at negative arguments (through ``coefficient``), so only
    j <= K contribute.
    """
    _require_prime(p)
    if not 0 <= a < p:
        raise ValueError("need 0 <= a < p")
    Nvec = tuple(Nvec)

    def B(n):
        return coefficient(Nvec, n, family)

    lo, hi = m * p**s, min((m + 1) * p**s - 1, K)
    total = 0
    for j in range(lo, hi + 1):
        total += B(a + j * p) * B(K - j) - B(j) * B(a + (K - j) * p)
    return total


def rearrangement_sides(Nvec, L: int, p: int, a: int, K: int, family: str = PLAIN):
    """Both sides of Dwork's regrouping of sum_j H_{Lj}(...) into Y_{m,s} blocks."""
    Nvec = tuple(Nvec)

    def B(n):
        return coefficient(Nvec, n, family)

    lhs = mpq(0)
    for j in range(K + 1):
        lhs += harmonic(L * j) * (B(a + j * p) * B(K - j) - B(j) * B(a + (K - j) * p))
    r = 0
    while p**r <= K:
        r += 1
    rhs = mpq(0)
    for s in range(r + 1):
        for m in range(p ** (r + 1 - s)):
            if m * p**s > K:
                break
            S = s_sum(Nvec, p, a, K, s, m, family)
            if S:
                rhs += (harmonic(L * m * p**s) - harmonic(L * (m // p) * p ** (s + 1))) * S
    return lhs, rhs


def rearrangement_check(Nvec, L, p, a, K, family=PLAIN) -> bool:
    lhs, rhs = rearrangement_sides(Nvec, L, p, a, K, family)
    return lhs == rhs


# -- series-level criteria -----------------------------------------------------


def lemma4_series(f: TruncSeries, g: TruncSeries, p: int) -> TruncSeries:
    return f * substitute_pth_power(g, p) - p * (substitute_pth_power(f, p) * g)


def lemma4_check(f: TruncSeries, g: TruncSeries, tau, p: int, order: int | None = None) -> CertReport:
    """f g(z^p) - p f(z^p) g must lie in p tau z Z_p[[z]]."""
    _require_prime(p)
    if f[0] != 1 or g[0] != 0:
        raise ValueError("need f(0) = 1 and g(0) = 0")
    if order is not None:
        f, g = f.truncate(order), g.truncate(order)
    d = lemma4_series(f, g, p)
    target = vp_rat(p * mpq(tau), p)
    got = min_valuation_report(d, p, 1)
    if got.value >= target:
        return CertReport(True, d.order, witness_valuation=got.value,
                          detail=f"min valuation {got.value} >= {target}")
    return CertReport(False, d.order, witness_index=got.index, witness_valuation=got.value,
                      detail=f"valuation {got.value} < {target}")


def dieudonne_dwork_check(s: TruncSeries, p: int, order: int | None = None) -> CertReport:
    """S(z^p)/S(z)^p must lie in 1 + p z Z_p[[z]]."""
    _require_prime(p)
    if s[0] != 1:
        raise ValueError("need constant term 1")
    if order is not None:
        s = s.truncate(order)
    ratio = substitute_pth_power(s, p) / (s**p)
    d = ratio - 1
    got = min_valuation_report(d, p, 0)
    if got.value >= 1:
        return CertReport(True, s.order, witness_valuation=got.value, detail="ratio in 1 + pzZ_p[[z]]")
    return CertReport(False, s.order, witness_index=got.index, witness_valuation=got.value,
                      detail=f"valuation {got.value} < 1")


def dwork_conditions_check(family: str, Nvec, p: int, s_max: int = 2, n_max: int = 5) -> CertReport:
    """Dwork's three conditions with A_r = g_r = the coefficient sequence.

    (iii): A(v+up+np^{s+1})/A(v+up) - A(u+np^s)/A(u) in p^{s+1} A(n)/A(v+up) Z_p
    for u < p^s, v < p, n <= n_max, s <= s_max.
    """
    _require_prime(p)
    Nvec = tuple(Nvec)

    def A(m):
        return coefficient(Nvec, m, family)

    if vp_int(A(0), p) != 0:
        return CertReport(False, 0, witness_index=0, detail="condition (i) fails")
    checked = 0
    for s in range(s_max + 1):
        for u in range(p**s):
            Au = A(u)
            for v in range(p):
                base = v + u * p
                Ab = A(base)
                for n in range(n_max + 1):
                    diff = mpq(A(base + n * p ** (s + 1)), Ab) - mpq(A(u + n * p**s), Au)
                    target = s + 1 + vp_int(A(n), p) - vp_int(Ab, p)
                    checked += 1
                    if vp_rat(diff, p) < target:
                        return CertReport(
                            False, s_max, witness_index=base + n * p ** (s + 1),
                            witness_valuation=vp_rat(diff, p),
                            detail=f"condition (iii) fails at s={s}, u={u}, v={v}, n={n}",
                        )
    return CertReport(True, s_max, detail=f"{checked} tuples satisfy condition (iii)")


# -- individual lemma instances --------------------------------------------------


@dataclass(frozen=True)
class CongruenceInstance:
    """Achieved versus target valuation for one parameter draw.

    ``expected`` is False for the failing direction of an "if and only if"
    statement; such an instance passes when the target is *not* reached.
    """

    lemma_id: str
    params: dict
    target: float
    achieved: float
    expected: bool = True

    @property
    def passed(self) -> bool:
        return (self.achieved >= self.target) == self.expected

    def to_dict(self) -> dict:
        def fmt(v):
            if v == INF:
                return "inf"
            if v == -INF:
                return "-inf"
            return str(int(v))

        return {
            "lemma_id": self.lemma_id,
            "params": {k: (list(map(str, v)) if isinstance(v, tuple) else str(v))
                       for k, v in self.params.items()},
            "target": fmt(self.target),
            "achieved": fmt(self.achieved),
            "expected": self.expected,
            "passed": self.passed,
        }


def _vp_hdiff(a: int, b: int, p: int):
    return vp_harmonic_difference(a, b, p)


def _nvec(params) -> tuple:
    if "Nvec" in params:
        return tuple(params["Nvec"])
    return (params["N"],) * params.get("k", 1)


def _check_L(Nvec, L):
    _require(1 <= L <= max(Nvec), "1 <= L <= max(Nvec)")


def _lemma_J(P):
    p, J = P["p"], P["J"]
    _require(J >= 0, "J >= 0")
    return 1, vp_rat(p * harmonic(J) - harmonic(J // p), p)


def _lemma_W1(P):
    p, r = P["p"], P["r"]
    _require(p >= 5, "p >= 5")
    _require(r >= 1, "r >= 1")
    return 2, _vp_hdiff(r * p - 1, r * p - p, p)


def _lemma_W2(P):
    p, J = P["p"], P["J"]
    _require(p >= 3, "p >= 3")
    _require(J >= 1 and J % p == 0, "p divides J >= 1")
    return (3 if p >= 5 else 2), vp_rat(p * harmonic(J) - harmonic(J // p), p)


def _lemma_W3(P):
    p, J = P["p"], P["J"]
    _require(p >= 5, "p >= 5")
    _require(J >= 1 and J % (p * p) == 0, "p^2 divides J >= 1")
    return 5, vp_rat(p * harmonic(J) - harmonic(J // p), p)


def _lemma_congH(P):
    p, N = P["p"], P["N"]
    _require(p >= 5, "p >= 5")
    _require(N >= 1, "N >= 1")
    expected = is_wolstenholme_prime(p) or N % p == 0
    return 4, vp_rat(p * harmonic(p * N) - harmonic(N), p), expected


def _lemma_congH2(P):
    p, N = P["p"], P["N"]
    _require(p >= 5, "p >= 5")
    _require(N >= 1, "N >= 1")
    expected = is_wolstenholme_prime(p) or N % p in (1, p - 1)
    val = vp_rat(p * (harmonic(p * N) - harmonic(p)) - (harmonic(N) - 1), p)
    return 4, val, expected


def _lemma_multinomial(P):
    p, N, m = P["p"], P["N"], P["m"]
    _require(m >= 1 and N >= 1, "m, N >= 1")
    return legendre_vp_factorial(N, p), vp_bN(N, m, p)


def _lemma_L6(P):
    p, N, u, n, s = P["p"], P["N"], P["u"], P["n"], P["s"]
    _require(0 <= u < p**s, "0 <= u < p^s")
    _require(n >= 0 and N >= 1, "n >= 0, N >= 1")
    return 0, vp_bN(N, u + n * p**s, p) - vp_bN(N, u, p) - vp_bN(N, n, p)


def _s_lemma(P, family):
    p, a, K, s, m = P["p"], P["a"], P["K"], P["s"], P["m"]
    Nvec = _nvec(P)
    _require(0 <= a < p, "0 <= a < p")
    _require(min(K, s, m) >= 0, "K, s, m >= 0")
    S = s_sum(Nvec, p, a, K, s, m, family)
    return s + 1 + vp_coefficient(Nvec, m, p, family), vp_int(S, p)


def _lemma_L10(P):
    return _s_lemma(P, PLAIN)


def _lemma_strat3(P):
    return _s_lemma(P, ZUDILIN)


def _block_harmonic(P, family):
    p, L, m, s = P["p"], P["L"], P["m"], P["s"]
    Nvec = _nvec(P)
    _check_L(Nvec, L)
    _require(m >= 0 and s >= 0, "m, s >= 0")
    hv = _vp_hdiff(L * m * p**s, L * (m // p) * p ** (s + 1), p)
    return vp_coefficient(Nvec, m, p, family) + hv


def _lemma_L11(P):
    p, L, s = P["p"], P["L"], P["s"]
    Nvec = _nvec(P)
    target = vp_int(capital_M(Nvec), p) - s - vp_int(theta(L), p)
    return target, _block_harmonic(P, PLAIN)


def _lemma_strat4(P):
    return -P["s"], _block_harmonic(P, ZUDILIN)


def _floor_lemma(P, family):
    p, L, a, j = P["p"], P["L"], P["a"], P["j"]
    Nvec = _nvec(P)
    _check_L(Nvec, L)
    _require(0 <= a < p and j >= 0, "0 <= a < p, j >= 0")
    hv = _vp_hdiff(L * j + (L * a) // p, L * j, p)
    return vp_coefficient(Nvec, a + p * j, p, family) + hv


def _lemma_L12(P):
    p, L = P["p"], P["L"]
    Nvec = _nvec(P)
    target = 1 + vp_int(capital_M(Nvec), p) - vp_int(theta(L), p)
    return target, _floor_lemma(P, PLAIN)


def _lemma_L12a(P):
    return 1, _floor_lemma(P, ZUDILIN)


def _lemma_B1(P):
    p, N, k, a = P["p"], P["N"], P.get("k", 1), P["a"]
    _require(2 <= a < p, "2 <= a < p")
    return N // p + k * legendre_vp_factorial(N, p), k * vp_bN(N, a, p)


def _lemma_B2(P):
    p, N, k, a, j = P["p"], P["N"], P.get("k", 1), P["a"], P["j"]
    _require(1 <= a < p, "1 <= a < p")
    _require(j >= 1 and N >= 1, "j, N >= 1")
    top = N * a // p
    # an empty max over valuations of positive integers is read as 0
    t1 = max((vp_int(N * j + e, p) for e in range(1, top + 1)), default=0)
    t2 = 0
    while p ** (t2 + 1) <= a + p * j:
        t2 += 1
    target = N // p + min(1 + t1, t2) - 1 + k * legendre_vp_factorial(N, p)
    return target, k * vp_bN(N, a + j * p, p)


def _lemma_C1(P):
    p, N, k, m = P["p"], P["N"], P.get("k", 1), P["m"]
    _require(m >= 2 and m % p != 0, "m >= 2 and p does not divide m")
    return N // p + k * legendre_vp_factorial(N, p), k * vp_bN(N, m, p)


def _lemma_ultime(P):
    p, w, m, r = P["p"], P["w"], P["m"], P["r"]
    Nvec = _nvec(P)
    _require(0 <= w < p**r, "0 <= w < p^r")
    _require(m >= 0, "m >= 0")
    got = vp_coefficient(Nvec, w + m * p**r, p, ZUDILIN) - vp_coefficient(Nvec, m, p, ZUDILIN)
    return 0, got


def _lemma_diviBB(P):
    p, m = P["p"], P["m"]
    Nvec = _nvec(P)
    _require(m >= 1, "m >= 1")
    return vp_coefficient(Nvec, 1, p, ZUDILIN), vp_coefficient(Nvec, m, p, ZUDILIN)


def _lemma_gammap(P):
    p, n, k, s = P["p"], P["n"], P["k"], P["s"]
    _require(n >= 1 and k >= 1 and s >= 0, "n, k >= 1 and s >= 0")
    lhs = mpq(factorial(n * p), factorial(n))
    rhs = (-1) ** (n * p + 1) * p**n * gamma_p(1 + n * p, p)
    if lhs != rhs:
        return s, -INF
    return s, vp_int(gamma_p(k + n * p**s, p) - gamma_p(k, p), p)


def _lemma_Ccong(P):
    p, L, a, K = P["p"], P["L"], P["a"], P["K"]
    Nvec = _nvec(P)
    _check_L(Nvec, L)
    _require(0 <= a < p and K >= 0, "0 <= a < p, K >= 0")
    target = 1 + vp_int(capital_M(Nvec), p) - vp_int(theta(L), p)
    return target, vp_rat(c_sum(Nvec, L, p, a, K, PLAIN), p)


def _lemma_boldC(P):
    p, L, a, K = P["p"], P["L"], P["a"], P["K"]
    Nvec = _nvec(P)
    _check_L(Nvec, L)
    _require(0 <= a < p and K >= 0, "0 <= a < p, K >= 0")
    return 1, vp_rat(c_sum(Nvec, L, p, a, K, ZUDILIN), p)


def _lemma_CcongU(P):
    p, N, k, a, K = P["p"], P["N"], P.get("k", 1), P["a"], P["K"]
    _require(0 <= a < p and K >= 0, "0 <= a < p, K >= 0")
    target = 1 + vp_rat(xi(N), p) + k * legendre_vp_factorial(N, p)
    return target, vp_rat(c_sum((N,) * k, N, p, a, K, PLAIN), p)


def _lemma_CtildeCong(P):
    p, N, k, a, K = P["p"], P["N"], P.get("k", 1), P["a"], P["K"]
    _require(N >= 2, "N >= 2")
    _require(0 <= a < p and K >= 0, "0 <= a < p, K >= 0")
    target = 1 + vp_rat(omega_cap(N), p) + k * legendre_vp_factorial(N, p)
    return target, vp_rat(c_tilde(N, k, p, a, K), p)


LEMMAS: dict[str, Callable] = {
    "J": _lemma_J,
    "W1": _lemma_W1,
    "W2": _lemma_W2,
    "W3": _lemma_W3,
    "congH": _lemma_congH,
    "congH2": _lemma_congH2,
    "multinomial": _lemma_multinomial,
    "L6": _lemma_L6,
    "L10": _lemma_L10,
    "strat3": _lemma_strat3,
    "L11": _lemma_L11,
    "strat4": _lemma_strat4,
    "L12": _lemma_L12,
    "L12a": _lemma_L12a,
    "B1": _lemma_B1,
    "B2": _lemma_B2,
    "C1": _lemma_C1,
    "ultime": _lemma_ultime,
    "diviBB": _lemma_diviBB,
    "gammap": _lemma_gammap,
    "Ccong": _lemma_Ccong,
    "boldC": _lemma_boldC,
    "CcongU": _lemma_CcongU,
    "CtildeCong": _lemma_CtildeCong,
}


def check_lemma(lemma_id: str, params: dict) -> CongruenceInstance:
    """Evaluate one lemma instance; raises HypothesisError outside its hypotheses."""
    if lemma_id not in LEMMAS:
        raise ValueError(f"unknown lemma {lemma_id!r}; known: {', '.join(LEMMAS)}")
    p = params.get("p")
    if p is None:
        raise HypothesisError("hypothesis fails: p is required")
    _require_prime(p)
    if "Nvec" in params:
        params = dict(params, Nvec=tuple(params["Nvec"]))
    out = LEMMAS[lemma_id](params)
    expected = True
    if len(out) == 3:
        target, achieved, expected = out
    else:
        target, achieved = out
    return CongruenceInstance(lemma_id, dict(params), target, achieved, expected)


# -- randomised suite ------------------------------------------------------------


@dataclass(frozen=True)
class SuiteBounds:
    p_max: int = 13
    N_max: int = 12
    k_max: int = 2
    s_max: int = 2
    K_max: int = 30
    J_max: int = 2000
    gamma_n_max: int = 20


def _draw(lemma_id: str, rng: random.Random, b: SuiteBounds) -> dict:
    primes = primes_up_to(b.p_max)
    big = [p for p in primes if p >= 5]
    p = rng.choice(primes)
    N = rng.randint(1, b.N_max)
    k = rng.randint(1, b.k_max)
    nvec = tuple(rng.randint(1, b.N_max) for _ in range(k))
    L = rng.randint(1, max(nvec))
    s = rng.randint(0, b.s_max)
    K = rng.randint(0, b.K_max)
    if lemma_id == "J":
        return {"p": p, "J": rng.randint(0, b.J_max)}
    if lemma_id == "W1":
        return {"p": rng.choice(big), "r": rng.randint(1, 100)}
    if lemma_id == "W2":
        q = rng.choice([3] + big)
        return {"p": q, "J": q * rng.randint(1, b.J_max // q)}
    if lemma_id == "W3":
        q = rng.choice(big)
        return {"p": q, "J": q * q * rng.randint(1, max(1, b.J_max // (q * q)))}
    if lemma_id in ("congH", "congH2"):
        return {"p": rng.choice(big), "N": rng.randint(1, 10 * b.N_max)}
    if lemma_id == "multinomial":
        return {"p": p, "N": N, "m": rng.randint(1, 50)}
    if lemma_id == "L6":
        return {"p": p, "N": N, "s": s, "u": rng.randrange(p**s), "n": rng.randint(0, b.K_max)}
    if lemma_id in ("L10", "strat3"):
        m = rng.randint(0, K // p**s) if rng.random() < 0.9 else rng.randint(0, b.K_max)
        return {"p": p, "Nvec": nvec, "a": rng.randrange(p), "K": K, "s": s, "m": m}
    if lemma_id in ("L11", "strat4"):
        return {"p": p, "Nvec": nvec, "L": L, "m": rng.randint(0, b.K_max), "s": s}
    if lemma_id in ("L12", "L12a"):
        return {"p": p, "Nvec": nvec, "L": L, "a": rng.randrange(p), "j": rng.randint(0, b.K_max)}
    if lemma_id == "B1":
        q = rng.choice([x for x in primes if x >= 3])
        return {"p": q, "N": N, "k": k, "a": rng.randint(2, q - 1)}
    if lemma_id == "B2":
        return {"p": p, "N": N, "k": k, "a": rng.randint(1, p - 1), "j": rng.randint(1, b.K_max)}
    if lemma_id == "C1":
        m = rng.randint(2, 4 * b.K_max)
        while m % p == 0:
            m += 1
        return {"p": p, "N": N, "k": k, "m": m}
    if lemma_id == "ultime":
        r = rng.randint(0, b.s_max)
        return {"p": p, "Nvec": nvec, "r": r, "w": rng.randrange(p**r), "m": rng.randint(0, b.K_max)}
    if lemma_id == "diviBB":
        return {"p": p, "Nvec": nvec, "m": rng.randint(1, 60)}
    if lemma_id == "gammap":
        return {"p": p, "n": rng.randint(1, b.gamma_n_max), "k": rng.randint(1, 50), "s": s}
    if lemma_id in ("Ccong", "boldC"):
        return {"p": p, "Nvec": nvec, "L": L, "a": rng.randrange(p), "K": K}
    if lemma_id == "CcongU":
        return {"p": p, "N": N, "k": k, "a": rng.randrange(p), "K": K}
    if lemma_id == "CtildeCong":
        return {"p": p, "N": max(N, 2), "k": k, "a": rng.randrange(p), "K": K}
    raise ValueError(lemma_id)


def run_suite(seed: int = 42, draws: int = 1000, lemmas: Sequence[str] | None = None,
              bounds: SuiteBounds = SuiteBounds()) -> Iterator[CongruenceInstance]:
    """Seeded random instances, ``draws`` per lemma, in a fixed lemma order."""
    for lemma_id in lemmas or LEMMAS:
        rng = random.Random(f"{seed}:{lemma_id}")
        for _ in range(draws):
            yield check_lemma(lemma_id, _draw(lemma_id, rng, bounds))


def rearrangement_suite(seed: int = 42, draws: int = 100, bounds: SuiteBounds = SuiteBounds()):
    """Yield (params, holds) for random draws of the block regrouping identity."""
    rng = random.Random(f"{seed}:rearrangement")
    primes = primes_up_to(bounds.p_max)
    for _ in range(draws):
        k = rng.randint(1, bounds.k_max)
        nvec = tuple(rng.randint(1, bounds.N_max) for _ in range(k))
        p = rng.choice(primes)
        params = {
            "Nvec": nvec, "L": rng.randint(1, max(nvec)), "p": p,
            "a": rng.randrange(p), "K": rng.randint(0, bounds.K_max),
            "family": rng.choice([PLAIN, ZUDILIN]),
        }
        yield params, rearrangement_check(**params)
