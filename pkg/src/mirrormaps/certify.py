"""Root exponents and finite-order integrality certification.

Passing a certification means every coefficient through the requested order
is an integer. That is evidence, not proof; a failure is conclusive and
always names the first bad coefficient.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from gmpy2 import mpq

from .coefficients import PLAIN, ZUDILIN, HyperSpec, bN, capital_M
from .maps import build_bold_q, build_qLN, build_qN, build_q_tilde
from .padic import (
    INF,
    _require_prime,
    factor_small,
    factorial,
    harmonic,
    legendre_vp_factorial,
    primes_up_to,
    theta,
    vp_rat,
)
from .report import CertReport
from .scanner import wolstenholme_valuation
from .series import TruncSeries, iter_power_coefficients

THEOREMS = ("T1", "T2", "T3", "T3a", "T4", "Cor1", "Conj2")
KNOWN_WOLSTENHOLME = frozenset({16843, 2124679})
WOLSTENHOLME_TABLE_BOUND = 25_000


@dataclass(frozen=True)
class RootExponent:
    value: object
    description: str

    def __post_init__(self):
        if mpq(self.value) <= 0:
            raise ValueError("root exponents are positive")


# -- constants -----------------------------------------------------------------


def gcd_sequence_A056612(N: int) -> int:
    """gcd(N!, N! H_N), i.e. M_(N)/Theta_N."""
    f = factorial(N)
    return math.gcd(f, int(f * harmonic(N)))


def is_wolstenholme_prime(
    p: int, table_bound: int = WOLSTENHOLME_TABLE_BOUND, recompute: bool = False
) -> bool:
    """v_p(H_{p-1}) >= 3; above ``table_bound`` the known list is consulted."""
    _require_prime(p)
    if p < 5:
        raise ValueError("Wolstenholme primes are defined for p >= 5")
    if p > table_bound and not recompute:
        return p in KNOWN_WOLSTENHOLME
    return wolstenholme_valuation(p) >= 3


def _is_wolstenholme_small(p: int) -> bool:
    return p >= 5 and is_wolstenholme_prime(p)


def xi(N: int):
    """Xi_N, the correction to N! in the sharper root exponent for q_{N,N}."""
    if N < 1:
        raise ValueError("N must be positive")
    if N == 1:
        return mpq(1)
    if N == 7:
        return mpq(1, 140)
    h = harmonic(N)
    out = mpq(1)
    for p in primes_up_to(N):
        bump = 1 if (_is_wolstenholme_small(p) or N % p == 0) else 0
        out *= mpq(p) ** min(2 + bump, vp_rat(h, p))
    return out


def omega_cap(N: int):
    """Omega_N, the analogue of Xi_N for (z^{-1} q_N)^{1/kN}."""
    if N < 2:
        raise ValueError("Omega_N needs N >= 2")
    h = harmonic(N) - 1
    out = mpq(1)
    for p in primes_up_to(N):
        bump = 1 if (_is_wolstenholme_small(p) or N % p in (1, p - 1)) else 0
        out *= mpq(p) ** min(2 + bump, vp_rat(h, p))
    return out


def _require_integer(x, what: str) -> int:
    x = mpq(x)
    if x.denominator != 1:
        raise ArithmeticError(f"{what} = {x} is not an integer")
    return int(x)


def tN_value(N: int) -> int:
    return _require_integer(xi(N) * factorial(N), f"Xi_{N} * {N}!")


def uN_value(N: int) -> int:
    return _require_integer(omega_cap(N) * factorial(N), f"Omega_{N} * {N}!")


# -- root integrality ----------------------------------------------------------


def root_report(s: TruncSeries, exponent, prime: Optional[int] = None) -> CertReport:
    """Is s^exponent integral to s.order?  Stops at the first bad coefficient.

    With ``prime`` set, only p-integrality is tested.
    """
    for i, c in enumerate(iter_power_coefficients(s, exponent)):
        den = int(c.denominator)
        if den == 1:
            continue
        if prime is not None:
            if den % prime:
                continue
            return CertReport(
                False, s.order, witness_index=i, witness_valuation=vp_rat(c, prime),
                detail=f"{prime} divides the denominator at index {i}",
                extra={"exponent": mpq(exponent)},
            )
        fac, rest = factor_small(den)
        p0 = min(fac) if fac else None
        return CertReport(
            False, s.order, witness_index=i,
            witness_valuation=vp_rat(c, p0) if p0 else None,
            detail=f"denominator {den} at index {i}",
            extra={"exponent": mpq(exponent), "denominator": den, "factors": fac},
        )
    return CertReport(True, s.order, detail="integral to order", extra={"exponent": mpq(exponent)})


def _params(params: dict, *names):
    missing = [n for n in names if params.get(n) is None]
    if missing:
        raise ValueError(f"missing parameters: {', '.join(missing)}")
    return [params[n] for n in names]


def theorem_exponent(theorem: str, params: dict) -> RootExponent:
    """The root exponent a theorem asserts for its series."""
    if theorem in ("T1", "T4", "Conj2"):
        return RootExponent(mpq(1), theorem)
    if theorem == "T2":
        Nvec, L = _params(params, "Nvec", "L")
        HyperSpec(tuple(Nvec), L)
        return RootExponent(mpq(theta(L), capital_M(Nvec)), "T2: Theta_L/M")
    N = int(_params(params, "N")[0])
    k = int(params.get("k") or 1)
    fk = factorial(N) ** k
    if theorem == "T3":
        t = _require_integer(xi(N) * fk, "Xi_N N!^k")
        return RootExponent(mpq(1, t), "T3: 1/(Xi_N N!^k)")
    if theorem == "T3a":
        u = _require_integer(omega_cap(N) * fk, "Omega_N N!^k")
        return RootExponent(mpq(1, u * k * N), "T3a: 1/(Omega_N N!^k kN)")
    if theorem == "Cor1":
        if N < 2:
            raise ValueError("Cor1 needs N >= 2")
        return RootExponent(mpq(theta(N), fk * k * N), "Cor1: Theta_N/(N!^k kN)")
    raise ValueError(f"unknown theorem {theorem!r}; expected one of {THEOREMS}")


def theorem_series(theorem: str, params: dict, order: int) -> TruncSeries:
    """The unit series whose root the theorem controls."""
    if theorem in ("T1", "T2"):
        Nvec, L = _params(params, "Nvec", "L")
        return build_qLN(Nvec, L, order, PLAIN).q
    if theorem == "T4":
        Nvec, L = _params(params, "Nvec", "L")
        return build_qLN(Nvec, L, order, ZUDILIN).q
    if theorem == "Conj2":
        (Nvec,) = _params(params, "Nvec")
        return build_bold_q(Nvec, order).normalized
    N = int(_params(params, "N")[0])
    k = int(params.get("k") or 1)
    if theorem == "T3":
        return build_qLN((N,) * k, N, order).q
    if theorem in ("T3a", "Cor1"):
        return build_qN(N, k, order).normalized
    raise ValueError(f"unknown theorem {theorem!r}; expected one of {THEOREMS}")


def certify_theorem(theorem: str, params: dict, order: int) -> CertReport:
    """Build the theorem's series, take the asserted root, check integrality."""
    exponent = theorem_exponent(theorem, params)
    s = theorem_series(theorem, params, order)
    rep = root_report(s, exponent.value)
    extra = dict(rep.extra, theorem=theorem, exponent=exponent.value,
                 provenance=exponent.description)
    return CertReport(rep.passed, rep.order, rep.witness_index, rep.witness_valuation,
                      rep.detail, extra)


# -- empirical maximal roots ---------------------------------------------------


@dataclass
class MaxRootReport:
    """EMPIRICAL: exponents verified to ``order`` only, not a supremum."""

    value: int
    order: int
    exponents: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    label: str = "EMPIRICAL"

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "value": str(self.value),
            "order": str(self.order),
            "exponents": {str(p): str(e) for p, e in self.exponents.items()},
            "witnesses": {str(p): w.to_dict() for p, w in self.witnesses.items()},
        }


def empirical_max_root(s: TruncSeries, prime_bound: int, order: Optional[int] = None,
                       max_exponent: int = 64) -> MaxRootReport:
    """Largest prod p^e_p (p <= prime_bound) with s^(1/p^e_p) integral to order."""
    if order is not None:
        s = s.truncate(order)
    if s[0] != 1:
        raise ValueError("the series must have constant term 1")
    if not s.is_integral():
        raise ValueError("the series itself is not integral")
    value, exps, wit = 1, {}, {}
    for p in primes_up_to(prime_bound):
        e = 0
        while e < max_exponent:
            rep = root_report(s, mpq(1, p ** (e + 1)), prime=p)
            if not rep.passed:
                wit[p] = rep
                break
            e += 1
        exps[p] = e
        value *= p**e
    return MaxRootReport(value, s.order, exps, wit)


# -- the conjectural sequences t_N and u_N -------------------------------------


def _sequence_report(value: int, s: TruncSeries, N: int, name: str) -> CertReport:
    main = root_report(s, mpq(1, value))
    witnesses, missing = {}, []
    for p in primes_up_to(N):
        w = root_report(s, mpq(1, p * value), prime=p)
        if w.passed:
            missing.append(p)
        else:
            witnesses[p] = w.witness_index
    passed = main.passed and not missing
    if passed:
        return CertReport(True, s.order, detail=f"{name}={value} integral, sharp at all p <= {N}",
                          extra={"value": value, "witnesses": witnesses})
    if not main.passed:
        return CertReport(False, s.order, main.witness_index, main.witness_valuation,
                          f"root 1/{value} not integral", {"value": value})
    return CertReport(False, s.order, witness_index=s.order,
                      detail=f"no sharpness witness within order for p in {missing}",
                      extra={"value": value, "witnesses": witnesses, "missing": missing})


def tN(N: int, order: int) -> tuple[int, CertReport]:
    """t_N = Xi_N N! with an empirical check on q_{N,N} (k = 1)."""
    t = tN_value(N)
    return t, _sequence_report(t, build_qLN((N,), N, order).q, N, "t_N")


def uN(N: int, order: int) -> tuple[int, CertReport]:
    """u_N = Omega_N N! with an empirical check on the tilde map (k = 1)."""
    u = uN_value(N)
    return u, _sequence_report(u, build_q_tilde(N, 1, order).q, N, "u_N")


# -- sharpness propositions ----------------------------------------------------

PROPOSITIONS = ("p>N", "p>N2", "vp=3", "vp=32")


def _least_a(p: int, N: int) -> int:
    return 1 if N == 1 else -(-p // N)


def sharpness_witness(prop: str, p: int, N: int) -> CertReport:
    """Exhibit the obstruction that keeps p out of (or capped in) t_N / u_N."""
    _require_prime(p)
    if prop in ("p>N", "p>N2"):
        if not p > N:
            raise ValueError("hypothesis p > N fails")
        if prop == "p>N2" and N < 2:
            raise ValueError("hypothesis N >= 2 fails")

        def val(a):
            w = harmonic(N * a) - (harmonic(a) if prop == "p>N2" else 0)
            return vp_rat(bN(N, a) * w, p)

        a = _least_a(p, N)
        v = val(a)
        if v != 0:
            a = next((b for b in range(1, p) if val(b) == 0), None)
            if a is None:
                return CertReport(False, 0, witness_index=p, detail="no a < p found")
            v = 0
        return CertReport(True, a, witness_index=a, witness_valuation=v,
                          detail=f"a={a}: valuation 0", extra={"a": a})
    if prop in ("vp=3", "vp=32"):
        if not p <= N:
            raise ValueError("hypothesis p <= N fails")
        target = harmonic(N) - (1 if prop == "vp=32" else 0)
        if vp_rat(target, p) != 3:
            name = "v_p(H_N)" if prop == "vp=3" else "v_p(H_N - 1)"
            raise ValueError(f"hypothesis {name} = 3 fails")
        if p >= 5 and is_wolstenholme_prime(p):
            raise ValueError("hypothesis: p must not be a Wolstenholme prime")
        if prop == "vp=3" and N % p == 0:
            raise ValueError("hypothesis p does not divide N fails")
        if prop == "vp=32" and N % p in (1, p - 1):
            raise ValueError("hypothesis N not congruent to +-1 mod p fails")
        if prop == "vp=3":
            c = bN(N, 1) * harmonic(N) - bN(N, p) * p * harmonic(N * p)
        else:
            c = bN(N, 1) * (harmonic(N) - 1) - p * bN(N, p) * (harmonic(N * p) - harmonic(p))
        bound = 4 + legendre_vp_factorial(N, p)
        v = vp_rat(c, p)
        ok = v < bound
        return CertReport(
            ok, p, witness_index=p, witness_valuation=v,
            detail=f"v_p(C(p)) = {v} {'<' if ok else '>='} {bound}",
            extra={"bound": bound},
        )
    raise ValueError(f"unknown proposition {prop!r}")
