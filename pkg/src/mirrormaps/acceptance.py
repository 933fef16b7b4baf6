"""The acceptance battery: twelve end-to-end checks with exact expectations."""
from __future__ import annotations

import platform
import random
import sys
import time
from dataclasses import dataclass, field
from typing import Callable

import gmpy2
import numpy as np
from gmpy2 import mpq

from . import __version__
from .certify import (
    certify_theorem,
    gcd_sequence_A056612,
    root_report,
    sharpness_witness,
    tN,
    uN,
    xi,
)
from .coefficients import bbN, hN
from .dwork import LEMMAS, rearrangement_suite, run_suite
from .maps import build_qLN, build_qN, picard_fuchs_check
from .padic import is_prime, primes_up_to
from .scanner import scan, wolstenholme_scan
from .series import integrality_report
from .yukawa import lambert_decompose, yukawa_K

A056612_PRINTED = [1, 1, 1, 2, 2, 36, 36, 144, 144, 1440, 1440, 17280, 17280,
                   241920, 3628800, 29030400]

CY_VECTORS = [(12,), (5,), (8,), (10,), (3, 3), (4, 2, 2), (2, 2, 2, 2), (4, 4),
              (6, 6), (4, 3), (6, 2, 2), (3, 2, 2), (3, 6), (6, 4)]
NEW_RESULT_VECTORS = CY_VECTORS[-5:]

QUINTIC_INSTANTONS = [2875, 609250, 317206375, 242467530000, 229305888887625]


@dataclass
class Profile:
    name: str
    order_cap: int | None
    range_cap: int | None
    draws: int

    def order(self, m: int) -> int:
        return m if self.order_cap is None else min(m, self.order_cap)

    def span(self, n: int) -> int:
        return n if self.range_cap is None else min(n, self.range_cap)


PROFILES = {
    "full": Profile("full", None, None, 1000),
    "quick": Profile("quick", 60, 10_000, 100),
}


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] criterion {self.number:02d}: {self.title} ({self.detail}; {self.seconds:.2f}s)"

    def to_dict(self) -> dict:
        return {"criterion": str(self.number), "title": self.title, "passed": self.passed,
                "detail": self.detail}


def c01_mirror_integrality(prof: Profile, seed: int) -> tuple[bool, str]:
    M = prof.order(100)
    bad = []
    for N in range(1, 13):
        for k in (1, 2):
            rep = integrality_report(build_qN(N, k, M).q)
            if not rep.passed:
                bad.append((N, k, rep.witness_index))
    return not bad, f"q_N integral to order {M} for N<=12, k in {{1,2}}" if not bad else f"failures {bad}"


def c02_quintic_root(prof: Profile, seed: int) -> tuple[bool, str]:
    M = prof.order(200)
    s = build_qN(5, 1, M).normalized
    main = root_report(s, mpq(1, 10))
    witnesses = {}
    for p in (2, 3, 5, 7, 11):
        w = root_report(s, mpq(1, 10 * p), prime=p)
        witnesses[p] = None if w.passed else w.witness_index
    ok = main.passed and all(v is not None for v in witnesses.values())
    return ok, f"1/10 integral={main.passed} at order {M}; witnesses {witnesses}"


def c03_sequences(prof: Profile, seed: int) -> tuple[bool, str]:
    got = [gcd_sequence_A056612(n) for n in range(1, 17)]
    ok = got == A056612_PRINTED and xi(7) == mpq(1, 140)
    return ok, f"A056612 match={got == A056612_PRINTED}, Xi_7={xi(7)}"


def _hits(p, n_max, shift, threshold, K=8):
    return sorted(h.N for h in scan(p, n_max, shift, threshold, K))


def c04_scan(prof: Profile, seed: int) -> tuple[bool, str]:
    span11, span = prof.span(11_000), prof.span(100_000)
    cases = [
        ((11, span11, 0, 3), [848, 9338, 10583]),
        ((3, span, 0, 1), [2, 7, 22]),
        ((5, span, 0, 1), [4, 20, 24]),
        ((3, span, 1, 1), [66, 68]),
        ((5, span, 1, 1), [3, 21, 23]),
    ]
    bad = []
    for (p, n_max, shift, thr), expected in cases:
        t = time.perf_counter()
        got = _hits(p, n_max, shift, thr)
        dt = time.perf_counter() - t
        want = [n for n in expected if n <= n_max]
        if got != want or dt > 10:
            bad.append((p, shift, got, round(dt, 2)))
    return not bad, "all hit sets exact" if not bad else f"mismatch {bad}"


def c05_wolstenholme(prof: Profile, seed: int) -> tuple[bool, str]:
    bound = prof.span(20_000)
    vals: dict = {}
    found = wolstenholme_scan(bound, vals)
    want = [p for p in (16843,) if p <= bound]
    floor_ok = all(v >= 2 for v in vals.values())
    return found == want and floor_ok, f"found {found} below {bound}; v>=2 everywhere={floor_ok}"


def c06_zudilin_duality(prof: Profile, seed: int) -> tuple[bool, str]:
    bad = []
    for N in range(1, 31):
        for m in range(41):
            if bbN(N, m, "pochhammer") != bbN(N, m, "factorial"):
                bad.append(("B", N, m))
            if hN(N, m, "residues") != hN(N, m, "alphabeta"):
                bad.append(("H", N, m))
    return not bad, "both representations agree for N<=30, m<=40" if not bad else f"{bad[:5]}"


def c07_theorem4(prof: Profile, seed: int) -> tuple[bool, str]:
    M = prof.order(60)
    bad = []
    count = 0
    for vec in CY_VECTORS:
        for L in range(1, max(vec) + 1):
            count += 1
            rep = integrality_report(build_qLN(vec, L, M, "zudilin").q)
            if not rep.passed:
                bad.append((vec, L, rep.witness_index))
    for vec in NEW_RESULT_VECTORS:
        count += 1
        rep = certify_theorem("Conj2", {"Nvec": vec}, M)
        if not rep.passed:
            bad.append((vec, "q", rep.witness_index))
    return not bad, f"{count} maps integral to order {M}" if not bad else f"failures {bad}"


def c08_zudilin_roots(prof: Profile, seed: int) -> tuple[bool, str]:
    M1, M2 = prof.order(100), prof.order(60)
    s1 = build_qLN((6,), 1, M1, "zudilin").q
    a = root_report(s1, mpq(1, 60)).passed
    w = root_report(s1, mpq(1, 120))
    b = not w.passed
    c = root_report(build_qLN((6,), 2, M2, "zudilin").q, mpq(1, 6)).passed
    d = root_report(build_qLN((6,), 3, M2, "zudilin").q, mpq(1, 2)).passed
    return a and b and c and d, (
        f"1/60 ok={a}, 1/120 fails={b} (index {w.witness_index}), L=2 1/6 ok={c}, L=3 1/2 ok={d}"
    )


def c09_dwork_suite(prof: Profile, seed: int) -> tuple[bool, str]:
    failures: dict = {}
    total = 0
    for inst in run_suite(seed, prof.draws):
        total += 1
        if not inst.passed:
            failures.setdefault(inst.lemma_id, []).append(inst.params)
    rearr_bad = [p for p, ok in rearrangement_suite(seed, 100) if not ok]
    ok = not failures and not rearr_bad
    detail = f"{total} instances over {len(LEMMAS)} lemmas"
    if failures:
        detail += "; failing: " + ", ".join(
            f"{k} x{len(v)} (first {v[0]})" for k, v in failures.items()
        )
    detail += f"; rearrangement failures {len(rearr_bad)}/100"
    return ok, detail


def c10_picard_fuchs(prof: Profile, seed: int) -> tuple[bool, str]:
    bad = [v for v in [(2,), (5,), (6,), (3, 3)] if not picard_fuchs_check(v, 25).passed]
    return not bad, "operator annihilates F and G + F log z to order 25" if not bad else f"{bad}"


def c11_quintic(prof: Profile, seed: int) -> tuple[bool, str]:
    ks = [lambert_decompose(yukawa_K((5,), M)) for M in (8, 12)]
    K0 = yukawa_K((5,), 8)[0]
    ns = [[kd / d**3 for d, kd in enumerate(k[:5], start=1)] for k in ks]
    integral = all(x.denominator == 1 for x in ns[0])
    stable = ns[0] == ns[1]
    ok = integral and stable and K0 == 5
    return ok, f"n_1..n_5={[int(x) for x in ns[0]] if integral else ns[0]}, stable={stable}, K(0)={K0}"


def c12_sequences_tu(prof: Profile, seed: int) -> tuple[bool, str]:
    M = prof.order(150)
    bad = []
    for N in range(2, 11):
        for name, fn in (("t", tN), ("u", uN)):
            value, rep = fn(N, M)
            if not rep.passed:
                bad.append(f"{name}_{N}={value}: {rep.detail}")
    rng = random.Random(f"{seed}:p>N")
    pairs = []
    while len(pairs) < 10:
        N = rng.randint(1, 30)
        p = rng.randint(N + 1, 200)
        if is_prime(p):
            pairs.append((p, N))
    missing = [pn for pn in pairs if not sharpness_witness("p>N", *pn).passed]
    ok = not bad and not missing
    detail = f"t_N/u_N for N=2..10 at order {M}; p>N witnesses {10 - len(missing)}/10"
    if bad:
        detail += "; " + "; ".join(bad)
    return ok, detail


CRITERIA: list[tuple[int, str, Callable]] = [
    (1, "mirror-map integrality", c01_mirror_integrality),
    (2, "quintic 1/10 root and sharpness", c02_quintic_root),
    (3, "A056612 and Xi_7", c03_sequences),
    (4, "harmonic valuation scans", c04_scan),
    (5, "Wolstenholme primes", c05_wolstenholme),
    (6, "Zudilin coefficient duality", c06_zudilin_duality),
    (7, "bold maps at the fourteen vectors", c07_theorem4),
    (8, "Zudilin refinement roots", c08_zudilin_roots),
    (9, "congruence suite", c09_dwork_suite),
    (10, "Picard-Fuchs annihilation", c10_picard_fuchs),
    (11, "quintic instanton numbers", c11_quintic),
    (12, "t_N / u_N sharpness", c12_sequences_tu),
]


def run_criterion(number: int, profile: str = "full", seed: int = 42) -> CriterionResult:
    prof = PROFILES[profile]
    for num, title, fn in CRITERIA:
        if num == number:
            t = time.perf_counter()
            ok, detail = fn(prof, seed)
            return CriterionResult(num, title, ok, detail, time.perf_counter() - t)
    raise ValueError(f"no criterion {number}")


@dataclass
class RunManifest:
    command: list
    seed: int
    profile: str
    orders: dict
    versions: dict
    wall_time: float = 0.0
    results: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_dict(self, timings: bool = False) -> dict:
        d = {
            "command": list(self.command),
            "seed": str(self.seed),
            "profile": self.profile,
            "orders": {k: str(v) for k, v in self.orders.items()},
            "versions": self.versions,
            "summary": {
                "passed": str(sum(r.passed for r in self.results)),
                "failed": str(sum(not r.passed for r in self.results)),
            },
            "results": [r.to_dict() for r in self.results],
        }
        if timings:
            d["wall_time"] = f"{self.wall_time:.3f}"
        return d


def versions() -> dict:
    return {
        "mirrormaps": __version__,
        "python": platform.python_version(),
        "gmpy2": gmpy2.version(),
        "numpy": np.__version__,
    }


def acceptance_suite(profile: str = "quick", seed: int = 42, command=None,
                     only: list | None = None, echo=None) -> RunManifest:
    prof = PROFILES[profile]
    manifest = RunManifest(
        command=list(command if command is not None else sys.argv),
        seed=seed,
        profile=profile,
        orders={"mirror": prof.order(100), "root": prof.order(200),
                "zudilin": prof.order(60), "tu": prof.order(150)},
        versions=versions(),
    )
    t0 = time.perf_counter()
    for num, _, _ in CRITERIA:
        if only and num not in only:
            continue
        res = run_criterion(num, profile, seed)
        manifest.results.append(res)
        if echo:
            echo(res.line())
    manifest.wall_time = time.perf_counter() - t0
    return manifest
