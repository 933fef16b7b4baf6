"""Fixed-prime scans of v_p(H_N) and v_p(H_N - 1) without big rationals.

For a prime p and a bound N_max put e = floor(log_p N_max). Then
p^e * H_N is a p-adic integer for every N <= N_max, and we keep it modulo
p^(K+e) as the running sum of p^(e - v_p(n)) * (n / p^v_p(n))^{-1}.
A residue whose valuation reaches K + e - 1 is treated as unresolved; the
scan then doubles K and recomputes the prefix.
"""
from __future__ import annotations

import json
import logging
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Iterator, NamedTuple

import gmpy2
import numpy as np
from gmpy2 import mpz

from .padic import PrecisionExhausted, _require_prime, harmonic, primes_up_to, vp_rat

log = logging.getLogger(__name__)

EXACT_GUARD = 100_000
DEFAULT_MAX_PRECISION = 1024
_MARGIN = 1


class ScanHit(NamedTuple):
    p: int
    N: int
    shift: int
    valuation: int
    precision: int


@dataclass
class ScanState:
    """Checkpoint: the running sum s_N = p^e H_N mod p^(K+e) after N terms."""

    p: int
    N_reached: int
    s: int
    K: int
    e_max: int

    def to_json(self) -> str:
        d = asdict(self)
        d = {k: str(v) for k, v in d.items()}
        return json.dumps(d)

    @classmethod
    def from_json(cls, text: str) -> "ScanState":
        d = json.loads(text)
        return cls(*(int(d[k]) for k in ("p", "N_reached", "s", "K", "e_max")))


def _log_floor(p: int, n: int) -> int:
    e = 0
    while p ** (e + 1) <= n:
        e += 1
    return e


def _range_sum(p: int, lo: int, hi: int, e: int, mod: int) -> int:
    """sum_{lo <= n < hi} p^(e - v_p(n)) / unit(n)  mod ``mod``."""
    pw = [p ** (e - v) for v in range(e + 1)]
    s = 0
    for n in range(lo, hi):
        u, v = n, 0
        while u % p == 0:
            u //= p
            v += 1
        s += pw[v] * pow(u, -1, mod)
    return s % mod


def _valuation_or_none(x: int, p: int, limit: int):
    if x == 0:
        return None
    v = int(gmpy2.remove(mpz(x), p)[1])
    return v if v < limit else None


def _scan_segment(p, lo, hi, prefix, shift, threshold, K, e, histogram):
    """Scan lo..hi-1 starting from the prefix sum up to lo-1.

    Returns (hits, counts, final sum) or raises PrecisionExhausted with the
    offending N.
    """
    mod = p ** (K + e)
    pe = p**e
    pw = [p ** (e - v) for v in range(e + 1)]
    limit = K + e - _MARGIN
    hits = []
    counts = Counter() if histogram else None
    s = prefix
    for n in range(lo, hi):
        u, v = n, 0
        while u % p == 0:
            u //= p
            v += 1
        s = (s + pw[v] * pow(u, -1, mod)) % mod
        if shift and n == 1:
            continue  # H_1 - 1 = 0 exactly; no finite valuation
        d = (s - shift * pe) % mod
        # cheap prefilter: a residue prime to p has valuation exactly -e
        if d % p:
            if histogram:
                counts[-e] += 1
            if threshold <= -e:
                hits.append((n, -e))
            continue
        val = _valuation_or_none(d, p, limit)
        if val is None:
            raise PrecisionExhausted(n)
        val -= e
        if histogram:
            counts[val] += 1
        if val >= threshold:
            hits.append((n, val))
    return hits, counts, s


def scan(
    p: int,
    N_max: int,
    shift: int = 0,
    threshold: int = 1,
    precision: int = 8,
    max_precision: int = DEFAULT_MAX_PRECISION,
    state: ScanState | None = None,
    checkpoint: list | None = None,
) -> Iterator[ScanHit]:
    """Yield every N <= N_max with v_p(H_N - shift) >= threshold.

    ``state`` resumes from a checkpoint; if ``checkpoint`` is a list, the final
    state is appended to it when the generator finishes.
    """
    _require_prime(p)
    if shift not in (0, 1):
        raise ValueError("shift must be 0 or 1")
    if precision < threshold + 2:
        raise ValueError("precision must be at least threshold + 2")
    e = _log_floor(p, N_max)
    if state is not None:
        if state.p != p:
            raise ValueError("checkpoint is for a different prime")
        if state.e_max > e:
            raise ValueError("checkpoint scale exceeds this scan's range")
        K = max(precision, state.K)
        start = state.N_reached + 1
        # rescale the stored sum to this scan's e and K
        s = state.s * p ** (e - state.e_max)
        if K > state.K:
            s = _range_sum(p, 1, start, e, p ** (K + e))
        else:
            s %= p ** (K + e)
    else:
        K, start, s = precision, 1, 0

    n = start
    while n <= N_max:
        try:
            hits, _, s = _scan_segment(p, n, N_max + 1, s, shift, threshold, K, e, False)
        except PrecisionExhausted as exc:
            bad = exc.args[0]
            # emit what was resolved before the bad index, then escalate
            hits, _, _ = _scan_segment(p, n, bad, s, shift, threshold, K, e, False)
            for N, val in hits:
                yield ScanHit(p, N, shift, val, K)
            K *= 2
            if K > max_precision:
                raise PrecisionExhausted(
                    f"v_p(H_{bad} - {shift}) unresolved at p^{max_precision}"
                ) from None
            log.info("p=%d N=%d: raising precision to %d", p, bad, K)
            s = _range_sum(p, 1, bad, e, p ** (K + e))
            n = bad
            continue
        for N, val in hits:
            yield ScanHit(p, N, shift, val, K)
        n = N_max + 1
    if checkpoint is not None:
        checkpoint.append(ScanState(p, N_max, s, K, e))


def scan_histogram(p: int, N_max: int, shift: int = 0, precision: int = 8) -> dict[int, int]:
    """Number of N <= N_max at each valuation level of H_N - shift."""
    _require_prime(p)
    e = _log_floor(p, N_max)
    K = precision
    while True:
        try:
            _, counts, _ = _scan_segment(p, 1, N_max + 1, 0, shift, 10**9, K, e, True)
            return dict(sorted(counts.items()))
        except PrecisionExhausted:
            K *= 2
            if K > DEFAULT_MAX_PRECISION:
                raise


def _chunk_total(args):
    p, lo, hi, e, mod = args
    return _range_sum(p, lo, hi, e, mod)


def _chunk_scan(args):
    return _scan_segment(*args)


def scan_parallel(
    p: int,
    N_max: int,
    shift: int = 0,
    threshold: int = 1,
    precision: int = 8,
    workers: int = 2,
    chunks: int | None = None,
) -> list[ScanHit]:
    """Range-partitioned scan with a prefix handoff between chunks.

    The first pass sums each chunk independently; prefix sums of those
    totals seed the second pass. Hits come back in increasing N.
    """
    _require_prime(p)
    e = _log_floor(p, N_max)
    chunks = chunks or workers
    bounds = [1 + (N_max * i) // chunks for i in range(chunks)] + [N_max + 1]
    K = precision
    while True:
        mod = p ** (K + e)
        with ProcessPoolExecutor(workers) as pool:
            totals = list(
                pool.map(_chunk_total, [(p, bounds[i], bounds[i + 1], e, mod) for i in range(chunks)])
            )
            prefixes, acc = [], 0
            for t in totals:
                prefixes.append(acc)
                acc = (acc + t) % mod
            jobs = [
                (p, bounds[i], bounds[i + 1], prefixes[i], shift, threshold, K, e, False)
                for i in range(chunks)
            ]
            try:
                results = list(pool.map(_chunk_scan, jobs))
            except PrecisionExhausted:
                K *= 2
                if K > DEFAULT_MAX_PRECISION:
                    raise
                continue
        return [ScanHit(p, N, shift, v, K) for hits, _, _ in results for N, v in hits]


def vp_harmonic_exact(p: int, N: int, shift: int = 0):
    """v_p(H_N - shift) by exact rationals; the oracle for the scanner."""
    if N > EXACT_GUARD:
        raise ValueError(f"N={N} exceeds the exact-arithmetic guard {EXACT_GUARD}")
    return vp_rat(harmonic(N) - shift, p)


# -- Wolstenholme primes -------------------------------------------------------

_NUMPY_LIMIT = 46341  # p^2 < 2^31, so products of residues fit in int64


def _pair_sum_numpy(p: int) -> int:
    """sum_{n <= (p-1)/2} 1/(n(p-n)) mod p^2 with vectorised Fermat inverses."""
    m = p * p
    n = np.arange(1, (p - 1) // 2 + 1, dtype=np.int64)
    x = (n * (p - n)) % m
    exp = p * (p - 1) - 1
    result = np.ones_like(x)
    base = x
    while exp:
        if exp & 1:
            result = (result * base) % m
        base = (base * base) % m
        exp >>= 1
    return int(result.sum() % m)


def _pair_sum_python(p: int) -> int:
    m = p * p
    return sum(pow(n * (p - n), -1, m) for n in range(1, (p - 1) // 2 + 1)) % m


def wolstenholme_valuation(p: int) -> int:
    """min(v_p(H_{p-1}), 3) for a prime p >= 5.

    Pairing n with p - n gives H_{p-1} = p * sum 1/(n(p-n)), so only that
    sum modulo p^2 is needed.
    """
    _require_prime(p)
    if p < 5:
        raise ValueError("Wolstenholme valuations are defined here for p >= 5")
    t = _pair_sum_numpy(p) if p < _NUMPY_LIMIT else _pair_sum_python(p)
    if t == 0:
        return 3
    return 2 if t % p == 0 else 1


def wolstenholme_scan(p_max: int, report: dict | None = None) -> list[int]:
    """Primes 5 <= p <= p_max with v_p(H_{p-1}) >= 3.

    If ``report`` is a dict it receives p -> min(v_p(H_{p-1}), 3) for every
    scanned prime.
    """
    out = []
    for p in primes_up_to(p_max):
        if p < 5:
            continue
        v = wolstenholme_valuation(p)
        if report is not None:
            report[p] = v
        if v >= 3:
            out.append(p)
    return out
