"""Truncated formal power series over exact rationals.

A ``TruncSeries`` of order M stores the coefficients of z^0..z^M. Binary
operations truncate to the smaller operand order. Division, exp, log and
rational powers use the usual first-order recurrences rather than Newton
iteration; with exact coefficients there is nothing to gain from quadratic
convergence and the recurrences are easy to audit.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Iterator, NamedTuple, Sequence

from gmpy2 import mpq

from .padic import INF, factor_small, vp_rat
from .report import CertReport

DEFAULT_ORDER = 100


class SeriesError(ValueError):
    pass


class TruncSeries:
    __slots__ = ("_c", "order")

    def __init__(self, coeffs: Sequence, order: int | None = None):
        c = [mpq(x) for x in coeffs]
        if order is None:
            order = len(c) - 1
        if order < 0:
            raise SeriesError("order must be non-negative")
        if len(c) <= order:
            c.extend([mpq(0)] * (order + 1 - len(c)))
        self._c = tuple(c[: order + 1])
        self.order = order

    # construction -----------------------------------------------------------

    @classmethod
    def from_function(cls, f: Callable[[int], object], order: int) -> "TruncSeries":
        return cls([f(m) for m in range(order + 1)], order)

    @classmethod
    def zero(cls, order: int) -> "TruncSeries":
        return cls([], order)

    @classmethod
    def one(cls, order: int) -> "TruncSeries":
        return cls([1], order)

    @classmethod
    def monomial(cls, k: int, order: int, coeff=1) -> "TruncSeries":
        c = [0] * (order + 1)
        if k <= order:
            c[k] = coeff
        return cls(c, order)

    # container protocol -----------------------------------------------------

    @property
    def coeffs(self) -> tuple:
        return self._c

    def __getitem__(self, i):
        return self._c[i]

    def __len__(self) -> int:
        return self.order + 1

    def __iter__(self):
        return iter(self._c)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.order == other.order and self._c == other._c

    def __hash__(self):
        return hash((self.order, self._c))

    def __repr__(self) -> str:
        terms = ", ".join(str(c) for c in self._c[:6])
        more = ", ..." if self.order > 5 else ""
        return f"TruncSeries([{terms}{more}], order={self.order})"

    def agrees_with(self, other: "TruncSeries") -> bool:
        """Equality on the shared coefficient range."""
        m = min(self.order, other.order)
        return self._c[: m + 1] == other._c[: m + 1]

    def truncate(self, order: int) -> "TruncSeries":
        if order > self.order:
            raise SeriesError("cannot extend a truncated series")
        return TruncSeries(self._c[: order + 1], order)

    # ring operations --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, TruncSeries):
            return other
        return TruncSeries([other], self.order)

    def __add__(self, other):
        other = self._coerce(other)
        m = min(self.order, other.order)
        return TruncSeries([self._c[i] + other._c[i] for i in range(m + 1)], m)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries([-c for c in self._c], self.order)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            k = mpq(other)
            return TruncSeries([k * c for c in self._c], self.order)
        m = min(self.order, other.order)
        a, b = self._c, other._c
        nz_a = [i for i in range(m + 1) if a[i]]
        out = [mpq(0)] * (m + 1)
        for i in nz_a:
            ai = a[i]
            for j in range(m + 1 - i):
                bj = b[j]
                if bj:
                    out[i + j] += ai * bj
        return TruncSeries(out, m)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, TruncSeries):
            k = mpq(other)
            return TruncSeries([c / k for c in self._c], self.order)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, e):
        if isinstance(e, int) and e >= 0:
            out = TruncSeries.one(self.order)
            base = self
            while e:
                if e & 1:
                    out = out * base
                base = base * base
                e >>= 1
            return out
        return pow_rational(self, e)

    def inverse(self) -> "TruncSeries":
        b = self._c
        if b[0] == 0:
            raise SeriesError("series with zero constant term is not invertible")
        inv0 = 1 / b[0]
        nz = [j for j in range(1, self.order + 1) if b[j]]
        out = [inv0]
        for n in range(1, self.order + 1):
            acc = mpq(0)
            for j in nz:
                if j > n:
                    break
                acc += b[j] * out[n - j]
            out.append(-acc * inv0)
        return TruncSeries(out, self.order)

    # calculus and substitutions ---------------------------------------------

    def derivative(self) -> "TruncSeries":
        """d/dz; the result has order M-1."""
        if self.order == 0:
            return TruncSeries([0], 0)
        return TruncSeries([i * self._c[i] for i in range(1, self.order + 1)], self.order - 1)

    def theta(self) -> "TruncSeries":
        """z d/dz, order preserving."""
        return TruncSeries([i * c for i, c in enumerate(self._c)], self.order)

    def shift_up(self, k: int = 1) -> "TruncSeries":
        """Multiply by z^k, keeping the order."""
        return TruncSeries([0] * k + list(self._c[: self.order + 1 - k]), self.order)

    def shift_down(self, k: int = 1) -> "TruncSeries":
        """Divide by z^k; requires the first k coefficients to vanish."""
        if any(self._c[:k]):
            raise SeriesError(f"series is not divisible by z^{k}")
        return TruncSeries(self._c[k:], self.order - k)

    def valuation(self):
        for i, c in enumerate(self._c):
            if c:
                return i
        return INF

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self._c)


def arith(a: TruncSeries, b: TruncSeries, op: str) -> TruncSeries:
    """Named dispatcher for the four ring operations."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise SeriesError(f"unknown op {op!r}")


def exp_series(t: TruncSeries) -> TruncSeries:
    """exp of a series with zero constant term: n e_n = sum_j j t_j e_{n-j}."""
    if t[0] != 0:
        raise SeriesError("exp needs a zero constant term")
    c = t.coeffs
    jt = [(j, j * c[j]) for j in range(1, t.order + 1) if c[j]]
    e = [mpq(1)]
    for n in range(1, t.order + 1):
        acc = mpq(0)
        for j, w in jt:
            if j > n:
                break
            acc += w * e[n - j]
        e.append(acc / n)
    return TruncSeries(e, t.order)


def log_series(s: TruncSeries) -> TruncSeries:
    """log of a series with constant term 1."""
    if s[0] != 1:
        raise SeriesError("log needs constant term 1")
    c = s.coeffs
    out = [mpq(0)]
    for n in range(1, s.order + 1):
        acc = mpq(0)
        for j in range(1, n):
            if out[j] and c[n - j]:
                acc += j * out[j] * c[n - j]
        out.append(c[n] - acc / n)
    return TruncSeries(out, s.order)


def iter_power_coefficients(s: TruncSeries, e) -> Iterator:
    """Yield the coefficients of s^e one at a time (s(0) = 1).

    Uses n w_n = sum_{j=1}^n ((e+1) j - n) s_j w_{n-j}, which follows from
    s * (s^e)' = e * s' * s^e. Lazy so witness searches can stop early.
    """
    if s[0] != 1:
        raise SeriesError("rational powers need constant term 1")
    e = mpq(e)
    c = s.coeffs
    nz = [(j, c[j]) for j in range(1, s.order + 1) if c[j]]
    w = [mpq(1)]
    yield w[0]
    e1 = e + 1
    for n in range(1, s.order + 1):
        acc = mpq(0)
        for j, sj in nz:
            if j > n:
                break
            acc += (e1 * j - n) * sj * w[n - j]
        wn = acc / n
        w.append(wn)
        yield wn


def pow_rational(s: TruncSeries, e) -> TruncSeries:
    return TruncSeries(list(iter_power_coefficients(s, e)), s.order)


def substitute_pth_power(s: TruncSeries, p: int) -> TruncSeries:
    """s(z^p) at the same truncation order."""
    if p < 1:
        raise SeriesError("p must be positive")
    out = [mpq(0)] * (s.order + 1)
    for m in range(0, s.order // p + 1):
        out[m * p] = s[m]
    return TruncSeries(out, s.order)


def compose(f: TruncSeries, g: TruncSeries) -> TruncSeries:
    """f(g(z)) for g(0) = 0, by Horner's rule; order min(f.order, g.order)."""
    if g[0] != 0:
        raise SeriesError("inner series must have zero constant term")
    m = min(f.order, g.order)
    g = g.truncate(m)
    out = TruncSeries([f[m]], m)
    for i in range(m - 1, -1, -1):
        out = out * g + f[i]
    return out


def reversion(s: TruncSeries) -> TruncSeries:
    """Compositional inverse of s = z + O(z^2) by Lagrange inversion.

    t_n = (1/n) [z^{n-1}] (z/s(z))^n.
    """
    if s.order < 1 or s[0] != 0 or s[1] != 1:
        raise SeriesError("reversion needs s = z + O(z^2)")
    m = s.order
    w = s.shift_down(1).inverse()  # z/s, order m-1
    out = [mpq(0), mpq(1)]
    for n in range(2, m + 1):
        powers = iter_power_coefficients(w.truncate(n - 1), n)
        coeff = None
        for coeff in powers:
            pass
        out.append(coeff / n)
    return TruncSeries(out, m)


# -- reports --------------------------------------------------------------------


def integrality_report(s: TruncSeries) -> CertReport:
    """Pass iff every coefficient is an integer; otherwise name the first culprit."""
    for i, c in enumerate(s.coeffs):
        if c.denominator != 1:
            den = int(c.denominator)
            fac, rest = factor_small(den)
            p0 = min(fac) if fac else None
            val = vp_rat(c, p0) if p0 is not None else None
            parts = [f"{p}^{e}" if e > 1 else str(p) for p, e in sorted(fac.items())]
            if rest != 1:
                parts.append(f"({rest})")
            return CertReport(
                False,
                s.order,
                witness_index=i,
                witness_valuation=val,
                detail=f"denominator {den} = " + "*".join(parts),
                extra={"denominator": den, "factors": fac},
            )
    return CertReport(True, s.order, detail="all coefficients integral")


class MinValuation(NamedTuple):
    value: float
    index: int | None


def min_valuation_report(s: TruncSeries, p: int, from_index: int = 0) -> MinValuation:
    """Smallest v_p over coefficients from ``from_index`` on, zeros ignored."""
    best, where = INF, None
    for i in range(from_index, s.order + 1):
        c = s[i]
        if c:
            v = vp_rat(c, p)
            if v < best:
                best, where = v, i
    return MinValuation(best, where)


# -- serialisation -------------------------------------------------------------


def series_to_dict(s: TruncSeries) -> dict:
    return {
        "order": str(s.order),
        "coeffs": [{"num": str(c.numerator), "den": str(c.denominator)} for c in s.coeffs],
    }


def series_from_dict(d: dict) -> TruncSeries:
    coeffs = [mpq(int(c["num"]), int(c["den"])) for c in d["coeffs"]]
    return TruncSeries(coeffs, int(d["order"]))


def series_to_json(s: TruncSeries) -> str:
    return json.dumps(series_to_dict(s))


def series_from_json(text: str) -> TruncSeries:
    return series_from_dict(json.loads(text))


# -- A(z) + B(z) log z ---------------------------------------------------------


@dataclass(frozen=True)
class LogSeries:
    """A(z) + B(z) log z, with both parts at one truncation order."""

    plain: TruncSeries
    logpart: TruncSeries

    def __post_init__(self):
        if self.plain.order != self.logpart.order:
            raise SeriesError("both parts must share one order")

    @property
    def order(self) -> int:
        return self.plain.order

    def __add__(self, other: "LogSeries") -> "LogSeries":
        return LogSeries(self.plain + other.plain, self.logpart + other.logpart)

    def __sub__(self, other: "LogSeries") -> "LogSeries":
        return LogSeries(self.plain - other.plain, self.logpart - other.logpart)

    def scale(self, c) -> "LogSeries":
        return LogSeries(self.plain * c, self.logpart * c)

    def shift_up(self, k: int = 1) -> "LogSeries":
        return LogSeries(self.plain.shift_up(k), self.logpart.shift_up(k))

    def is_zero(self, upto: int | None = None) -> bool:
        upto = self.order if upto is None else upto
        return not any(self.plain[: upto + 1]) and not any(self.logpart[: upto + 1])


def apply_theta_operator(y: LogSeries, shift=0) -> LogSeries:
    """(theta + shift) applied to A + B log z, with theta = z d/dz.

    theta(A + B log z) = (theta A + B) + (theta B) log z.
    """
    a, b = y.plain, y.logpart
    plain = a.theta() + b
    logpart = b.theta()
    if shift:
        plain = plain + a * shift
        logpart = logpart + b * shift
    return LogSeries(plain, logpart)
