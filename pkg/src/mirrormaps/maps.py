"""Builders for the hypergeometric series F, G and the maps exp(G/F)."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from gmpy2 import mpq

from .coefficients import (
    PLAIN,
    ZUDILIN,
    HyperSpec,
    bN,
    bbVec,
    coefficient,
    hN,
    zudilin_data,
)
from .padic import harmonic, harmonic_shifted
from .report import CertReport
from .series import (
    LogSeries,
    TruncSeries,
    apply_theta_operator,
    exp_series,
    pow_rational,
)


@dataclass(frozen=True)
class MirrorInstance:
    """A built map together with the series it came from.

    ``kind`` is "z" for maps of the form z*exp(G/F) and "exp" for exp(G/F).
    """

    spec: HyperSpec
    k: int
    order: int
    F: TruncSeries
    G: TruncSeries
    q: TruncSeries
    kind: str = "z"

    def __post_init__(self):
        if self.F[0] != 1 or self.G[0] != 0:
            raise ArithmeticError("expected F(0) = 1 and G(0) = 0")
        if self.kind == "z":
            if self.q[0] != 0 or (self.order >= 1 and self.q[1] != 1):
                raise ArithmeticError("z-type map must be z + O(z^2)")
        elif self.q[0] != 1:
            raise ArithmeticError("exp-type map must have constant term 1")

    @property
    def normalized(self) -> TruncSeries:
        """The unit series: z^{-1} q for z-type maps, q itself otherwise.

        For z-type maps this keeps the full order, since it is exp(G/F).
        """
        if self.kind == "z":
            return exp_series(self.G / self.F)
        return self.q


def _with_exp(spec, k, order, F, G, kind) -> MirrorInstance:
    e = exp_series(G / F)
    q = e.shift_up(1) if kind == "z" else e
    return MirrorInstance(spec, k, order, F, G, q, kind)


# -- plain family --------------------------------------------------------------


def build_FN(N: int, k: int, order: int) -> TruncSeries:
    if N < 1 or k < 1:
        raise ValueError("N and k must be positive")
    return TruncSeries.from_function(lambda m: bN(N, m) ** k, order)


def build_GN(N: int, k: int, order: int, method: str = "harmonic") -> TruncSeries:
    """k * sum_m B_N(m)^k (sum_{j<N} H(j/N, m) - (N-1) H_m) z^m.

    ``method="shifted"`` follows that definition literally; the default
    ``"harmonic"`` uses the equivalent weight N (H_{Nm} - H_m).
    """
    if N < 1 or k < 1:
        raise ValueError("N and k must be positive")

    if method == "harmonic":
        def weight(m):
            return N * (harmonic(N * m) - harmonic(m))
    elif method == "shifted":
        def weight(m):
            s = sum((harmonic_shifted(mpq(j, N), m) for j in range(1, N)), mpq(0))
            return s - (N - 1) * harmonic(m)
    else:
        raise ValueError(f"unknown method {method!r}")
    return TruncSeries.from_function(lambda m: k * bN(N, m) ** k * weight(m), order)


def build_qN(N: int, k: int, order: int) -> MirrorInstance:
    """q_N = z exp(G_N/F_N)."""
    F = build_FN(N, k, order)
    G = build_GN(N, k, order)
    return _with_exp(HyperSpec((N,) * k), k, order, F, G, "z")


def build_F_vec(Nvec: Sequence[int], order: int, family: str = PLAIN) -> TruncSeries:
    Nvec = tuple(Nvec)
    return TruncSeries.from_function(lambda m: coefficient(Nvec, m, family), order)


def build_G_L(Nvec: Sequence[int], L: int, order: int, family: str = PLAIN) -> TruncSeries:
    """sum_m H_{Lm} B(m) z^m for either coefficient family."""
    Nvec = tuple(Nvec)
    return TruncSeries.from_function(
        lambda m: harmonic(L * m) * coefficient(Nvec, m, family), order
    )


def build_qLN(Nvec: Sequence[int], L: int, order: int, family: str = PLAIN) -> MirrorInstance:
    """exp(G_L/F) for the vector Nvec; L must lie in 1..max(Nvec)."""
    spec = HyperSpec(tuple(Nvec), L, family)
    F = build_F_vec(spec.Nvec, order, family)
    G = build_G_L(spec.Nvec, L, order, family)
    return _with_exp(spec, len(spec.Nvec), order, F, G, "exp")


def build_plain_vector_q(Nvec: Sequence[int], order: int) -> MirrorInstance:
    """z exp(G/F) with F = sum B_N(m) z^m and G weights sum_j N_j (H_{N_j m} - H_m)."""
    spec = HyperSpec(tuple(Nvec), None, PLAIN)
    F = build_F_vec(spec.Nvec, order, PLAIN)

    def g(m):
        w = sum((n * (harmonic(n * m) - harmonic(m)) for n in spec.Nvec), mpq(0))
        return w * coefficient(spec.Nvec, m, PLAIN)

    G = TruncSeries.from_function(g, order)
    return _with_exp(spec, len(spec.Nvec), order, F, G, "z")


def build_q_tilde(N: int, k: int, order: int) -> MirrorInstance:
    """exp(G~/F) with G~ weights H_{Nm} - H_m; equals (z^{-1} q_N)^{1/(kN)}."""
    if N < 2:
        raise ValueError("the tilde map needs N >= 2")
    F = build_FN(N, k, order)
    G = TruncSeries.from_function(
        lambda m: bN(N, m) ** k * (harmonic(N * m) - harmonic(m)), order
    )
    return _with_exp(HyperSpec((N,) * k), k, order, F, G, "exp")


# -- Zudilin family ------------------------------------------------------------


def build_bold_F(Nvec: Sequence[int], order: int) -> TruncSeries:
    return build_F_vec(Nvec, order, ZUDILIN)


def build_bold_G(Nvec: Sequence[int], order: int) -> TruncSeries:
    """sum_m (sum_j H-bold_{N_j}(m)) B-bold(m) z^m; repeated entries repeat terms."""
    Nvec = tuple(Nvec)

    def g(m):
        if m == 0:
            return 0
        return sum((hN(n, m) for n in Nvec), mpq(0)) * bbVec(Nvec, m)

    return TruncSeries.from_function(g, order)


def build_bold_q(Nvec: Sequence[int], order: int) -> MirrorInstance:
    spec = HyperSpec(tuple(Nvec), None, ZUDILIN)
    F = build_bold_F(spec.Nvec, order)
    G = build_bold_G(spec.Nvec, order)
    return _with_exp(spec, len(spec.Nvec), order, F, G, "z")


def build_mirror(spec: HyperSpec, order: int, k: int = 1) -> MirrorInstance:
    """Dispatch used by the command line: L selects the exp(G_L/F) maps.

    ``k`` repeats the vector k times, so F_N^k is the vector (N, ..., N).
    """
    if k < 1:
        raise ValueError("k must be positive")
    Nvec = tuple(spec.Nvec) * k
    if spec.L is not None:
        return build_qLN(Nvec, spec.L, order, spec.family)
    if spec.family == ZUDILIN:
        return build_bold_q(Nvec, order)
    if len(set(Nvec)) == 1:
        return build_qN(Nvec[0], len(Nvec), order)
    return build_plain_vector_q(Nvec, order)


# -- identities ----------------------------------------------------------------


def _first_difference(a: TruncSeries, b: TruncSeries):
    for i in range(min(a.order, b.order) + 1):
        if a[i] != b[i]:
            return i
    return None


def truemap_check(N: int, k: int, order: int) -> CertReport:
    """q_N = z * q_{N,N}^{kN} * q_{1,N}^{-kN}, coefficient by coefficient."""
    lhs = build_qN(N, k, order).q
    Nvec = (N,) * k
    top = build_qLN(Nvec, N, order).q
    bottom = build_qLN(Nvec, 1, order).q
    rhs = (pow_rational(top, k * N) * pow_rational(bottom, -k * N)).shift_up(1)
    bad = _first_difference(lhs, rhs)
    if bad is None:
        return CertReport(True, order, detail="identity holds to order")
    return CertReport(False, order, witness_index=bad, detail="coefficients differ")


def picard_fuchs_operator(Nvec: Sequence[int], y: LogSeries) -> LogSeries:
    """theta^D y - z C prod_{j, r} (theta + r/N_j) y, with D = sum phi(N_j)."""
    data = [zudilin_data(n) for n in Nvec]
    D = sum(d.phi for d in data)
    C = 1
    for d in data:
        C *= d.C
    top = y
    for _ in range(D):
        top = apply_theta_operator(top)
    rest = y
    for d in data:
        for r in d.residues:
            rest = apply_theta_operator(rest, mpq(r, d.N))
    return top - rest.shift_up(1).scale(C)


def picard_fuchs_check(Nvec: Sequence[int], order: int) -> CertReport:
    """Check that the operator kills F and G + F log z on indices 0..order-1."""
    Nvec = tuple(Nvec)
    F = build_bold_F(Nvec, order)
    G = build_bold_G(Nvec, order)
    zero = TruncSeries.zero(order)
    checks = (
        ("F", LogSeries(F, zero)),
        ("G + F log z", LogSeries(G, F)),
    )
    for label, y in checks:
        out = picard_fuchs_operator(Nvec, y)
        for i in range(order):
            if out.plain[i] or out.logpart[i]:
                return CertReport(
                    False, order, witness_index=i, detail=f"{label} not annihilated"
                )
    return CertReport(True, order, detail=f"annihilated through index {order - 1}")
