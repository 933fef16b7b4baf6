import math

import pytest
from gmpy2 import mpq
from hypothesis import given, strategies as st

from mirrormaps.maps import build_FN, build_GN, build_qN
from mirrormaps.padic import INF, vp_rat
from mirrormaps.series import (
    LogSeries,
    SeriesError,
    TruncSeries,
    apply_theta_operator,
    arith,
    compose,
    exp_series,
    integrality_report,
    log_series,
    min_valuation_report,
    pow_rational,
    reversion,
    series_from_json,
    series_to_json,
    substitute_pth_power,
)

Z = TruncSeries.monomial(1, 20)


def S(*coeffs, order=None):
    return TruncSeries([mpq(c) for c in coeffs], order)


small_rat = st.builds(mpq, st.integers(-9, 9), st.integers(1, 5))


def series(order, const=None, linear=None):
    def build(cs):
        cs = list(cs)
        if const is not None:
            cs[0] = mpq(const)
        if linear is not None:
            cs[1] = mpq(linear)
        return TruncSeries(cs, order)

    return st.lists(small_rat, min_size=order + 1, max_size=order + 1).map(build)


def test_order_is_min_of_operands():
    a = TruncSeries.one(10)
    b = TruncSeries.one(6)
    assert (a + b).order == 6
    assert (a * b).order == 6
    assert len(a * b) == 7


def test_arith_examples():
    one_plus = S(1, 1, 0, 0, order=5)
    one_minus = S(1, -1, 0, 0, order=5)
    assert arith(one_plus, one_minus, "mul") == S(1, 0, -1, order=5)
    geo = TruncSeries.one(12) / S(1, -1, order=12)
    assert list(geo) == [1] * 13
    F2 = TruncSeries.from_function(lambda m: math.comb(2 * m, m), 50)
    assert F2 * F2.inverse() == TruncSeries.one(50)
    assert arith(F2, F2, "div") == TruncSeries.one(50)


def test_division_by_non_unit_rejected():
    with pytest.raises(SeriesError):
        TruncSeries.one(5) / Z.truncate(5)


def test_exp_examples():
    assert exp_series(TruncSeries.zero(8)) == TruncSeries.one(8)
    e = exp_series(Z)
    assert all(e[m] == mpq(1, math.factorial(m)) for m in range(21))
    log1pz = log_series(S(1, 1, order=40))
    assert exp_series(log1pz) == S(1, 1, order=40)
    with pytest.raises(SeriesError):
        exp_series(TruncSeries.one(4))


def test_log_examples():
    assert log_series(TruncSeries.one(9)) == TruncSeries.zero(9)
    lg = log_series(TruncSeries.one(15) / S(1, -1, order=15))
    assert lg[0] == 0 and all(lg[m] == mpq(1, m) for m in range(1, 16))
    with pytest.raises(SeriesError):
        log_series(S(2, 1, order=3))


def test_exp_log_round_trip_on_quintic_map():
    s = build_qN(5, 1, 31).q.shift_down(1)
    assert s.order == 30
    assert exp_series(log_series(s)) == s


def test_pow_examples():
    s = S(1, 3, 1, order=10)
    assert s ** mpq(0) == TruncSeries.one(10)
    sq = S(1, 1, order=10) ** 2
    assert pow_rational(sq, mpq(1, 2)) == S(1, 1, order=10)
    root = pow_rational(build_qN(2, 1, 61).q.shift_down(1), mpq(1, 2))
    assert root.order == 60 and root.is_integral()
    with pytest.raises(SeriesError):
        pow_rational(S(3, 1, order=2), mpq(1, 2))


def test_substitute_examples():
    assert substitute_pth_power(S(1, 1, order=6), 3) == S(1, 0, 0, 1, order=6)
    s = TruncSeries.from_function(lambda m: m * m + 1, 30)
    out = substitute_pth_power(s, 5)
    assert out.order == 30
    for m in range(31):
        assert out[m] == (s[m // 5] if m % 5 == 0 else 0)


def test_reversion_examples():
    assert reversion(Z) == Z
    r = reversion(S(0, 1, 1, order=8))
    assert list(r)[:5] == [0, 1, -1, 2, -5]
    catalan = [0] + [(-1) ** (n - 1) * math.comb(2 * n - 2, n - 1) // n for n in range(1, 9)]
    assert list(r) == catalan
    q5 = build_qN(5, 1, 40).q
    assert compose(q5, reversion(q5)) == TruncSeries.monomial(1, 40)
    with pytest.raises(SeriesError):
        reversion(S(0, 2, 1, order=4))
    with pytest.raises(SeriesError):
        reversion(S(1, 1, order=4))


def test_integrality_report_examples():
    assert integrality_report(S(1, 1, 1)).passed
    rep = integrality_report(S(1, mpq(1, 2)))
    assert not rep.passed
    assert rep.witness_index == 1
    assert rep.extra["denominator"] == 2
    assert integrality_report(build_qN(5, 1, 100).q).passed


def test_integrality_report_factorises_denominator():
    rep = integrality_report(S(1, 3, mpq(5, 72)))
    assert rep.witness_index == 2
    assert rep.extra["factors"] == {2: 3, 3: 2}


def test_min_valuation_examples():
    mv = min_valuation_report(S(0, 3, 9), 3, 1)
    assert (mv.value, mv.index) == (1, 1)
    assert min_valuation_report(TruncSeries.zero(5), 7, 0).value == INF


def test_min_valuation_pipeline_instance():
    p, M = 3, 30
    F, G = build_FN(5, 1, M), build_GN(5, 1, M)
    diff = F * substitute_pth_power(G, p) - p * substitute_pth_power(F, p) * G
    # 1 + v_3(5!/60) = 1
    assert min_valuation_report(diff, p, 0).value >= 1 + vp_rat(mpq(120, 60), 3)


def test_theta_operator_examples():
    zero = TruncSeries.zero(6)
    log_z = LogSeries(zero, TruncSeries.one(6))
    assert apply_theta_operator(log_z) == LogSeries(TruncSeries.one(6), zero)
    z3 = TruncSeries.monomial(3, 6)
    assert apply_theta_operator(LogSeries(z3, zero)) == LogSeries(3 * z3, zero)
    assert apply_theta_operator(LogSeries(zero, z3)) == LogSeries(z3, 3 * z3)


def test_json_round_trip_is_bit_exact():
    s = S(mpq(-10**40, 3), 0, mpq(7, 10**25), order=5)
    text = series_to_json(s)
    assert series_from_json(text) == s
    assert series_to_json(series_from_json(text)) == text


def test_shift_down_requires_zero_prefix():
    with pytest.raises(SeriesError):
        S(1, 1, order=3).shift_down(1)


# -- algebraic properties ------------------------------------------------------


@given(series(10), series(10), series(10))
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a
    assert a * b == b * a
    assert a - a == TruncSeries.zero(10)


@given(series(15, const=0), series(15, const=0))
def test_exp_is_a_homomorphism(a, b):
    assert exp_series(a + b) == exp_series(a) * exp_series(b)


@given(series(15, const=1), series(15, const=1))
def test_log_is_a_homomorphism(a, b):
    assert log_series(a * b) == log_series(a) + log_series(b)


@given(series(15, const=1), small_rat, small_rat)
def test_pow_exponents_add(s, e1, e2):
    assert pow_rational(s, e1 + e2) == pow_rational(s, e1) * pow_rational(s, e2)


@given(series(15, const=1), st.integers(0, 6))
def test_integer_pow_matches_repeated_product(s, n):
    prod = TruncSeries.one(15)
    for _ in range(n):
        prod = prod * s
    assert s**n == prod == pow_rational(s, mpq(n))


@given(series(12, const=0, linear=1))
def test_reversion_is_two_sided(s):
    r = reversion(s)
    ident = TruncSeries.monomial(1, 12)
    assert compose(s, r) == ident
    assert compose(r, s) == ident


@given(series(12), series(12), st.integers(2, 5))
def test_substitution_is_a_ring_homomorphism(a, b, p):
    sub = lambda s: substitute_pth_power(s, p)
    assert sub(a * b) == sub(a) * sub(b)
    assert sub(a + b) == sub(a) + sub(b)
