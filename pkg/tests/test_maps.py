import math

import pytest
from gmpy2 import mpq

from mirrormaps.coefficients import HyperSpec, bN, divisor_vector
from mirrormaps.maps import (
    MirrorInstance,
    build_bold_F,
    build_bold_G,
    build_bold_q,
    build_FN,
    build_GN,
    build_mirror,
    build_plain_vector_q,
    build_qLN,
    build_qN,
    build_q_tilde,
    picard_fuchs_check,
    picard_fuchs_operator,
    truemap_check,
)
from mirrormaps.padic import factorial, harmonic
from mirrormaps.series import LogSeries, TruncSeries, compose, pow_rational, reversion


def test_FN_examples():
    assert list(build_FN(1, 3, 10)) == [1] * 11
    F2 = build_FN(2, 1, 25)
    assert list(F2) == [math.comb(2 * m, m) for m in range(26)]
    # F_2^2 (1 - 4z) = 1
    assert F2 * F2 * TruncSeries([1, -4], 25) == TruncSeries.one(25)
    assert build_FN(5, 1, 3)[1] == 120
    assert build_FN(3, 2, 4)[2] == bN(3, 2) ** 2


def test_GN_examples():
    assert build_GN(1, 2, 15) == TruncSeries.zero(15)
    assert build_GN(5, 1, 3)[1] == 770 == 120 * 5 * (harmonic(5) - 1)


def test_GN_constructions_agree():
    for N in range(1, 13):
        for k in (1, 2):
            assert build_GN(N, k, 40, "harmonic") == build_GN(N, k, 40, "shifted")


def test_qN_examples():
    catalan = [0] + [math.comb(2 * n, n) // (n + 1) for n in range(1, 21)]
    assert list(build_qN(2, 1, 20).q) == catalan
    assert build_qN(5, 1, 5).q[2] == 770
    assert build_qN(1, 3, 12).q == TruncSeries.monomial(1, 12)


def test_q2_closed_form():
    # q_2 = 4z / (1 + sqrt(1 - 4z))^2
    M = 30
    root = pow_rational(TruncSeries([1, -4], M), mpq(1, 2))
    denom = (1 + root) ** 2
    closed = TruncSeries([0, 4], M) / denom
    assert closed == build_qN(2, 1, M).q


def test_instance_invariants_are_enforced():
    F = TruncSeries.one(3)
    G = TruncSeries.zero(3)
    with pytest.raises(ArithmeticError):
        MirrorInstance(HyperSpec((2,)), 1, 3, F, G, TruncSeries.one(3), "z")
    with pytest.raises(ArithmeticError):
        MirrorInstance(HyperSpec((2,)), 1, 3, F * 2, G, TruncSeries.monomial(1, 3), "z")
    with pytest.raises(ArithmeticError):
        MirrorInstance(HyperSpec((2,)), 1, 3, F, G, TruncSeries.zero(3), "exp")


def test_qLN_examples():
    for N, k in [(3, 1), (4, 2), (5, 3)]:
        q = build_qLN((N,) * k, N, 6).q
        assert q[0] == 1
        assert q[1] == factorial(N) ** k * harmonic(N)
    assert build_qLN((6,), 1, 10, "zudilin").q[1] == 60
    for fam in ("plain", "zudilin"):
        for L in (1, 2, 4):
            assert build_qLN((4, 3), L, 5, fam).q[0] == 1
    with pytest.raises(ValueError):
        build_qLN((4, 3), 5, 10)


def test_bold_q_prime_collapse():
    assert build_bold_q((5,), 25).q == build_qN(5, 1, 25).q
    assert build_bold_q((7,), 15).q == build_qN(7, 1, 15).q


def test_bold_q_nine():
    assert build_bold_q((9, 3), 20).q == build_qN(9, 1, 20).q


@pytest.mark.parametrize("N", [9, 12, 35])
def test_divisor_vector_collapse(N):
    assert build_bold_q(divisor_vector(N), 20).q == build_qN(N, 1, 20).q


def test_q35_needs_the_full_divisor_vector():
    q35 = build_qN(35, 1, 20).q
    assert build_bold_q((35, 7, 5), 20).q == q35
    short = build_bold_q((7, 5), 20).q
    assert short != q35
    assert short[2] != q35[2]


def test_q_tilde_examples():
    for N, k in [(2, 1), (3, 1), (5, 2)]:
        qt = build_q_tilde(N, k, 6).q
        assert qt[0] == 1
        assert qt[1] == (harmonic(N) - 1) * factorial(N) ** k
    assert build_q_tilde(2, 1, 60).q.is_integral()
    with pytest.raises(ValueError):
        build_q_tilde(1, 1, 10)


@pytest.mark.parametrize("N,k", [(2, 1), (5, 1), (4, 2)])
def test_q_tilde_matches_root_of_normalized_map(N, k):
    qt = build_q_tilde(N, k, 40).q
    via_root = pow_rational(build_qN(N, k, 40).normalized, mpq(1, k * N))
    assert qt == via_root


@pytest.mark.parametrize("N,k,order", [(5, 1, 30), (1, 2, 30), (6, 2, 25), (3, 1, 40)])
def test_truemap_identity(N, k, order):
    assert truemap_check(N, k, order).passed


def test_build_mirror_dispatch():
    assert build_mirror(HyperSpec((5,)), 10).q == build_qN(5, 1, 10).q
    assert build_mirror(HyperSpec((5,)), 10, k=2).q == build_qN(5, 2, 10).q
    assert build_mirror(HyperSpec((3, 2), 2), 10).q == build_qLN((3, 2), 2, 10).q
    assert build_mirror(HyperSpec((3, 2)), 10).q == build_plain_vector_q((3, 2), 10).q
    z = build_mirror(HyperSpec((6,), None, "zudilin"), 10)
    assert z.q == build_bold_q((6,), 10).q


def test_plain_vector_map_equal_entries_matches_power_family():
    assert build_plain_vector_q((3, 3), 20).q == build_qN(3, 2, 20).q


@pytest.mark.parametrize("Nvec", [(5,), (6,), (3, 3), (4, 2), (10,)])
def test_picard_fuchs_annihilates_both_solutions(Nvec):
    rep = picard_fuchs_check(Nvec, 25)
    assert rep.passed, rep.detail


def test_picard_fuchs_first_order_case():
    # phi(2) = 1: the operator is first order and kills F only
    F = build_bold_F((2,), 30)
    out = picard_fuchs_operator((2,), LogSeries(F, TruncSeries.zero(30)))
    assert out.is_zero(29)
    rep = picard_fuchs_check((2,), 25)
    assert not rep.passed
    assert rep.witness_index == 0
    assert "G + F log z" in rep.detail


def test_picard_fuchs_detects_a_wrong_G():
    F = build_bold_F((5,), 20)
    G = build_bold_G((5,), 20) + TruncSeries.monomial(3, 20)
    out = picard_fuchs_operator((5,), LogSeries(G, F))
    assert not out.is_zero(19)


def test_mirror_map_and_inverse_roots():
    for N, k, tau in [(5, 1, 10), (2, 1, 2)]:
        M = 40
        inst = build_qN(N, k, M)
        assert pow_rational(inst.normalized, mpq(1, tau)).is_integral()
        z_of_q = reversion(inst.q)
        unit = z_of_q.shift_down(1)
        assert pow_rational(unit, mpq(1, tau)).is_integral()
        assert compose(inst.q, z_of_q) == TruncSeries.monomial(1, M)


def test_build_mirror_repeats_vector_for_k():
    assert build_mirror(HyperSpec((3, 2)), 10, k=2).q == build_plain_vector_q((3, 2, 3, 2), 10).q
    assert build_mirror(HyperSpec((4,), 4), 8, k=2).q == build_qLN((4, 4), 4, 8).q
