import math

import pytest
from gmpy2 import mpq

from mirrormaps.certify import (
    KNOWN_WOLSTENHOLME,
    RootExponent,
    certify_theorem,
    empirical_max_root,
    gcd_sequence_A056612,
    is_wolstenholme_prime,
    omega_cap,
    root_report,
    sharpness_witness,
    tN,
    tN_value,
    theorem_exponent,
    uN,
    uN_value,
    xi,
)
from mirrormaps.coefficients import capital_M
from mirrormaps.maps import build_qLN, build_qN
from mirrormaps.padic import factorial, harmonic, primes_up_to, theta, vp_rat
from mirrormaps.series import TruncSeries

A056612_PRINTED = [1, 1, 1, 2, 2, 36, 36, 144, 144, 1440, 1440, 17280, 17280,
                   241920, 3628800, 29030400]


def test_capital_M_examples():
    assert capital_M((5,)) == 120
    assert capital_M((2, 2, 2, 2)) == 16
    f = math.factorial
    assert capital_M((12, 6, 4, 3, 2)) == f(12) * f(6) * f(4) * f(3) * f(2)


def test_gcd_sequence_printed_values():
    assert [gcd_sequence_A056612(N) for N in range(1, 17)] == A056612_PRINTED
    for N in range(1, 40):
        assert gcd_sequence_A056612(N) * theta(N) == factorial(N)


def test_xi_examples():
    assert xi(1) == 1
    assert xi(7) == mpq(1, 140)
    assert xi(5) == mpq(1, 60)
    assert vp_rat(xi(20), 5) == 1 == vp_rat(harmonic(20), 5)


def test_omega_examples():
    assert omega_cap(5) == mpq(1, 60)
    assert omega_cap(2) == mpq(1, 2)
    assert vp_rat(omega_cap(21), 5) == 1 == vp_rat(harmonic(21) - 1, 5)
    with pytest.raises(ValueError):
        omega_cap(1)


def test_xi_refines_theta_root():
    # Xi_N N!^k / (M / Theta_N) is a positive integer
    for N in range(1, 61):
        for k in (1, 2):
            ratio = xi(N) * factorial(N) ** k / mpq(factorial(N) ** k, theta(N))
            assert ratio.denominator == 1 and ratio > 0


def test_t_and_u_values():
    assert tN_value(4) == 2
    assert tN_value(7) == 36
    assert uN_value(5) == 2
    assert mpq(1, uN_value(5) * 5) == theorem_exponent("Cor1", {"N": 5}).value == mpq(1, 10)


def test_wolstenholme_predicate():
    assert is_wolstenholme_prime(16843)
    assert not is_wolstenholme_prime(7)
    assert is_wolstenholme_prime(2124679)
    assert KNOWN_WOLSTENHOLME == {16843, 2124679}
    with pytest.raises(ValueError):
        is_wolstenholme_prime(3)
    for p in primes_up_to(400):
        if p >= 5:
            assert vp_rat(harmonic(p - 1), p) >= 2


def test_root_exponent_is_positive():
    with pytest.raises(ValueError):
        RootExponent(mpq(0), "zero")


def test_cor1_quintic():
    rep = certify_theorem("Cor1", {"N": 5, "k": 1}, 200)
    assert rep.passed
    assert rep.extra["exponent"] == mpq(1, 10)


@pytest.mark.parametrize("N", [2, 3, 5, 6, 8])
def test_theorem2_at_L1_is_exactly_one_over_M(N):
    params = {"Nvec": (N,), "L": 1}
    assert theorem_exponent("T2", params).value == mpq(1, factorial(N))
    assert certify_theorem("T2", params, 100).passed


@pytest.mark.parametrize("L", range(1, 7))
def test_theorem4_six_four(L):
    assert certify_theorem("T4", {"Nvec": (6, 4), "L": L}, 60).passed


@pytest.mark.parametrize("Nvec,L", [((3, 2), 2), ((4,), 3), ((2, 2, 2), 2), ((5, 3), 5)])
def test_theorem2_root_implies_theorem1(Nvec, L):
    params = {"Nvec": Nvec, "L": L}
    e = theorem_exponent("T2", params).value
    assert (1 / e).denominator == 1
    t2 = certify_theorem("T2", params, 50)
    t1 = certify_theorem("T1", params, 50)
    assert t2.passed and t1.passed


@pytest.mark.parametrize("theorem,params", [
    ("T3", {"N": 4, "k": 1}), ("T3", {"N": 3, "k": 2}),
    ("T3a", {"N": 4, "k": 1}), ("T3a", {"N": 3, "k": 2}),
    ("Conj2", {"Nvec": (4, 2)}),
])
def test_other_theorems_pass(theorem, params):
    assert certify_theorem(theorem, params, 60).passed


def test_certify_rejects_illegal_params():
    with pytest.raises(ValueError):
        certify_theorem("T2", {"Nvec": (3, 2), "L": 4}, 10)
    with pytest.raises(ValueError):
        certify_theorem("T9", {"N": 3}, 10)
    with pytest.raises(ValueError):
        certify_theorem("Cor1", {}, 10)


def test_root_report_witness():
    s = build_qN(5, 1, 50).normalized
    rep = root_report(s, mpq(1, 20))
    assert not rep.passed and rep.witness_index is not None
    assert root_report(s, mpq(1, 10)).passed


def test_empirical_max_root_examples():
    sq = TruncSeries([1, 2, 1], 20)
    assert empirical_max_root(sq, 13).value == 2
    quintic = empirical_max_root(build_qN(5, 1, 200).normalized, 13)
    assert quintic.value == 10 and quintic.label == "EMPIRICAL"
    assert empirical_max_root(build_qLN((6,), 1, 100, "zudilin").q, 13).value == 60
    with pytest.raises(ValueError):
        empirical_max_root(TruncSeries([1, mpq(1, 2)], 5), 5)


def test_zudilin_six_root_profile():
    # data for the open L >= 2 question; order 60 keeps this quick
    got = [empirical_max_root(build_qLN((6,), L, 60, "zudilin").q, 13).value for L in range(1, 7)]
    assert got == [60, 6, 2, 1, 1, 1]


@pytest.mark.parametrize("Nvec,L", [((3,), 1), ((4,), 2), ((3, 2), 3)])
def test_max_root_is_multiple_of_certified_root(Nvec, L):
    certified = 1 / theorem_exponent("T2", {"Nvec": Nvec, "L": L}).value
    found = empirical_max_root(build_qLN(Nvec, L, 40).q, 13).value
    assert found % int(certified) == 0


@pytest.mark.parametrize("N,expected", [(2, 1), (3, 1), (4, 2), (5, 2), (6, 36)])
def test_tN_reports(N, expected):
    t, rep = tN(N, 150)
    assert t == expected
    assert rep.passed, rep.detail


def test_uN_quintic():
    u, rep = uN(5, 200)
    assert u == 2 and rep.passed


@pytest.mark.xfail(strict=True, reason="no 3-adic sharpness witness for t_7 = 36 exists at order 200")
def test_t7_both_halves():
    t, rep = tN(7, 200)
    assert t == 36
    assert rep.passed


def test_t7_root_holds_but_three_is_not_sharp():
    t, rep = tN(7, 150)
    assert t == 36
    assert rep.extra["missing"] == [3]
    # the exponent of 3 can be raised once more within this order
    assert root_report(build_qLN((7,), 7, 150).q, mpq(1, 108)).passed


def test_sharpness_p_greater_than_N():
    rep = sharpness_witness("p>N", 7, 5)
    assert rep.passed and rep.extra["a"] == 2
    rep = sharpness_witness("p>N", 11, 1)
    assert rep.passed and rep.extra["a"] == 1
    rep = sharpness_witness("p>N2", 7, 3)
    assert rep.passed
    with pytest.raises(ValueError):
        sharpness_witness("p>N", 5, 7)


def test_sharpness_valuation_three():
    rep = sharpness_witness("vp=3", 11, 848)
    assert rep.passed
    assert rep.witness_valuation < rep.extra["bound"]
    with pytest.raises(ValueError):
        sharpness_witness("vp=3", 11, 847)


def test_sharpness_valuation_three_shifted_hypotheses():
    # no N with v_p(H_N - 1) = 3 is known; hypotheses must be rejected
    with pytest.raises(ValueError):
        sharpness_witness("vp=32", 11, 848)
    with pytest.raises(ValueError):
        sharpness_witness("vp=32", 5, 21)
