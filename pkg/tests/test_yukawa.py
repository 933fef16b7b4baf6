import math

import pytest
from gmpy2 import mpq
from hypothesis import given, strategies as st

from mirrormaps.maps import build_plain_vector_q
from mirrormaps.series import TruncSeries, compose, reversion
from mirrormaps.yukawa import (
    instanton_numbers,
    lambert_decompose,
    lambert_synthesize,
    threefold_dimension,
    yukawa_K,
)

# published genus-zero counts for the quintic (OEIS A060041)
QUINTIC = [2875, 609250, 317206375, 242467530000, 229305888887625,
           248249742118022000, 295091050570845659250, 375632160937476603550000,
           503840510416985243645106250, 704288164978454686113488249750]

# first two counts for the other complete-intersection threefolds
OTHERS = {
    (3, 3): [1053, 52812],
    (4, 2): [1280, 92288],
    (2, 2, 2, 2): [512, 9728],
    (3, 2, 2): [720, 22428],
}

CY_VECTORS = [(12,), (5,), (8,), (10,), (3, 3), (4, 2, 2), (2, 2, 2, 2), (4, 4),
              (6, 6), (4, 3), (6, 2, 2), (3, 2, 2), (3, 6), (6, 4)]


def test_quintic_constant_term():
    assert yukawa_K((5,), 6)[0] == 5


def test_quintic_instanton_numbers():
    res = instanton_numbers((5,), 10)
    assert res.n == QUINTIC
    assert all(res.integral)


def test_quintic_lambert_coefficients():
    k = instanton_numbers((5,), 6).k
    assert k == [d**3 * QUINTIC[d - 1] for d in range(1, 7)]
    assert k[0] == 2875


def test_instanton_numbers_are_truncation_stable():
    a = instanton_numbers((5,), 7).n
    b = instanton_numbers((5,), 11).n
    assert a[:5] == b[:5] == QUINTIC[:5]
    K20, K30 = yukawa_K((5,), 20), yukawa_K((5,), 30)
    assert K30.truncate(K20.order) == K20


@pytest.mark.parametrize("Nvec,expected", list(OTHERS.items()))
def test_other_threefolds(Nvec, expected):
    res = instanton_numbers(Nvec, 4)
    assert all(res.integral)
    assert res.n[:2] == expected
    assert res.K[0] == math.prod(Nvec)


def test_non_threefold_rejected():
    assert threefold_dimension((6,)) == 4
    with pytest.raises(ValueError):
        instanton_numbers((6,), 3)
    with pytest.raises(ValueError):
        yukawa_K((5,), 1)


@pytest.mark.parametrize("Nvec", CY_VECTORS)
def test_constant_term_is_product(Nvec):
    assert yukawa_K(Nvec, 3)[0] == math.prod(Nvec)


def test_returned_order_drops_by_one():
    assert yukawa_K((5,), 12).order == 11


def test_reversion_consistency_inside_pipeline():
    q = build_plain_vector_q((5,), 15).q
    z = reversion(q)
    assert compose(z, q) == TruncSeries.monomial(1, 15)


def test_lambert_examples():
    geo = TruncSeries([5] + [1] * 8, 8)
    assert lambert_decompose(geo) == [1] + [0] * 7
    assert lambert_decompose(TruncSeries([5, 1, 2], 2)) == [1, 1]


@given(st.lists(st.integers(-10**12, 10**12), min_size=30, max_size=30), st.integers(-9, 9))
def test_lambert_round_trip(k, c):
    K = lambert_synthesize(k, c)
    assert K.order == 30 and K[0] == c
    assert lambert_decompose(K) == k


def test_result_serialises_with_strings():
    d = instanton_numbers((5,), 3).to_dict()
    assert d["n_d"] == ["2875", "609250", "317206375"]
    assert d["K"][0] == "5"
    assert d["order"] == "3"
    assert all(isinstance(x, str) for x in d["k_d"])


def test_lambert_on_rational_input_keeps_exact_values():
    K = TruncSeries([0, mpq(1, 2), mpq(1, 2)], 2)
    assert lambert_decompose(K) == [mpq(1, 2), 0]
