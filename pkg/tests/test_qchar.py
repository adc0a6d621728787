from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from krdenom.affine_data import cartan_data, parse_type
from krdenom.errors import EnumerationCapExceeded, InvalidLetter, MalformedSpec
from krdenom.qchar import (
    QCharacter,
    Tableau,
    UNIT,
    YMonomial,
    box_monomial,
    calibration,
    classical_dimension,
    column_qchar,
    dominant_monomials,
    is_semistandard,
    kr_highest_monomial,
    kr_qcharacter_typeA,
    parse_tableau,
    tableau_qchar,
    typeA_tableaux,
    weight,
)
from krdenom.scalar import ONE, QMonomial, negq, negqs, q, qs, qt


def weyl_dimension(n: int, k: int, m: int) -> int:
    """Weyl dimension formula for sl_n at highest weight m * fundamental_k."""
    lam = [m] * k + [0] * (n - k)
    num = Fraction(1)
    for i, j in combinations(range(n), 2):
        num *= Fraction(lam[i] - lam[j] + j - i, j - i)
    assert num.denominator == 1
    return int(num)


def test_weyl_oracle_sanity():
    assert weyl_dimension(3, 1, 1) == 3
    assert weyl_dimension(3, 1, 2) == 6
    assert weyl_dimension(4, 2, 1) == 6
    assert weyl_dimension(5, 2, 2) == 50


# ---------------------------------------------------------------- monomials


def test_ymonomial_product_and_inverse():
    a = YMonomial.y(1, q(2))
    b = YMonomial.y(1, q(2), -1) * YMonomial.y(2, ONE)
    assert (a * b) == YMonomial.y(2, ONE)
    assert a * a.inverse() == UNIT
    assert str(UNIT) == "1"


def test_mixed_monomial_not_dominant():
    m = YMonomial.y(1, ONE) * YMonomial.y(2, q(1), -1)
    assert not m.is_dominant
    assert YMonomial.y(1, ONE).is_dominant


def test_qcharacter_ring_ops():
    x = QCharacter([(YMonomial.y(1, ONE), 1), (YMonomial.y(1, q(2), -1), 1)])
    one = QCharacter.monomial(UNIT)
    assert x * one == x
    assert (x + x) - x == x
    assert classical_dimension(x * x) == 4
    assert len(x - x) == 0


# ---------------------------------------------------------------- boxes


@pytest.mark.parametrize("i", [1, 2, 3, 4])
def test_box_type_A(i):
    t = parse_type("A4~1")
    a = q(7)
    expected = YMonomial.build([((i - 1, a * q(i)), -1), ((i, a * q(i - 1)), 1)])
    assert box_monomial(t, i, a) == expected.drop_nodes([0, 5])


def test_box_type_A_first_letter():
    t = parse_type("A3~1")
    assert box_monomial(t, 1, q(3)) == YMonomial.y(1, q(3))


def test_box_g2_letter_one():
    t = parse_type("G2~1")
    assert box_monomial(t, 1, q(1)) == YMonomial.y(2, q(1))


def test_box_b2_half_column():
    t = parse_type("B2~1")
    assert column_qchar(t, [1], ONE, "half") == YMonomial.y(1, qs(-1))


def test_box_invalid_letter():
    with pytest.raises(InvalidLetter):
        box_monomial(parse_type("A2~1"), 4, ONE)
    with pytest.raises(InvalidLetter):
        box_monomial(parse_type("C2~1"), 1, ONE, "half")


def test_column_cancellation_a2():
    t = parse_type("A2~1")
    assert column_qchar(t, [1, 2], q(5)) == YMonomial.y(2, q(5))


def test_height_one_column_is_box():
    t = parse_type("C3~1")
    assert column_qchar(t, [2], q(1)) == box_monomial(t, 2, q(1))


def test_tableau_single_column_shift():
    t = parse_type("A3~1")
    tab = Tableau(((1, 3),))
    assert tableau_qchar(t, tab, ONE) == column_qchar(t, [1, 3], q(2))


def test_tableau_equal_columns_product():
    t = parse_type("A3~1")
    tab = Tableau(((1, 2), (1, 2)))
    assert tableau_qchar(t, tab, ONE) == column_qchar(t, [1, 2], q(1)) * column_qchar(t, [1, 2], q(3))


# ---------------------------------------------------------------- tableaux


def test_parse_tableau_grammar():
    tab = parse_tableau("1 2, 3 b3")
    assert tab.columns == ((1, 3), (2, -3))
    assert str(tab) == "1 2,3 b3"
    assert parse_tableau("h:1,2").half
    with pytest.raises(MalformedSpec):
        parse_tableau("1 2, 3")


def test_semistandard_orders():
    b = parse_type("B2~1")
    assert is_semistandard(b, parse_tableau("1,0"))
    assert is_semistandard(b, parse_tableau("0 0"))
    d = parse_type("D4~1")
    assert is_semistandard(d, parse_tableau("3,b4"))
    assert not is_semistandard(d, parse_tableau("4,b4"))
    assert not is_semistandard(d, parse_tableau("4 b4"))
    a = parse_type("A3~1")
    assert not is_semistandard(a, parse_tableau("2,1"))


def test_typeA_tableau_counts():
    assert sum(1 for _ in typeA_tableaux(3, 1, 1)) == 3
    assert sum(1 for _ in typeA_tableaux(3, 1, 2)) == 6


def test_enumeration_cap():
    with pytest.raises(EnumerationCapExceeded):
        list(typeA_tableaux(5, 2, 3, cap=10))


# ---------------------------------------------------------------- KR characters


def test_highest_monomial_shapes():
    t = parse_type("C3~1")
    assert kr_highest_monomial(t, 2, 1, q(1)) == YMonomial.y(2, q(1))
    h = kr_highest_monomial(t, 1, 3)
    c = negqs(1)
    assert h == YMonomial.build([((1, c**2), 1), ((1, ONE), 1), ((1, c**-2), 1)])


def test_highest_monomial_twisted_uses_q():
    t = parse_type("A4~2")
    h = kr_highest_monomial(t, 2, 2)
    assert h == YMonomial.build([((2, negq(1)), 1), ((2, negq(-1)), 1)])


def test_calibration_value():
    assert calibration(4, 2, 3) == q(-2)


def test_fundamental_vector_character():
    chi = kr_qcharacter_typeA(2, 1, 1)
    assert chi == QCharacter([(YMonomial.y(1, ONE), 1), (YMonomial.y(1, q(2), -1), 1)])


CASES = [(n, k, m) for n in range(2, 6) for k in range(1, n) for m in range(1, 5)]


@pytest.mark.parametrize("n,k,m", CASES)
def test_typeA_dimension_and_dominant(n, k, m):
    t = parse_type(f"A{n - 1}~1")
    chi = kr_qcharacter_typeA(n, k, m)
    assert classical_dimension(chi) == weyl_dimension(n, k, m)
    dom = dominant_monomials(chi)
    assert dom == [(kr_highest_monomial(t, k, m), 1)]


@pytest.mark.parametrize("n,k,m", [(4, 2, 2), (5, 2, 1), (5, 3, 2)])
def test_typeA_weights_below_highest(n, k, m):
    t = parse_type(f"A{n - 1}~1")
    cart = cartan_data(t).cartan.astype(float)
    top = np.zeros(n - 1)
    top[k - 1] = m
    for mono_, _ in kr_qcharacter_typeA(n, k, m).items():
        c = np.linalg.solve(cart, top - np.array(weight(mono_, t.nodes), dtype=float))
        assert np.allclose(c, np.round(c)) and (c > -1e-9).all()


@settings(max_examples=25, deadline=None)
@given(st.integers(-6, 6), st.integers(0, 23))
def test_spectral_shift_covariance(e, z):
    a = QMonomial(2 * z, e)
    base = kr_qcharacter_typeA(3, 1, 2)
    shifted = kr_qcharacter_typeA(3, 1, 2, a)
    assert shifted == base.map_monomials(lambda mono_: mono_.map_keys(lambda i, x: x * a))


def test_product_dimension_multiplicative():
    x = kr_qcharacter_typeA(3, 1, 1)
    y = kr_qcharacter_typeA(3, 2, 1, q(4))
    assert classical_dimension(x * y) == 9


def test_g2_and_twisted_boxes_evaluate():
    t = parse_type("G2~1")
    assert column_qchar(t, [1, 2], ONE) == box_monomial(t, 1, qt(1)) * box_monomial(t, 2, qt(-1))
