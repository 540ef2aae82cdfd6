from fractions import Fraction

import pytest
import sympy

from cubiclab.cubic import (NONSQUARE, SQUARE, UNDECIDED, CubicField, congruent_one_mod4, epsilon_alpha_beta_identity,
                            family_unit, is_square, minpoly_sqrt, square_test)
from cubiclab.errors import FamilyShapeError, FieldMismatch, NotCubefree, NotIntegral, SquareTestUndecided
from cubiclab.intarith import cubefree_squarefree_profile
from tools import family_m, random_elements

K11 = CubicField(11)
K67 = CubicField.from_a(4)
w = K11.omega


def test_field_construction():
    assert CubicField.from_b(1) == K11
    assert K67.m == 67 and K67.a == 4
    assert CubicField.from_b(3).a == 6
    with pytest.raises(ValueError):
        CubicField(1)
    with pytest.raises(NotCubefree):
        CubicField(16)
    with pytest.raises(FamilyShapeError):
        CubicField(12, a=2)


def test_field_invariants():
    assert K11.is_monogenic
    assert K11.disc == -3267
    assert K11.disc ** 2 == 3 ** 6 * 11 ** 4
    assert CubicField(10).disc == -300
    assert not CubicField(10).is_monogenic
    assert CubicField(12).index_denominator == 6
    assert K11.index_denominator == 3


def test_norms():
    assert (2 - w).norm() == -3
    assert K11.one.norm() == 1
    assert K11.element(5, 2, 1).norm() == 4
    assert K11.element(3, 1, -1).norm() == 16
    assert (9 - 4 * w).norm() == 25
    assert (2 - w).trace() == 6


def test_norm_is_multiplicative():
    elements = random_elements(K11, 40, seed=1)
    for e1, e2 in zip(elements, elements[1:]):
        assert (e1 * e2).norm() == e1.norm() * e2.norm()
    K = CubicField(family_m(5))
    for e1, e2 in zip(random_elements(K, 10, seed=2), random_elements(K, 10, seed=3)):
        assert (e1 * e2).norm() == e1.norm() * e2.norm()


def test_charpoly_annihilates_element():
    for e in random_elements(K11, 20, seed=4):
        assert e.evaluate(e.charpoly()).is_zero()
        assert Fraction(str(e.charpoly().eval(0))) == -e.norm()


def test_inverse_and_division():
    e = K11.element(3, -1, 2)
    assert e * e.inverse() == K11.one
    assert (e / e) == K11.one
    assert e / 2 == K11.element(Fraction(3, 2), Fraction(-1, 2), 1)
    assert e ** -1 == e.inverse()
    assert w ** 3 == K11.element(11)
    with pytest.raises(ZeroDivisionError):
        K11.element().inverse()


def test_mixed_fields_are_rejected():
    with pytest.raises(FieldMismatch):
        K11.one + K67.one
    with pytest.raises(FieldMismatch):
        K11.omega * K67.omega


def test_string_form():
    assert str(K11.element(1, 4, -2)) == '1 + 4*w - 2*w^2'
    assert str(-w) == '-w'
    assert str(K11.element()) == '0'
    assert str(K11.element(Fraction(1, 3), 0, 1)) == '1/3 + w^2'


def test_family_unit():
    assert family_unit(K11) == K11.element(1, 4, -2)
    eps = family_unit(K67)
    assert eps == K67.element(1, 16, -4)
    assert eps.norm() == 1
    assert congruent_one_mod4(eps)
    assert eps.real_sign() == 1
    with pytest.raises(FamilyShapeError):
        family_unit(CubicField(5))
    with pytest.raises(FamilyShapeError):
        family_unit(CubicField.from_a(0))


def test_epsilon_alpha_beta_identity_small_b():
    record = epsilon_alpha_beta_identity(1)
    assert record.holds
    assert record.lhs == record.rhs == '25 + 11*w - 10*w^2'
    record = epsilon_alpha_beta_identity(2)
    assert record.details['norm_beta'] == 25
    assert 33 ** 3 - 8 * 67 ** 2 == 25
    assert epsilon_alpha_beta_identity(89).holds


def test_epsilon_alpha_beta_identity_up_to_500():
    for b in range(1, 501):
        if not cubefree_squarefree_profile(family_m(b)).is_cubefree:
            with pytest.raises(NotCubefree):
                epsilon_alpha_beta_identity(b)
            continue
        record = epsilon_alpha_beta_identity(b)
        assert record.holds
        assert record.details['norm_beta'] == 3 * b ** 3 + 1


def test_congruent_one_mod4():
    assert congruent_one_mod4(9 - 4 * w)
    assert not congruent_one_mod4(3 - w)
    with pytest.raises(NotIntegral):
        congruent_one_mod4(K11.element(Fraction(1, 2)))


def test_weil_product_is_square():
    product = (3 - w) * (15 - w) * (9 - 4 * w)
    outcome = square_test(product)
    assert outcome.status == SQUARE
    assert outcome.root * outcome.root == product


def test_unit_is_not_square():
    outcome = square_test(family_unit(K67))
    assert outcome.status == NONSQUARE
    assert outcome.witness
    assert is_square(family_unit(K67)) is None


def test_rational_square():
    root = is_square(K11.element(4))
    assert root * root == K11.element(4)
    half = is_square(K11.element(Fraction(9, 4)))
    assert half * half == K11.element(Fraction(9, 4))


def test_squares_of_random_elements_are_recognized():
    for e in random_elements(K11, 15, seed=5):
        root = is_square(e * e)
        assert root is not None
        assert root * root == e * e
    K = CubicField(family_m(3))
    for e in random_elements(K, 5, bound=50, seed=6):
        assert square_test(e * e).status == SQUARE


def test_negative_norm_is_not_square():
    outcome = square_test(2 - w)
    assert outcome.status == NONSQUARE
    assert 'norm' in outcome.witness
    with pytest.raises(ValueError):
        square_test(K11.element())


def test_square_test_reports_undecided():
    e = (3 - w) * (3 - w)
    assert square_test(e, precision_cap=64).status == UNDECIDED
    with pytest.raises(SquareTestUndecided):
        is_square(e, precision_cap=64)
    assert square_test(9 - 4 * w, precision_cap=32).status == UNDECIDED


def test_minpoly_sqrt():
    assert minpoly_sqrt(9 - 4 * w).coefficients == (1, 0, -27, 0, 243, 0, -25)
    assert not minpoly_sqrt(9 - 4 * w).reducible
    K219 = CubicField(219)
    sextic = minpoly_sqrt(K219.element(115657, -12996))
    assert sextic.coefficients == (1, 0, -346971, 0, 40129624947, 0, -1066391672856409)


def test_minpoly_sqrt_matches_the_resultant():
    x, y = sympy.symbols('x y')
    for K in (K11, K67):
        for e in random_elements(K, 8, bound=9, seed=K.m):
            sextic = sympy.Poly(minpoly_sqrt(e).as_poly('x').as_expr(), x, domain='QQ')
            resultant = sympy.Poly(sympy.resultant(e.charpoly('y').as_expr(), y - x ** 2, y), x, domain='QQ')
            quotient, remainder = resultant.div(sextic)
            assert remainder.is_zero
            assert quotient.degree() == 0


def test_minpoly_sqrt_of_square_is_flagged():
    sextic = minpoly_sqrt(K11.element(4))
    assert sextic.coefficients == (1, 0, -12, 0, 48, 0, -64)
    assert sextic.reducible
    assert str(sextic) == 'x**6 - 12*x**4 + 48*x**2 - 64'
