from fractions import Fraction
from itertools import combinations

import pytest

from cubiclab import hcf
from cubiclab.classgrp import split_prime
from cubiclab.cubic import CubicField, family_unit
from cubiclab.errors import FamilyShapeError, NotIntegral, ParityViolation, PointPreconditionError
from cubiclab.intarith import cubefree_squarefree_profile
from cubiclab.mordell import CurvePoint, combine_for_even_denominator, family_point, weil_representative
from tools import P11, P219, Q11, Q219, family_m

K11 = CubicField(11)
w = K11.omega


def test_certificate_for_eleven():
    certificate = hcf.certify_unramified(9 - 4 * w)
    assert certificate.valid
    assert certificate.complete
    assert certificate.totally_positive and certificate.one_mod_four and certificate.ideal_square
    assert certificate.nonsquare
    assert certificate.ideal == 'p5[1]'
    assert certificate.minpoly.coefficients == (1, 0, -27, 0, 243, 0, -25)
    assert certificate.disc_consistency
    quotient, rest = divmod(certificate.minpoly_discriminant, 3 ** 6 * 11 ** 4)
    assert rest == 0 and quotient > 0


def test_certificate_for_219():
    alpha = CubicField(219).element(115657, -12996)
    certificate = hcf.certify_unramified(alpha)
    assert certificate.valid
    assert certificate.minpoly.coefficients == (1, 0, -346971, 0, 40129624947, 0, -1066391672856409)


def test_certificate_failures():
    certificate = hcf.certify_unramified(3 - w)
    assert not certificate.valid
    assert 'one_mod_four' in certificate.failures
    certificate = hcf.certify_unramified(K11.element(9))
    assert 'nonsquare' in certificate.failures
    assert certificate.minpoly is None
    certificate = hcf.certify_unramified(2 - w)
    assert 'totally_positive' in certificate.failures
    with pytest.raises(NotIntegral):
        hcf.certify_unramified(K11.element(Fraction(1, 2)))


def test_certificate_round_trip():
    certificate = hcf.certify_unramified(9 - 4 * w, source='point (9/4, -5/8)')
    text = certificate.to_json()
    assert hcf.UnramifiedCertificate.from_json(text) == certificate
    assert certificate.revalidate() == certificate
    document = certificate.to_dict()
    assert document['alpha'] == ['9', '-4', '0']
    assert document['valid'] is True
    document['format_version'] = 99
    with pytest.raises(ValueError):
        hcf.UnramifiedCertificate.from_dict(document)


def test_construct_from_curve_eleven():
    construction = hcf.construct_from_curve(11, t_max=4, r_max=10 ** 4)
    assert construction.found
    assert construction.via == 'even_t'
    assert construction.certificate.alpha == 9 - 4 * w
    assert construction.point.t == 2


def test_construct_from_curve_219():
    construction = hcf.construct_from_curve(219, t_max=3, r_max=1000)
    assert construction.found
    assert construction.certificate.disc_consistency
    assert construction.point.t % 2 == 0


def test_construct_without_points():
    construction = hcf.construct_from_curve(11, t_max=1, r_max=2)
    assert not construction.found
    assert construction.reason == 'no qualifying point found'
    assert construction.points == ()


def test_unit_construction():
    certificate = hcf.unit_construction(4)
    assert certificate.valid
    assert certificate.alpha == family_unit(CubicField.from_a(4))
    assert certificate.ideal == '(1)'
    for a in (0, 2, 6):
        with pytest.raises(FamilyShapeError):
            hcf.unit_construction(a)


def test_two_rank_lower_bound():
    bound = hcf.two_rank_lower_bound([P11, Q11], 11)
    assert bound.bound == 1
    assert bound.witnesses == (9 - 4 * w,)
    assert hcf.two_rank_lower_bound([P219, Q219], 219).bound >= 1
    with pytest.raises(PointPreconditionError):
        hcf.two_rank_lower_bound([CurvePoint.infinity(11)], 11)
    with pytest.raises(PointPreconditionError):
        hcf.two_rank_lower_bound([P219], 11)


def test_primes_above_37_in_the_extension():
    alpha = 9 - 4 * w
    assert [hcf.splits_in_extension(alpha, P) for P in split_prime(37, 11)] == [True, False, False]


def test_construct_from_curve_adds_odd_points(monkeypatch):
    monkeypatch.setattr(hcf, 'search_points', lambda *args: [P219, Q219])
    construction = hcf.construct_from_curve(219, t_max=3, r_max=1000)
    assert construction.via == 'sum'
    assert construction.point == combine_for_even_denominator(P219, Q219)
    assert construction.certificate.alpha == CubicField(219).element(115657, -12996)


def test_odd_sums_surface_parity_violations(monkeypatch):
    # on y^2 = x^3 - 7, (2, 1) + (32, 181) = (2, -1) keeps t = 1
    points = [CurvePoint(7, 2, 1, 1), CurvePoint(7, 32, 181, 1)]
    monkeypatch.setattr(hcf, 'search_points', lambda *args: points)
    with pytest.raises(ParityViolation):
        hcf.construct_from_curve(7, t_max=1, r_max=100)
    with pytest.raises(ParityViolation):
        hcf.two_rank_lower_bound(points, 7)


def test_two_rank_lower_bound_respects_the_precision_cap():
    bound = hcf.two_rank_lower_bound([P11, Q11], 11, precision_cap=32)
    assert bound.bound == 0
    assert bound.undecided == 1
    assert hcf.two_rank_lower_bound([P11, Q11], 11).undecided == 0


def test_two_rank_lower_bound_never_exceeds_the_candidates():
    for m, t_max, r_max in ((11, 4, 10 ** 4), (219, 3, 1000)):
        points = hcf.search_points(m, t_max, r_max)
        for size in range(1, len(points) + 1):
            for subset in combinations(points, size):
                bound = hcf.two_rank_lower_bound(list(subset), m)
                assert bound.bound <= len(bound.candidates) <= len(subset)
                assert len(bound.witnesses) == bound.bound
                assert all(P.t % 2 == 0 for P in bound.candidates)
    assert hcf.two_rank_lower_bound([P11, -P11], 11).bound == 0


def test_even_t_points_certify_across_the_family():
    certified = set()
    for b in range(1, 31):
        m = family_m(b)
        if not cubefree_squarefree_profile(m).is_squarefree:
            continue
        candidates = [P for P in hcf.search_points(m, 4, 2000) if P.t % 2 == 0]
        if b % 2 == 0:
            candidates.append(family_point(b))
        for P in candidates:
            certificate = hcf.certify_unramified(weil_representative(P))
            assert set(certificate.failures) <= {'nonsquare'}, (b, P, certificate.failures)
            if certificate.valid:
                assert certificate.disc_consistency
                certified.add(b)
    assert {1, 2} <= certified
