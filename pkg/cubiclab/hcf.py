# Copyright 2024 The cubiclab developers
#
# Licensed under the Apache License, Version 2.0 (the "License"); you may not
# use this file except in compliance with the License. You may obtain a copy
# of the License at
#       http://www.apache.org/licenses/LICENSE-2.0
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
# WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
# License for the specific language governing permissions and limitations under
# the License.
""" Quadratic unramified extensions H = K(sqrt(alpha)) of K = Q(cbrt(m)).

K(sqrt(alpha)) / K is unramified when

1. alpha is positive at the real place of K,
2. alpha = 1 mod 4, which keeps the primes above 2 unramified,
3. (alpha) is the square of an ideal, which handles all odd primes,

and it is a proper extension when alpha is not a square. Such an H lies in
the Hilbert class field, so its existence makes the class number even.

Candidates come from rational points P = (r/t**2, s/t**3) on
y**2 = x**3 - m with even t through alpha = r - t**2 w, and, for
m = a**3 + 3 with 4 | a, from the unit eps = 1 + a**2 w - a w**2.
"""
import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import List, Optional, Tuple

import gmpy2

from .classgrp import factor_element, quadratic_symbol
from .cubic import (NONSQUARE, PRECISION_CAP_BITS, SQUARE, UNDECIDED, CubicElement, CubicField, SexticPolynomial,
                    congruent_one_mod4, family_unit, minpoly_sqrt, square_test)
from .errors import FamilyShapeError, NotIntegral, PointPreconditionError, SquareTestUndecided
from .mordell import CurvePoint, combine_for_even_denominator, search_points, weil_representative

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1


@dataclass(frozen=True)
class UnramifiedCertificate:
    """ Outcome of the unramifiedness checks on one alpha.

    ``nonsquare`` is None when the square test hit its precision cap, which
    leaves the certificate incomplete. ``failures`` names every check that
    did not pass.
    """
    m: int
    alpha: CubicElement
    totally_positive: bool
    one_mod_four: bool
    ideal_square: bool
    ideal: Optional[str]
    nonsquare: Optional[bool]
    nonsquare_witness: Optional[str]
    minpoly: Optional[SexticPolynomial]
    minpoly_discriminant: Optional[int]
    disc_consistency: bool
    failures: Tuple[str, ...]
    source: str = field(default='', compare=False)

    @property
    def valid(self) -> bool:
        return not self.failures

    @property
    def complete(self) -> bool:
        return self.nonsquare is not None

    def revalidate(self) -> 'UnramifiedCertificate':
        """ Every check rerun from alpha alone """
        return certify_unramified(self.alpha, source=self.source)

    def to_dict(self) -> dict:
        return {'format_version': FORMAT_VERSION,
                'm': str(self.m),
                'alpha': [str(c) for c in self.alpha.coords],
                'source': self.source,
                'checks': {'totally_positive': self.totally_positive,
                           'one_mod_four': self.one_mod_four,
                           'ideal_square': self.ideal_square,
                           'nonsquare': self.nonsquare,
                           'disc_consistency': self.disc_consistency},
                'ideal': self.ideal,
                'nonsquare_witness': self.nonsquare_witness,
                'minpoly': None if self.minpoly is None else [str(c) for c in self.minpoly.coefficients],
                'minpoly_reducible': None if self.minpoly is None else self.minpoly.reducible,
                'minpoly_discriminant': None if self.minpoly_discriminant is None else str(self.minpoly_discriminant),
                'failures': list(self.failures),
                'valid': self.valid}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, document: dict) -> 'UnramifiedCertificate':
        if document.get('format_version') != FORMAT_VERSION:
            raise ValueError('unsupported certificate format %r' % document.get('format_version'))
        m = int(document['m'])
        alpha = CubicField(m).element(*(Fraction(c) for c in document['alpha']))
        checks = document['checks']
        minpoly = None
        if document['minpoly'] is not None:
            minpoly = SexticPolynomial(tuple(int(c) for c in document['minpoly']), bool(document['minpoly_reducible']))
        disc = document['minpoly_discriminant']
        return cls(m, alpha, checks['totally_positive'], checks['one_mod_four'], checks['ideal_square'],
                   document['ideal'], checks['nonsquare'], document['nonsquare_witness'], minpoly,
                   None if disc is None else int(disc), checks['disc_consistency'],
                   tuple(document['failures']), document.get('source', ''))

    @classmethod
    def from_json(cls, text: str) -> 'UnramifiedCertificate':
        return cls.from_dict(json.loads(text))


def _disc_consistent(disc: int, K: CubicField) -> bool:
    """ disc = d_K**2 times a nonzero square, as for a field of discriminant d_K**2 """
    dk2 = K.disc ** 2
    if disc == 0 or disc % dk2:
        return False
    quotient = disc // dk2
    return quotient > 0 and bool(gmpy2.is_square(quotient))


def certify_unramified(alpha: CubicElement, source: str = '',
                       precision_cap: int = PRECISION_CAP_BITS) -> UnramifiedCertificate:
    """ Runs the unramifiedness checks on an integral alpha.

    Units pass the ideal check without factoring, so unit candidates work
    for any cubefree m; other alpha need a monogenic m.

    Raises:
        NotIntegral: alpha has a denominator
        NotMonogenic: alpha is not a unit and Z[w] is not maximal
    """
    if not alpha.is_integral():
        raise NotIntegral(alpha)
    K = alpha.field
    norm = alpha.norm()
    if norm <= 0:
        logger.debug('%s has norm %s <= 0', alpha, norm)
    totally_positive = norm > 0 and alpha.real_sign(precision_cap) > 0
    one_mod_four = congruent_one_mod4(alpha)
    if abs(norm) == 1:
        ideal_square, ideal = True, '(1)'
    else:
        fac = factor_element(alpha)
        ideal_square = fac.is_square()
        ideal = str(fac.half()) if ideal_square else None
    outcome = square_test(alpha, precision_cap)
    nonsquare = {SQUARE: False, NONSQUARE: True, UNDECIDED: None}[outcome.status]
    minpoly, disc, consistent = None, None, False
    if nonsquare:
        minpoly = minpoly_sqrt(alpha)
        disc = minpoly.discriminant()
        consistent = _disc_consistent(disc, K)
    failures = []
    for name, passed in (('totally_positive', totally_positive), ('one_mod_four', one_mod_four),
                         ('ideal_square', ideal_square)):
        if not passed:
            failures.append(name)
    if nonsquare is None:
        failures.append('nonsquare_undecided')
    elif not nonsquare:
        failures.append('nonsquare')
    if nonsquare and not consistent:
        failures.append('disc_consistency')
    certificate = UnramifiedCertificate(K.m, alpha, totally_positive, one_mod_four, ideal_square, ideal,
                                        nonsquare, outcome.witness, minpoly, disc, consistent, tuple(failures),
                                        source)
    logger.debug('certificate for %s over %s: %s', alpha, K, 'valid' if certificate.valid else failures)
    return certificate


@dataclass(frozen=True)
class Construction:
    """ Result of looking for an unramified extension on the curve y**2 = x**3 - m """
    m: int
    points: Tuple[CurvePoint, ...]
    point: Optional[CurvePoint] = None
    via: str = 'none'
    certificate: Optional[UnramifiedCertificate] = None
    reason: str = ''

    @property
    def found(self) -> bool:
        return self.certificate is not None and self.certificate.valid


def construct_from_curve(m: int, t_max: int = 20, r_max: int = 10 ** 5, processes: int = 1,
                         precision_cap: int = PRECISION_CAP_BITS) -> Construction:
    """ Certificate from a point with even t, or from the sum of two points with odd t.

    Candidates are tried in search order; the first valid certificate wins.
    Running out of candidates is a result, not an error.

    Raises:
        ParityViolation: a sum of two odd-t points kept an odd t, which
            cannot happen for m = 8b**3 + 3
    """
    points = tuple(P for P in search_points(m, t_max, r_max, processes) if not P.is_infinity)
    even = [P for P in points if P.t % 2 == 0]
    odd = [P for P in points if P.t % 2 == 1]
    last = None
    for P in even:
        last = certify_unramified(weil_representative(P), source='point %s' % P, precision_cap=precision_cap)
        if last.valid:
            return Construction(m, points, P, 'even_t', last)
    for P, Q in combinations(odd, 2):
        for partner in (Q, -Q):
            total = combine_for_even_denominator(P, partner)
            last = certify_unramified(weil_representative(total), source='point %s = %s + %s' % (total, P, partner),
                                       precision_cap=precision_cap)
            if last.valid:
                return Construction(m, points, total, 'sum', last)
    if not points:
        reason = 'no qualifying point found'
    elif last is None:
        reason = 'no qualifying point found (one odd-t point, no even-t point)'
    else:
        reason = 'no candidate certified: %s' % ', '.join(last.failures)
    logger.info('y^2 = x^3 - %i: %s', m, reason)
    return Construction(m, points, None, 'none', last, reason)


def unit_construction(a: int, precision_cap: int = PRECISION_CAP_BITS) -> UnramifiedCertificate:
    """ Certificate for eps = 1 + a**2 w - a w**2 in Q(cbrt(a**3 + 3)), 4 | a """
    if a == 0 or a % 4:
        raise FamilyShapeError('unit construction needs 4 | a and a != 0', a)
    eps = family_unit(CubicField.from_a(a))
    return certify_unramified(eps, source='unit a=%i' % a, precision_cap=precision_cap)


@dataclass(frozen=True)
class TwoRankBound:
    """ s >= bound, witnessed by independent alphas """
    m: int
    bound: int
    witnesses: Tuple[CubicElement, ...]
    candidates: Tuple[CurvePoint, ...]
    undecided: int = 0


def _passes_local_checks(alpha: CubicElement, precision_cap: int = PRECISION_CAP_BITS) -> bool:
    if not (alpha.norm() > 0 and alpha.real_sign(precision_cap) > 0 and congruent_one_mod4(alpha)):
        return False
    return abs(alpha.norm()) == 1 or factor_element(alpha).is_square()


def two_rank_lower_bound(points: List[CurvePoint], m: int,
                         precision_cap: int = PRECISION_CAP_BITS) -> TwoRankBound:
    """ Lower bound for the 2-rank of the class group from independent points.

    Points with odd t are moved to even t by adding the last of them through
    combine_for_even_denominator; the negative of the last one adds nothing.
    The resulting alphas are kept greedily while no product of a subset of
    the kept ones with the new alpha is a square; an undecided test, sign
    or square, counts against the bound.

    Raises:
        ParityViolation: a sum of two odd-t points kept an odd t
    """
    for P in points:
        if P.is_infinity:
            raise PointPreconditionError('two_rank_lower_bound', 'point at infinity')
        if P.m != m:
            raise PointPreconditionError('two_rank_lower_bound', '%s is not on y^2 = x^3 - %i' % (P, m))
    even = [P for P in points if P.t % 2 == 0]
    odd = [P for P in points if P.t % 2 == 1]
    candidates = list(even)
    if odd:
        last = odd[-1]
        candidates += [combine_for_even_denominator(P, last) for P in odd[:-1] if P != -last]
    kept: List[CubicElement] = []
    undecided = 0
    for P in candidates:
        alpha = weil_representative(P)
        try:
            if not _passes_local_checks(alpha, precision_cap):
                continue
        except SquareTestUndecided:
            undecided += 1
            continue
        independent = True
        for size in range(len(kept) + 1):
            for subset in combinations(kept, size):
                product = alpha
                for beta in subset:
                    product = product * beta
                status = square_test(product, precision_cap).status
                if status == UNDECIDED:
                    undecided += 1
                if status != NONSQUARE:
                    independent = False
                    break
            if not independent:
                break
        if independent:
            kept.append(alpha)
    return TwoRankBound(m, len(kept), tuple(kept), tuple(candidates), undecided)


def splits_in_extension(alpha: CubicElement, P) -> bool:
    """ A degree-1 prime P of odd norm prime to alpha splits in K(sqrt(alpha)) iff alpha is a square mod P """
    return quadratic_symbol(alpha, P) == 1
