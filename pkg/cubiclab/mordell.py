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
""" Rational points on the Mordell curves E: y**2 = x**3 - m.

A point is stored as (r, s, t) with x = r/t**2, y = s/t**3,
gcd(r, t) = gcd(s, t) = 1 and s**2 = r**3 - m t**6; t = 0 is the point at
infinity. All arithmetic is exact.

Example::

    >>> P, Q = CurvePoint(11, 3, 4, 1), CurvePoint(11, 15, 58, 1)
    >>> str(P + Q)
    '(9/4, -5/8)'
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import List, Tuple

import gmpy2

from .cubic import CubicElement, CubicField, IdentityRecord
from .errors import (FamilyShapeError, IdentityFailure, NotCubefree, NotOnCurve, ParityViolation,
                     PointPreconditionError)
from .intarith import cubefree_squarefree_profile, jacobi
from .scheduler import flatten, scheduler_for

logger = logging.getLogger(__name__)

TORSION_BOUND = 12


@dataclass(frozen=True)
class CurvePoint:
    m: int
    r: int = 0
    s: int = 1
    t: int = 0

    def __post_init__(self):
        for name in ('r', 's', 't'):
            object.__setattr__(self, name, int(getattr(self, name)))
        if self.t < 0:
            raise PointPreconditionError('CurvePoint', 't must be nonnegative')
        if self.t == 0:
            object.__setattr__(self, 'r', 0)
            object.__setattr__(self, 's', 1)
            return
        if gcd(self.r, self.t) != 1 or gcd(self.s, self.t) != 1:
            raise PointPreconditionError('CurvePoint', '(%i, %i, %i) is not in lowest terms'
                                         % (self.r, self.s, self.t))
        if self.s ** 2 != self.r ** 3 - self.m * self.t ** 6:
            raise NotOnCurve(self.m, self.x, self.y)

    @classmethod
    def infinity(cls, m: int) -> 'CurvePoint':
        return cls(m)

    @classmethod
    def from_xy(cls, m: int, x, y) -> 'CurvePoint':
        x, y = Fraction(x), Fraction(y)
        t, exact = gmpy2.iroot(x.denominator, 2)
        if not exact or y.denominator != int(t) ** 3:
            raise NotOnCurve(m, x, y)
        return cls(m, x.numerator, y.numerator, int(t))

    @property
    def is_infinity(self) -> bool:
        return self.t == 0

    @property
    def x(self) -> Fraction:
        return Fraction(self.r, self.t ** 2)

    @property
    def y(self) -> Fraction:
        return Fraction(self.s, self.t ** 3)

    @property
    def is_integral(self) -> bool:
        return self.t == 1

    def __neg__(self):
        if self.is_infinity:
            return self
        return CurvePoint(self.m, self.r, -self.s, self.t)

    def __add__(self, other: 'CurvePoint') -> 'CurvePoint':
        if other.m != self.m:
            raise PointPreconditionError('add', 'points on y^2 = x^3 - %i and y^2 = x^3 - %i'
                                         % (self.m, other.m))
        if self.is_infinity:
            return other
        if other.is_infinity:
            return self
        x1, y1, x2, y2 = self.x, self.y, other.x, other.y
        if x1 == x2:
            if y1 == -y2:
                return CurvePoint.infinity(self.m)
            slope = 3 * x1 * x1 / (2 * y1)
        else:
            slope = (y2 - y1) / (x2 - x1)
        x3 = slope * slope - x1 - x2
        y3 = slope * (x1 - x3) - y1
        return CurvePoint.from_xy(self.m, x3, y3)

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, n: int):
        return multiply(n, self)

    def __str__(self):
        if self.is_infinity:
            return 'O'
        return '(%s, %s)' % (self.x, self.y)


@dataclass(frozen=True)
class Curve:
    """ y**2 = x**3 - m for cubefree m >= 2 """
    m: int

    def __post_init__(self):
        profile = cubefree_squarefree_profile(self.m)
        if not profile.is_cubefree:
            raise NotCubefree(self.m, next(p for p, e in profile.factorization if e >= 3))

    def point(self, x, y) -> CurvePoint:
        return CurvePoint.from_xy(self.m, x, y)

    @property
    def infinity(self) -> CurvePoint:
        return CurvePoint.infinity(self.m)

    def contains(self, x, y) -> bool:
        x, y = Fraction(x), Fraction(y)
        return y * y == x ** 3 - self.m

    def __str__(self):
        return 'y^2 = x^3 - %i' % self.m


def add(P: CurvePoint, Q: CurvePoint) -> CurvePoint:
    return P + Q


def negate(P: CurvePoint) -> CurvePoint:
    return -P


def multiply(n: int, P: CurvePoint) -> CurvePoint:
    """ n * P by double-and-add """
    if n < 0:
        return multiply(-n, -P)
    result, base = CurvePoint.infinity(P.m), P
    while n:
        if n & 1:
            result = result + base
        base = base + base
        n >>= 1
    return result


def family_point(b: int) -> CurvePoint:
    """ ((2b**3 + 1)/b**2, (3b**3 + 1)/b**3) on y**2 = x**3 - (8b**3 + 3) """
    if b <= 0:
        raise FamilyShapeError('family point needs b >= 1', b)
    curve = Curve(8 * b ** 3 + 3)
    return curve.point(Fraction(2 * b ** 3 + 1, b * b), Fraction(3 * b ** 3 + 1, b ** 3))


def is_torsion(P: CurvePoint) -> bool:
    """ Torsion points are integral, so the first non-integral multiple ends the search """
    Q = P
    for _ in range(TORSION_BOUND):
        if Q.is_infinity:
            return True
        if not Q.is_integral:
            return False
        Q = Q + P
    return False


def weil_representative(P: CurvePoint) -> CubicElement:
    """ alpha(P) = r - t**2 w, of norm s**2 """
    if P.is_infinity:
        raise PointPreconditionError('weil_representative', 'point at infinity')
    return CubicField(P.m).element(P.r, -P.t ** 2)


def doubling_square_identity(P: CurvePoint) -> IdentityRecord:
    """ (r**4 + 8rmt**6) - (2ts)**2 w = (r**2 - 2rt**2 w - 2t**4 w**2)**2.

    The left side represents alpha(2P) up to the rational square
    (2ts / t')**2, t' the denominator of 2P; the record carries that check.
    """
    if P.is_infinity:
        raise PointPreconditionError('doubling_square_identity', 'point at infinity')
    m, r, s, t = P.m, P.r, P.s, P.t
    K = CubicField(m)
    beta = K.element(r * r, -2 * r * t * t, -2 * t ** 4)
    lhs = K.element(r ** 4 + 8 * r * m * t ** 6, -(2 * t * s) ** 2)
    if beta * beta != lhs:
        raise IdentityFailure('doubling square', str(P), beta * beta, lhs)
    double = P + P
    alpha_double = weil_representative(double)
    ratio = Fraction(2 * t * s, double.t) ** 2
    return IdentityRecord('doubling_square', str(P), True, str(lhs), '(%s)^2' % beta,
                          {'point': str(P), 'double': str(double),
                           'represents_double': alpha_double * ratio == lhs})


def combine_for_even_denominator(P: CurvePoint, Q: CurvePoint) -> CurvePoint:
    """ P + Q for two distinct odd-denominator points; its t is even """
    for point in (P, Q):
        if point.is_infinity:
            raise PointPreconditionError('combine_for_even_denominator', 'point at infinity')
        if point.t % 2 == 0:
            raise PointPreconditionError('combine_for_even_denominator',
                                         '%s already has even t, use it directly' % point)
    if P == Q:
        raise PointPreconditionError('combine_for_even_denominator', 'P = Q is not an independent pair')
    total = P + Q
    if total.is_infinity:
        raise PointPreconditionError('combine_for_even_denominator', 'Q = -P')
    if total.t % 2:
        raise ParityViolation(P, Q, total)
    return total


@dataclass(frozen=True)
class RootNumber:
    m: int
    w: int
    contributions: Tuple[Tuple[int, int], ...]

    @property
    def contributing_primes(self) -> List[int]:
        return [p for p, _ in self.contributions]

    @property
    def predicts_odd_rank(self) -> bool:
        return self.w == -1


def root_number(m: int) -> RootNumber:
    """ w = product over p**2 | m of (-3/p) """
    profile = cubefree_squarefree_profile(m)
    if not profile.is_cubefree:
        raise NotCubefree(m, next(p for p, e in profile.factorization if e >= 3))
    contributions = []
    for p in profile.squared_primes:
        if p == 3:
            raise FamilyShapeError('root number formula does not cover 9 | m', m)
        symbol = int(gmpy2.kronecker(-3, p)) if p == 2 else jacobi(-3, p)
        contributions.append((p, symbol))
    w = 1
    for _, symbol in contributions:
        w *= symbol
    return RootNumber(m, w, tuple(contributions))


def twisted_family_root_number(b: int) -> RootNumber:
    """ Root number of y**2 = x**3 + m for m = 8b**3 + 3, which is -w(E_m) """
    own = root_number(8 * b ** 3 + 3)
    return RootNumber(-own.m, -own.w, own.contributions)


def _points_with_denominator(task) -> List[Tuple[int, int, int]]:
    m, t, r_max = task
    t6 = t ** 6
    lower = int(gmpy2.iroot(m * t6, 3)[0])
    found = []
    for r in range(max(lower, -r_max), r_max + 1):
        if gcd(r, t) != 1:
            continue
        value = r ** 3 - m * t6
        if value >= 0 and gmpy2.is_square(value):
            found.append((r, int(gmpy2.isqrt(value)), t))
    return found


def search_points(m: int, t_max: int, r_max: int, processes: int = 1) -> List[CurvePoint]:
    """ Every point with t <= t_max and |r| <= r_max, one of each pair +-P.

    Ordered by t, then r; ``processes`` spreads the denominators over a
    pool without changing the result.
    """
    if t_max < 1 or r_max < 1:
        raise ValueError('search bounds must be positive')
    tasks = [(m, t, r_max) for t in range(1, t_max + 1)]
    runner = scheduler_for(processes)
    try:
        triples = flatten(runner.map(_points_with_denominator, tasks))
    finally:
        runner.close()
    points = [CurvePoint(m, r, s, t) for r, s, t in triples]
    logger.debug('search y^2 = x^3 - %i, t <= %i, |r| <= %i: %i points', m, t_max, r_max, len(points))
    return points
