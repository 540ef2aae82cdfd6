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
""" Exact arithmetic in the pure cubic field K = Q(w), w**3 = m.

Elements are x + y*w + z*w**2 with :class:`fractions.Fraction`
coordinates. The family of fields m = 8b**3 + 3 (or m = a**3 + 3) carries
the unit :func:`family_unit` and the identity checked by
:func:`epsilon_alpha_beta_identity`.

Example::

    >>> K = CubicField.from_b(1)
    >>> (2 - K.omega).norm()
    Fraction(-3, 1)
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm, prod
from typing import Optional, Tuple

import gmpy2
import mpmath
import sympy

from .errors import FamilyShapeError, FieldMismatch, IdentityFailure, NotCubefree, NotIntegral, SquareTestUndecided
from .intarith import cube_roots_mod, cubefree_squarefree_profile, jacobi, primes_below

logger = logging.getLogger(__name__)

PRECISION_CAP_BITS = 10 ** 4
RESIDUE_WITNESSES = 48

SQUARE = 'square'
NONSQUARE = 'nonsquare'
UNDECIDED = 'undecided'


def norm_form(m: int, x: int, y: int, z: int) -> int:
    """ N(x + y*w + z*w**2) for integers, without building an element """
    return x ** 3 + m * y ** 3 + m * m * z ** 3 - 3 * m * x * y * z


@dataclass(frozen=True)
class CubicField:
    """ Q(cbrt(m)) for cubefree m >= 2.

    ``b`` and ``a`` record the family parameters m = 8b**3 + 3 and
    m = a**3 + 3 (a = 2b) when the field was built from them.
    """
    m: int
    b: Optional[int] = field(default=None, compare=False)
    a: Optional[int] = field(default=None, compare=False)

    def __post_init__(self):
        if self.m < 2:
            raise ValueError('pure cubic fields need m >= 2, got %i' % self.m)
        profile = self.profile
        if not profile.is_cubefree:
            raise NotCubefree(self.m, next(p for p, e in profile.factorization if e >= 3))
        if self.a is None and self.b is not None:
            object.__setattr__(self, 'a', 2 * self.b)
        if self.a is not None and self.a ** 3 + 3 != self.m:
            raise FamilyShapeError('m is not a**3 + 3', (self.m, self.a))

    @classmethod
    def from_b(cls, b: int) -> 'CubicField':
        return cls(8 * b ** 3 + 3, b=b)

    @classmethod
    def from_a(cls, a: int) -> 'CubicField':
        return cls(a ** 3 + 3, a=a)

    @cached_property
    def profile(self):
        return cubefree_squarefree_profile(self.m)

    @property
    def is_monogenic(self) -> bool:
        """ Z[w] is the ring of integers """
        return self.profile.is_squarefree and self.m % 9 not in (1, 8)

    @property
    def squarefree_part(self) -> int:
        return prod(p for p, e in self.profile.factorization if e == 1)

    @property
    def square_part(self) -> int:
        """ c with m = a * c**2, a and c squarefree and coprime """
        return prod(p for p, e in self.profile.factorization if e == 2)

    @property
    def disc(self) -> int:
        a, c = int(self.squarefree_part), int(self.square_part)
        if self.m % 9 in (1, 8):
            return -3 * a * a * c * c
        return -27 * a * a * c * c

    @property
    def index_denominator(self) -> int:
        """ Every algebraic integer of K lies in (1/index_denominator) Z[w] """
        return 3 * int(self.square_part)

    def element(self, x=0, y=0, z=0) -> 'CubicElement':
        return CubicElement(self, x, y, z)

    @property
    def one(self) -> 'CubicElement':
        return CubicElement(self, 1, 0, 0)

    @property
    def omega(self) -> 'CubicElement':
        return CubicElement(self, 0, 1, 0)

    def __str__(self):
        return 'Q(cbrt(%i))' % self.m


@dataclass(frozen=True)
class CubicElement:
    field: CubicField
    x: Fraction = Fraction(0)
    y: Fraction = Fraction(0)
    z: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ('x', 'y', 'z'):
            object.__setattr__(self, name, Fraction(getattr(self, name)))

    @property
    def coords(self) -> Tuple[Fraction, Fraction, Fraction]:
        return self.x, self.y, self.z

    @property
    def m(self) -> int:
        return self.field.m

    def _coerce(self, other) -> 'CubicElement':
        if isinstance(other, CubicElement):
            if other.field != self.field:
                raise FieldMismatch(self.m, other.m)
            return other
        if isinstance(other, (int, Fraction)):
            return CubicElement(self.field, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CubicElement(self.field, self.x + other.x, self.y + other.y, self.z + other.z)

    __radd__ = __add__

    def __neg__(self):
        return CubicElement(self.field, -self.x, -self.y, -self.z)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        m = self.m
        x1, y1, z1 = self.coords
        x2, y2, z2 = other.coords
        return CubicElement(self.field,
                            x1 * x2 + m * (y1 * z2 + z1 * y2),
                            x1 * y2 + y1 * x2 + m * z1 * z2,
                            x1 * z2 + z1 * x2 + y1 * y2)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result, base = self.field.one, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def adjugate(self) -> 'CubicElement':
        """ Product of the two other conjugates, so that e * adjugate = N(e) """
        x, y, z = self.coords
        m = self.m
        return CubicElement(self.field, x * x - m * y * z, m * z * z - x * y, y * y - x * z)

    def inverse(self) -> 'CubicElement':
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError('inverse of zero in %s' % self.field)
        return self.adjugate() * (1 / n)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def norm(self) -> Fraction:
        x, y, z = self.coords
        m = self.m
        return x ** 3 + m * y ** 3 + m * m * z ** 3 - 3 * m * x * y * z

    def trace(self) -> Fraction:
        return 3 * self.x

    def charpoly(self, symbol='T') -> sympy.Poly:
        """ Characteristic polynomial of multiplication by the element """
        x, y, z = self.coords
        T = sympy.Symbol(symbol)
        coefficients = [1, -3 * x, 3 * x * x - 3 * self.m * y * z, -self.norm()]
        return sympy.Poly([sympy.Rational(c.numerator, c.denominator) if isinstance(c, Fraction) else c
                           for c in coefficients], T, domain='QQ')

    def evaluate(self, poly: sympy.Poly) -> 'CubicElement':
        """ poly(self) by Horner's rule """
        acc = CubicElement(self.field)
        for c in poly.all_coeffs():
            acc = acc * self + Fraction(int(c.p), int(c.q))
        return acc

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0 and self.z == 0

    def denominator(self) -> int:
        return lcm(self.x.denominator, self.y.denominator, self.z.denominator)

    def is_integral(self) -> bool:
        return self.denominator() == 1

    def integer_coords(self) -> Tuple[int, int, int]:
        if not self.is_integral():
            raise NotIntegral(self)
        return int(self.x), int(self.y), int(self.z)

    def height(self):
        return max(abs(c) for c in self.coords)

    def real_embedding(self):
        """ Image under w -> real cube root of m, at the current mpmath precision """
        theta = mpmath.cbrt(self.m)
        return (_mpf(self.x) + _mpf(self.y) * theta + _mpf(self.z) * theta ** 2)

    def complex_embedding(self):
        theta = mpmath.cbrt(self.m)
        zeta = mpmath.mpc(-1, mpmath.sqrt(3)) / 2
        return _mpf(self.x) + _mpf(self.y) * theta * zeta + _mpf(self.z) * theta ** 2 * zeta ** 2

    def real_sign(self, cap: int = PRECISION_CAP_BITS) -> int:
        """ Sign of the real embedding, certified against an error bound """
        if self.is_zero():
            return 0
        bits = 64
        while bits <= cap:
            with mpmath.workprec(bits):
                value = self.real_embedding()
                theta = mpmath.cbrt(self.m)
                scale = abs(_mpf(self.x)) + abs(_mpf(self.y)) * theta + abs(_mpf(self.z)) * theta ** 2
                if abs(value) > scale * mpmath.ldexp(1, 8 - bits):
                    return 1 if value > 0 else -1
            bits *= 2
        raise SquareTestUndecided(self, cap)

    def __str__(self):
        terms = []
        for c, suffix in zip(self.coords, ('', 'w', 'w^2')):
            if c == 0:
                continue
            magnitude = abs(c)
            text = str(magnitude) if suffix == '' or magnitude != 1 else ''
            if suffix:
                text = text + '*' + suffix if text else suffix
            terms.append(('-' if c < 0 else '+', text))
        if not terms:
            return '0'
        sign, text = terms[0]
        out = ('-' if sign == '-' else '') + text
        for sign, text in terms[1:]:
            out += ' %s %s' % (sign, text)
        return out


def _mpf(q: Fraction):
    return mpmath.mpf(q.numerator) / q.denominator


@dataclass(frozen=True)
class IdentityRecord:
    """ Proof record of an exact identity at one parameter value """
    name: str
    parameter: object
    holds: bool
    lhs: str
    rhs: str
    details: dict = field(default_factory=dict, compare=False)


def family_unit(K: CubicField) -> CubicElement:
    """ eps = 1 + a**2 w - a w**2 = -(a - w)**3 / 3, a unit of norm 1 """
    a = K.a
    if a is None or a == 0:
        raise FamilyShapeError('family unit needs m = a**3 + 3 with a != 0', K.m)
    eps = K.element(1, a * a, -a)
    cube = (a - K.omega) ** 3 * Fraction(-1, 3)
    if cube != eps or eps.norm() != 1:
        raise IdentityFailure('family_unit', a, cube, eps)
    return eps


def epsilon_alpha_beta_identity(b: int) -> IdentityRecord:
    """ eps * alpha = beta**2 and N(beta) = 3b**3 + 1 in Q(cbrt(8b**3 + 3)) """
    K = CubicField.from_b(b)
    m = K.m
    eps = family_unit(K)
    alpha = K.element(2 * b ** 3 + 1, -b * b)
    beta = K.element(4 * b ** 3 + 1, 0, -b)
    lhs, rhs = eps * alpha, beta * beta
    if lhs != rhs:
        raise IdentityFailure('eps*alpha = beta^2', b, lhs, rhs)
    target = 3 * b ** 3 + 1
    integer_side = (4 * b ** 3 + 1) ** 3 - b ** 3 * m * m
    if beta.norm() != target or integer_side != target:
        raise IdentityFailure('N(beta) = 3b^3 + 1', b, beta.norm(), target)
    return IdentityRecord('epsilon_alpha_beta', b, True, str(lhs), str(rhs),
                          {'m': m, 'norm_beta': target})


def congruent_one_mod4(e: CubicElement) -> bool:
    x, y, z = e.integer_coords()
    return x % 4 == 1 and y % 4 == 0 and z % 4 == 0


@dataclass(frozen=True)
class SquareTest:
    """ Outcome of :func:`square_test`.

    ``witness`` names what decided a non-square: the norm, the sign of the
    real embedding, a degree one prime (p, c) at which the element is a
    quadratic non-residue, or exhaustion of the reconstruction.
    """
    element: CubicElement
    status: str
    root: Optional[CubicElement] = None
    witness: Optional[str] = None
    bits: int = 0

    @property
    def is_square(self) -> bool:
        return self.status == SQUARE


def _residue_witness(f: CubicElement, limit: int):
    x, y, z = f.integer_coords()
    m, tested = f.m, 0
    for p in primes_below(4000)[2:]:
        if m % p == 0:
            continue
        for c in cube_roots_mod(m, p):
            residue = (x + y * c + z * c * c) % p
            if residue == 0:
                continue
            if jacobi(residue, p) == -1:
                return p, c
            tested += 1
            if tested >= limit:
                return None
    return None


def _to_fraction(value, bits: int) -> Fraction:
    return Fraction(int(mpmath.nint(mpmath.ldexp(value, bits))), 2 ** bits)


def _reconstruct(f: CubicElement, bits: int, bound: int):
    """ Candidate square roots of the integral f from its embeddings.

    Returns (root or None, decisive) where decisive means the working
    precision separates all rationals of denominator <= bound.
    """
    K = f.field
    with mpmath.workprec(bits):
        theta = mpmath.cbrt(K.m)
        zeta = mpmath.mpc(-1, mpmath.sqrt(3)) / 2
        s0, s1 = f.real_embedding(), f.complex_embedding()
        if s0 <= 0:
            return None, False
        g0, g1 = mpmath.sqrt(s0), mpmath.sqrt(s1)
        for sign in (1, -1):
            G = sign * g1
            coords = ((g0 + 2 * mpmath.re(G)) / 3,
                      (g0 + 2 * mpmath.re(zeta * zeta * G)) / (3 * theta),
                      (g0 + 2 * mpmath.re(zeta * G)) / (3 * theta ** 2))
            candidate = CubicElement(K, *(_to_fraction(c, bits).limit_denominator(bound) for c in coords))
            if candidate * candidate == f:
                return candidate, True
        scale = 1 + sum(abs(_mpf(c)) for c in f.coords) * theta ** 2
        small = min(1, mpmath.sqrt(abs(s0)), mpmath.sqrt(abs(s1)))
        error = scale * mpmath.ldexp(1, 16 - bits) / small
        return None, bool(error < mpmath.mpf(1) / (4 * bound * bound))


def square_test(e: CubicElement, precision_cap: int = PRECISION_CAP_BITS,
                witnesses: int = RESIDUE_WITNESSES) -> SquareTest:
    """ Decides whether e is a square in K.

    Cheap exact obstructions go first. Otherwise candidate roots are
    rebuilt from the real and complex embeddings, rounded to rationals
    of bounded denominator and squared exactly; precision doubles until
    that decides or the cap is reached.
    """
    if e.is_zero():
        raise ValueError('square test of zero')
    d = e.denominator()
    f = e * (d * d)
    n = f.norm()
    if n < 0 or not gmpy2.is_square(int(n)):
        return SquareTest(e, NONSQUARE, witness='norm %s is not a square' % n)
    try:
        sign = f.real_sign(precision_cap)
    except SquareTestUndecided:
        return SquareTest(e, UNDECIDED, bits=precision_cap)
    if sign < 0:
        return SquareTest(e, NONSQUARE, witness='negative real embedding')
    witness = _residue_witness(f, witnesses)
    if witness is not None:
        return SquareTest(e, NONSQUARE, witness='non-residue at (%i, w - %i)' % witness)
    bound = f.field.index_denominator
    bits = 128 + _start_bits(f)
    while bits <= precision_cap:
        root, decisive = _reconstruct(f, bits, bound)
        if root is not None:
            return SquareTest(e, SQUARE, root=root / d, bits=bits)
        if decisive:
            return SquareTest(e, NONSQUARE, witness='no root at %i bits' % bits, bits=bits)
        logger.debug('square test of %s: raising precision above %i bits', e, bits)
        bits *= 2
    return SquareTest(e, UNDECIDED, bits=precision_cap)


def _start_bits(f: CubicElement) -> int:
    return 2 * max(abs(int(c)).bit_length() for c in f.coords) + f.m.bit_length()


def is_square(e: CubicElement, precision_cap: int = PRECISION_CAP_BITS) -> Optional[CubicElement]:
    """ A square root of e in K, or None.

    Raises:
        SquareTestUndecided: when the precision cap is exhausted
    """
    outcome = square_test(e, precision_cap)
    if outcome.status == UNDECIDED:
        raise SquareTestUndecided(e, outcome.bits)
    return outcome.root


@dataclass(frozen=True)
class SexticPolynomial:
    """ charpoly_e(x**2), descending integer coefficients, content 1 """
    coefficients: Tuple[int, ...]
    reducible: bool

    def as_poly(self, symbol='x') -> sympy.Poly:
        return sympy.Poly(list(self.coefficients), sympy.Symbol(symbol), domain='ZZ')

    def discriminant(self) -> int:
        return int(sympy.discriminant(self.as_poly()))

    def __str__(self):
        return str(self.as_poly().as_expr())


def minpoly_sqrt(e: CubicElement) -> SexticPolynomial:
    """ Minimal polynomial of sqrt(e) over Q when e is not a square.

    Example::

        >>> K = CubicField(11)
        >>> minpoly_sqrt(K.element(9, -4)).coefficients
        (1, 0, -27, 0, 243, 0, -25)
    """
    e.integer_coords()
    cubic = [Fraction(int(c.p), int(c.q)) for c in e.charpoly().all_coeffs()]
    sextic = []
    for c in cubic:
        sextic += [c, Fraction(0)]
    sextic = sextic[:-1]
    denominators = lcm(*(c.denominator for c in sextic))
    integers = [int(c * denominators) for c in sextic]
    content = gcd(*integers)
    integers = [v // int(content) for v in integers]
    poly = sympy.Poly(integers, sympy.Symbol('x'), domain='ZZ')
    return SexticPolynomial(tuple(integers), not poly.is_irreducible)
