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
""" The imaginary quadratic field k = Q(sqrt(-m)) with -m = 1 mod 4.

Ideal classes of k are represented by positive definite binary quadratic
forms (A, B, C) of discriminant B**2 - 4AC = -m. The ideal [A, (B + sqrt(-m))/2]
corresponds to (A, B, C).
"""
import logging
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import gmpy2

from .cubic import IdentityRecord
from .errors import DegeneratePoint, FamilyShapeError, IdentityFailure
from .intarith import AbelianGroup, RelationLattice, cubefree_squarefree_profile, is_probable_prime

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class QuadElement:
    """ u + v sqrt(-m); u, v both integers or both halves of odd integers when integral """
    m: int
    u: Fraction = Fraction(0)
    v: Fraction = Fraction(0)

    def __post_init__(self):
        if (-self.m) % 4 != 1:
            raise FamilyShapeError('Q(sqrt(-m)) needs -m = 1 mod 4', self.m)
        object.__setattr__(self, 'u', Fraction(self.u))
        object.__setattr__(self, 'v', Fraction(self.v))

    def _coerce(self, other):
        if isinstance(other, QuadElement):
            if other.m != self.m:
                raise FamilyShapeError('mixed quadratic fields', (self.m, other.m))
            return other
        return QuadElement(self.m, other)

    def __add__(self, other):
        other = self._coerce(other)
        return QuadElement(self.m, self.u + other.u, self.v + other.v)

    __radd__ = __add__

    def __neg__(self):
        return QuadElement(self.m, -self.u, -self.v)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other):
        other = self._coerce(other)
        return QuadElement(self.m,
                           self.u * other.u - self.m * self.v * other.v,
                           self.u * other.v + self.v * other.u)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = QuadElement(self.m, 1)
        for _ in range(n):
            result = result * self
        return result

    def conjugate(self) -> 'QuadElement':
        return QuadElement(self.m, self.u, -self.v)

    def norm(self) -> Fraction:
        return self.u * self.u + self.m * self.v * self.v

    def is_integral(self) -> bool:
        twice_u, twice_v = 2 * self.u, 2 * self.v
        return (twice_u.denominator == 1 and twice_v.denominator == 1
                and (twice_u - twice_v) % 2 == 0)

    def __str__(self):
        sign = '-' if self.v < 0 else '+'
        return '%s %s %s*sqrt(-%i)' % (self.u, sign, abs(self.v), self.m)


def cube_identity(b: int) -> IdentityRecord:
    """ ((-1 - sqrt(-m))/2)**3 = 3b**3 + 1 + b**3 sqrt(-m) and N(tau) = (2b**3 + 1)**3.

    The same cube taken of (1 + sqrt(-m))/2 gives -tau; the record keeps
    both readings.
    """
    m = 8 * b ** 3 + 3
    root = QuadElement(m, Fraction(-1, 2), Fraction(-1, 2))
    tau = QuadElement(m, 3 * b ** 3 + 1, b ** 3)
    cube = root ** 3
    if cube != tau:
        raise IdentityFailure('((-1 - sqrt(-m))/2)^3 = tau', b, cube, tau)
    if tau.norm() != (2 * b ** 3 + 1) ** 3:
        raise IdentityFailure('N(tau) = (2b^3 + 1)^3', b, tau.norm(), (2 * b ** 3 + 1) ** 3)
    printed = QuadElement(m, Fraction(1, 2), Fraction(1, 2)) ** 3
    return IdentityRecord('cube_identity', b, True, str(cube), str(tau),
                          {'m': m, 'norm_tau': int(tau.norm()),
                           'positive_root_cube_is_tau': printed == tau,
                           'positive_root_cube_is_minus_tau': printed == -tau})


def footnote_cube_identity(b: int) -> IdentityRecord:
    """ ((3 + sqrt(-m))/2)**3 = -9b**3 + (3 - b**3) sqrt(-m) """
    m = 8 * b ** 3 + 3
    cube = QuadElement(m, Fraction(3, 2), Fraction(1, 2)) ** 3
    expected = QuadElement(m, -9 * b ** 3, 3 - b ** 3)
    if cube != expected:
        raise IdentityFailure('((3 + sqrt(-m))/2)^3', b, cube, expected)
    return IdentityRecord('footnote_cube_identity', b, True, str(cube), str(expected), {'m': m})


def _solve_mod(a: int, b: int, modulus: int) -> Tuple[int, int]:
    """ Solutions of a*x = b mod modulus as x0 + k*step """
    g, d, _ = gmpy2.gcdext(a, modulus)
    if b % g != 0:
        raise ValueError('no solution to %i*x = %i mod %i' % (a, b, modulus))
    return int((b // g) * d % modulus), int(modulus // g)


@dataclass(frozen=True, order=True)
class QuadForm:
    A: int
    B: int
    C: int

    def __post_init__(self):
        for name in ('A', 'B', 'C'):
            object.__setattr__(self, name, int(getattr(self, name)))

    @classmethod
    def principal(cls, m: int) -> 'QuadForm':
        return cls(1, 1, (1 + m) // 4)

    @classmethod
    def from_AB(cls, A: int, B: int, discriminant: int) -> 'QuadForm':
        C, rest = divmod(B * B - discriminant, 4 * A)
        if rest:
            raise ValueError('B^2 - D is not divisible by 4A for (%i, %i, %i)' % (A, B, discriminant))
        return cls(A, B, C)

    @property
    def discriminant(self) -> int:
        return self.B * self.B - 4 * self.A * self.C

    def inverse(self) -> 'QuadForm':
        return QuadForm(self.A, -self.B, self.C)

    def normalize(self) -> 'QuadForm':
        a, b, c = self.A, self.B, self.C
        if -a < b <= a:
            return self
        r = (a - b) // (2 * a)
        return QuadForm(a, b + 2 * r * a, a * r * r + b * r + c)

    def is_reduced(self) -> bool:
        a, b, c = self.A, self.B, self.C
        return abs(b) <= a <= c and not (b < 0 and (a == c or -b == a))

    def reduce(self) -> 'QuadForm':
        """ The unique reduced form properly equivalent to self """
        f = self.normalize()
        a, b, c = f.A, f.B, f.C
        while a > c or (a == c and b < 0):
            s = (c + b) // (2 * c)
            a, b, c = c, -b + 2 * s * c, c * s * s - b * s + a
        return QuadForm(a, b, c).normalize()

    def compose(self, other: 'QuadForm') -> 'QuadForm':
        """ Gaussian composition, not reduced """
        if other.discriminant != self.discriminant:
            raise ValueError('forms of different discriminants')
        a1, b1, c1 = self.A, self.B, self.C
        a2, b2 = other.A, other.B
        g = (b1 + b2) // 2
        h = (b2 - b1) // 2
        w = int(gmpy2.gcd(gmpy2.gcd(a1, a2), g))
        s, t, u = a1 // w, a2 // w, g // w
        k_temp, constant_factor = _solve_mod(t * u, h * u + s * c1, s * t)
        n, _ = _solve_mod(t * constant_factor, h - t * k_temp, s)
        k = k_temp + constant_factor * n
        l = (t * k - h) // s
        m = (t * u * k - h * u - s * c1) // (s * t)
        return QuadForm(s * t, w * u - (k * t + l * s), k * l - w * m)

    def __mul__(self, other: 'QuadForm') -> 'QuadForm':
        return self.compose(other).reduce()

    def __pow__(self, n: int) -> 'QuadForm':
        result = QuadForm.principal(-self.discriminant)
        base = self if n >= 0 else self.inverse()
        for _ in range(abs(n)):
            result = result * base
        return result

    def contains(self, element: QuadElement) -> bool:
        """ element lies in the ideal [A, (B + sqrt(D))/2] """
        if not element.is_integral():
            return False
        y = 2 * element.v
        rest = element.u - y * Fraction(self.B, 2)
        return rest.denominator == 1 and rest % self.A == 0

    def __str__(self):
        return '(%i, %i, %i)' % (self.A, self.B, self.C)


def reduced_forms(m: int) -> List[QuadForm]:
    """ All primitive reduced forms of discriminant -m, sorted """
    D = -m
    forms = []
    a = 1
    while 3 * a * a <= m:
        for b in range(-a + 1, a + 1):
            if (b - D) % 2:
                continue
            c, rest = divmod(b * b - D, 4 * a)
            if rest or c < a:
                continue
            f = QuadForm(a, b, c)
            if f.is_reduced() and gmpy2.gcd(gmpy2.gcd(a, b), c) == 1:
                forms.append(f)
        a += 1
    return sorted(forms)


@dataclass(frozen=True)
class FormClassGroup:
    """ Form class group of discriminant -m.

    ``logs`` maps each reduced form to its exponent vector over
    ``generators``; ``group`` turns such vectors into invariant-factor
    coordinates.
    """
    m: int
    forms: Tuple[QuadForm, ...]
    generators: Tuple[QuadForm, ...]
    group: AbelianGroup
    logs: Dict[QuadForm, Tuple[int, ...]] = field(compare=False, repr=False)
    fundamental: bool = True

    @property
    def discriminant(self) -> int:
        return -self.m

    @property
    def h(self) -> int:
        return len(self.forms)

    @property
    def structure(self) -> Tuple[int, ...]:
        return self.group.invariants

    def class_of(self, form: QuadForm) -> Tuple[int, ...]:
        return self.group.element(self.logs[form.reduce()])


def class_group(m: int) -> FormClassGroup:
    """ Class group of discriminant -m from its reduced forms.

    The forms whose leading coefficient is prime generate the group; a
    breadth-first walk over products of generators yields the relations,
    which are turned into invariant factors by Smith normal form.
    """
    if (-m) % 4 != 1:
        raise FamilyShapeError('discriminant -m must be 1 mod 4', m)
    forms = reduced_forms(m)
    identity = QuadForm.principal(m)
    generators = tuple(f for f in forms if is_probable_prime(f.A)) or (identity,)
    lattice = RelationLattice(len(generators))
    logs = {identity: (0,) * len(generators)}
    queue = deque([identity])
    while queue:
        current = queue.popleft()
        for i, g in enumerate(generators):
            target = current * g
            vector = list(logs[current])
            vector[i] += 1
            if target in logs:
                lattice.insert([v - w for v, w in zip(vector, logs[target])])
            else:
                logs[target] = tuple(vector)
                queue.append(target)
    group = AbelianGroup.from_lattice(lattice)
    if group.order != len(forms):
        logger.warning('form class group of -%i: order %i but %i reduced forms', m, group.order, len(forms))
    fundamental = cubefree_squarefree_profile(m).is_squarefree if m > 1 else True
    if not fundamental:
        logger.warning('discriminant -%i is not fundamental', m)
    return FormClassGroup(m, tuple(forms), generators, group, logs, fundamental)


@dataclass(frozen=True)
class QuadPointClass:
    """ The ideal b = (r, s + t**3 sqrt(-m)) of a curve point and its class """
    point: object
    form: QuadForm
    reduced: QuadForm
    class_vector: Tuple[int, ...]
    cube_generator_verified: bool
    square_reading_possible: bool

    @property
    def is_principal(self) -> bool:
        return not any(self.class_vector)


def point_to_quad_class(point, cg: FormClassGroup) -> QuadPointClass:
    """ Class of b with N(b) = r and b**3 = (s + t**3 sqrt(-m)) for a point (r/t**2, s/t**3).

    Raises:
        DegeneratePoint: when r and s share a prime, so that b and its
            conjugate are not coprime
    """
    m = cg.m
    identity = QuadForm.principal(m)
    if point.is_infinity:
        return QuadPointClass(point, identity, identity, cg.class_of(identity), True, True)
    r, s, t = point.r, point.s, point.t
    common = int(gmpy2.gcd(r, s))
    if common > 1:
        raise DegeneratePoint(point, min(p for p in range(2, common + 1) if common % p == 0))
    if r == 1:
        return QuadPointClass(point, identity, identity, cg.class_of(identity), True, True)
    k = s * pow(t ** 3, -1, r) % r
    form = None
    for B in (k, k + r):
        if B % 2 == 1 and (B * B + m) % (4 * r) == 0:
            form = QuadForm.from_AB(r, B, -m)
            break
    if form is None:
        raise DegeneratePoint(point, 2)
    cube = form.compose(form).compose(form)
    generator = QuadElement(m, s, t ** 3)
    verified = cube.A == r ** 3 and cube.contains(generator)
    reduced = form.reduce()
    return QuadPointClass(point, form, reduced, cg.class_of(reduced), verified, bool(gmpy2.is_square(r)))


def quad_class_homomorphism_log(points, cg: FormClassGroup) -> List[dict]:
    """ Class of b for P, Q, P + Q and the product of the first two classes.

    Whether P -> [b] respects the group law is an experiment; nothing is
    asserted here.
    """
    rows = []
    for i, P in enumerate(points):
        for Q in points[i + 1:]:
            total = P + Q
            try:
                cp, cq, cs = (point_to_quad_class(X, cg) for X in (P, Q, total))
            except DegeneratePoint as error:
                rows.append({'P': str(P), 'Q': str(Q), 'error': str(error)})
                continue
            product = cp.reduced * cq.reduced
            rows.append({'P': str(P), 'Q': str(Q), 'P+Q': str(total),
                         'class_P': str(cp.reduced), 'class_Q': str(cq.reduced),
                         'class_P+Q': str(cs.reduced), 'class_P*class_Q': str(product),
                         'agrees': product == cs.reduced})
            logger.debug('quadmap %s', rows[-1])
    return rows
