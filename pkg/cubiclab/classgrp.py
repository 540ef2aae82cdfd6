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
""" Ideals and ideal classes of Z[w], w**3 = m, for monogenic m.

Z[w] is the maximal order exactly when m is squarefree and m is not
+-1 mod 9; every function here refuses other m with
:exc:`~cubiclab.errors.NotMonogenic`.

A rational prime p decomposes following x**3 - m mod p:

- three roots: three degree-1 ideals (p, w - c),
- one root (p = 2 mod 3, or p = 2): (p, w - c) and a degree-2 cofactor,
- no root: p stays inert,
- p | 3m: (p) = P**3.

The class group is the cokernel of the relation lattice spanned by the
factorizations of smooth elements over all prime ideals of norm below the
Minkowski bound::

    >>> cg = class_group(11)
    >>> cg.h, str(cg.group)
    (2, 'Z/2')
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd
from typing import Dict, List, Optional, Tuple

import gmpy2
import mpmath
import numpy as np
from sympy import ZZ
from sympy.polys.matrices import DomainMatrix

from .cubic import CubicElement, CubicField, family_unit, norm_form
from .errors import ClassNotFound, ExponentParityViolation, NotMonogenic
from .intarith import (AbelianGroup, RelationLattice, cube_roots_mod, cubefree_squarefree_profile, factor,
                       is_probable_prime, jacobi, primes_below)
from .mordell import weil_representative
from .scheduler import flatten, scheduler_for

logger = logging.getLogger(__name__)

SPLIT = 'split'
QUADRATIC = 'quadratic'
INERT = 'inert'
RAMIFIED = 'ramified'

NOT_PRINCIPAL = 'not_principal'
PRINCIPAL = 'principal'
NOT_FOUND = 'not_found'

DEFAULT_RELATION_BOUND = 10
DEFAULT_PRINCIPAL_BOUND = 12
STABLE_TAIL = 0.25
LLL_WEIGHT = 2 ** 20
LLL_RADIUS = 3


def require_monogenic(m: int):
    profile = cubefree_squarefree_profile(m)
    if not profile.is_squarefree:
        raise NotMonogenic(m, 'm is not squarefree')
    if m % 9 in (1, 8):
        raise NotMonogenic(m, 'm = +-1 mod 9')


@dataclass(frozen=True)
class PrimeIdeal:
    """ A prime of Z[w] above p.

    Degree-1 primes are (p, w - root); the degree-2 cofactor and inert
    primes carry no root.
    """
    p: int
    kind: str
    residue_degree: int
    root: Optional[int] = None

    @property
    def norm(self) -> int:
        return self.p ** self.residue_degree

    @property
    def sort_key(self):
        return self.p, self.residue_degree, -1 if self.root is None else self.root

    @property
    def label(self) -> str:
        if self.kind == SPLIT:
            return 'p%i[%i]' % (self.p, self.root)
        if self.kind == QUADRATIC:
            return 'q%i' % self.p
        if self.kind == INERT:
            return '(%i)' % self.p
        return 'r%i' % self.p

    def contains(self, e: CubicElement) -> bool:
        if self.residue_degree != 1:
            return factor_element(e).exponent(self) > 0
        x, y, z = e.integer_coords()
        return (x + y * self.root + z * self.root ** 2) % self.p == 0

    def __str__(self):
        return self.label


def split_prime(p: int, m: int) -> List[PrimeIdeal]:
    """ The prime ideals above p, degree-1 primes first with ascending roots """
    if not is_probable_prime(p):
        raise ValueError('%i is not prime' % p)
    roots = cube_roots_mod(m, p)
    if p == 3 and m % 3 and m % 9 in (1, 8):
        raise NotMonogenic(m, '3 is not totally ramified for m = +-1 mod 9')
    if m % p == 0 or p == 3:
        return [PrimeIdeal(p, RAMIFIED, 1, roots[0])]
    if len(roots) == 3:
        return [PrimeIdeal(p, SPLIT, 1, c) for c in roots]
    if len(roots) == 1:
        return [PrimeIdeal(p, SPLIT, 1, roots[0]), PrimeIdeal(p, QUADRATIC, 2)]
    return [PrimeIdeal(p, INERT, 3)]


def minkowski_bound(m: int) -> Fraction:
    """ Ceiling of (4/pi) (3!/3**3) sqrt(27 m**2) = 8 sqrt(3) m / (3 pi) """
    require_monogenic(m)
    with mpmath.workdps(50):
        value = 8 * mpmath.sqrt(3) * m / (3 * mpmath.pi)
        return Fraction(int(mpmath.ceil(value)))


@dataclass(frozen=True)
class IdealFactorization:
    factors: Tuple[Tuple[PrimeIdeal, int], ...]
    element: Optional[CubicElement] = field(default=None, compare=False)

    @classmethod
    def of(cls, pairs, element=None) -> 'IdealFactorization':
        exponents: Dict[PrimeIdeal, int] = {}
        for P, e in pairs:
            exponents[P] = exponents.get(P, 0) + e
        factors = tuple(sorted(((P, e) for P, e in exponents.items() if e), key=lambda pe: pe[0].sort_key))
        return cls(factors, element)

    @property
    def norm(self) -> int:
        n = 1
        for P, e in self.factors:
            n *= P.norm ** e
        return n

    def exponent(self, P: PrimeIdeal) -> int:
        return dict(self.factors).get(P, 0)

    @property
    def primes(self) -> List[PrimeIdeal]:
        return [P for P, _ in self.factors]

    def is_square(self) -> bool:
        return all(e % 2 == 0 for _, e in self.factors)

    def half(self) -> 'IdealFactorization':
        return IdealFactorization(tuple((P, e // 2) for P, e in self.factors))

    def __mul__(self, other: 'IdealFactorization') -> 'IdealFactorization':
        return IdealFactorization.of(self.factors + other.factors)

    def __pow__(self, n: int) -> 'IdealFactorization':
        return IdealFactorization.of((P, e * n) for P, e in self.factors)

    def __str__(self):
        if not self.factors:
            return '(1)'
        return ' * '.join(P.label if e == 1 else '%s^%i' % (P.label, e) for P, e in self.factors)


def _lift_root(m: int, p: int, c: int, k: int) -> int:
    """ Newton lift of a simple root c of x**3 - m from mod p to mod p**k """
    target, modulus = p ** k, p
    while modulus < target:
        modulus = min(modulus * modulus, target)
        c = (c - (c ** 3 - m) * pow(3 * c * c, -1, modulus)) % modulus
    return c


def _split_valuation(e: CubicElement, p: int, root: int, bound: int) -> int:
    """ v_P(e) for P = (p, w - root) unramified, capped at ``bound`` """
    x, y, z = e.integer_coords()
    c = _lift_root(e.m, p, root, bound + 1)
    value = (x + y * c + z * c * c) % p ** (bound + 1)
    v = 0
    while value % p == 0 and v <= bound:
        value //= p
        v += 1
    return min(v, bound)


def factor_element(e: CubicElement) -> IdealFactorization:
    """ Factorization of the principal ideal (e) for integral e != 0.

    Degree-1 unramified valuations come from the image of e under
    w -> root lifted to p**(v_p(N) + 1); the rest of v_p(N) is assigned
    to the degree-2 cofactor, to the inert prime or to the ramified prime.
    """
    require_monogenic(e.m)
    x, y, z = e.integer_coords()
    if e.is_zero():
        raise ValueError('the zero element has no factorization')
    n = abs(norm_form(e.m, x, y, z))
    pairs = []
    for p, v in factor(n):
        ideals = split_prime(p, e.m)
        first = ideals[0]
        if first.kind == RAMIFIED:
            pairs.append((first, v))
            continue
        if first.kind == INERT:
            if v % 3:
                raise ArithmeticError('norm of %s has p-adic valuation %i at inert %i' % (e, v, p))
            pairs.append((first, v // 3))
            continue
        rest = v
        for P in ideals:
            if P.kind == SPLIT:
                valuation = _split_valuation(e, p, P.root, v)
                pairs.append((P, valuation))
                rest -= valuation
        if ideals[-1].kind == QUADRATIC:
            if rest % 2:
                raise ArithmeticError('odd residual valuation %i for %s at %i' % (rest, e, p))
            pairs.append((ideals[-1], rest // 2))
        elif rest:
            raise ArithmeticError('valuations of %s at %i do not add up to %i' % (e, p, v))
    return IdealFactorization.of(pairs, element=e)


def rational_prime_factorization(p: int, m: int) -> IdealFactorization:
    ideals = split_prime(p, m)
    if ideals[0].kind == RAMIFIED:
        return IdealFactorization.of([(ideals[0], 3)])
    return IdealFactorization.of((P, 1) for P in ideals)


def _smooth(n: int, primes) -> bool:
    for p in primes:
        while n % p == 0:
            n //= p
        if n == 1:
            return True
    return n == 1


def _shell(R: int):
    """ Integral triples of sup-norm R in lexicographic order, one of each pair +-e """
    if R == 0:
        return
    for x, y, z in product(range(-R, R + 1), repeat=3):
        if max(abs(x), abs(y), abs(z)) != R:
            continue
        lead = x or y or z
        if lead < 0:
            continue
        yield x, y, z


def _shell_relations(task) -> List[Tuple[int, ...]]:
    m, R, primes, base = task
    K = CubicField(m)
    index = {P: i for i, P in enumerate(base)}
    found = []
    for x, y, z in _shell(R):
        if gcd(x, y, z) != 1:
            continue
        n = abs(norm_form(m, x, y, z))
        if n == 0 or not _smooth(n, primes):
            continue
        vector = [0] * len(base)
        for P, e in factor_element(K.element(x, y, z)).factors:
            vector[index[P]] += e
        found.append(tuple(vector))
    return found


class ClassGroup:
    """ Ideal class group of Z[w] presented over a factor base.

    ``class_of`` maps an ideal to coordinates on the invariant factors.
    Prime ideals outside the factor base are placed by a short-element
    search inside them; their classes are cached.
    """

    def __init__(self, m: int, factor_base: Tuple[PrimeIdeal, ...], group: AbelianGroup,
                 lattice: RelationLattice, relations: List[Tuple[int, ...]], last_change: int,
                 relation_bound: int):
        self.m = m
        self.field = CubicField(m)
        self.factor_base = factor_base
        self.group = group
        self.lattice = lattice
        self.relations = relations
        self.last_change = last_change
        self.relation_bound = relation_bound
        self._index = {P: i for i, P in enumerate(factor_base)}
        self._base_primes = tuple(sorted({P.p for P in factor_base}))
        self._cache: Dict[PrimeIdeal, Tuple[int, ...]] = {}

    @property
    def h(self) -> int:
        return self.group.order

    @property
    def elementary_divisors(self) -> Tuple[int, ...]:
        return self.group.invariants

    @property
    def two_rank(self) -> int:
        return self.group.two_rank

    @property
    def stabilized(self) -> bool:
        """ Heuristic: the lattice did not change over the last quarter of the relation stream """
        return len(self.relations) > 0 and self.last_change <= (1 - STABLE_TAIL) * len(self.relations)

    @property
    def status(self) -> str:
        return 'stabilized' if self.stabilized else 'unstabilized'

    @property
    def zero(self) -> Tuple[int, ...]:
        return tuple(0 for _ in self.group.invariants)

    def vector(self, ideal: IdealFactorization) -> List[int]:
        """ Exponent vector over the factor base; KeyError for primes outside it """
        vector = [0] * len(self.factor_base)
        for P, e in ideal.factors:
            vector[self._index[P]] += e
        return vector

    def add(self, c1, c2) -> Tuple[int, ...]:
        return tuple((a + b) % d if d else a + b for a, b, d in zip(c1, c2, self.group.invariants))

    def scale(self, c, k: int) -> Tuple[int, ...]:
        return tuple((a * k) % d if d else a * k for a, d in zip(c, self.group.invariants))

    def class_of_prime(self, P: PrimeIdeal) -> Tuple[int, ...]:
        if P in self._index:
            unit = [0] * len(self.factor_base)
            unit[self._index[P]] = 1
            return self.group.element(unit)
        if P not in self._cache:
            self._cache[P] = self._class_outside_base(P)
        return self._cache[P]

    def class_of(self, ideal: IdealFactorization) -> Tuple[int, ...]:
        result = self.zero
        for P, e in ideal.factors:
            result = self.add(result, self.scale(self.class_of_prime(P), e))
        return result

    def is_trivial(self, ideal: IdealFactorization) -> bool:
        return not any(self.class_of(ideal))

    def _known(self, P: PrimeIdeal) -> bool:
        return P in self._index or P.kind == INERT or P in self._cache

    def _class_outside_base(self, P: PrimeIdeal) -> Tuple[int, ...]:
        if P.kind == INERT:
            return self.zero
        if P.kind == QUADRATIC:
            companion = split_prime(P.p, self.m)[0]
            return self.scale(self.class_of_prime(companion), -1)
        for element in short_elements(P, self.m):
            fac = factor_element(element)
            if fac.exponent(P) != 1:
                continue
            others = [(Q, e) for Q, e in fac.factors if Q != P]
            if not all(self._known(Q) for Q, _ in others):
                continue
            rest = self.zero
            for Q, e in others:
                rest = self.add(rest, self.scale(self.class_of_prime(Q), e))
            logger.debug('class of %s from %s = %s', P, element, fac)
            return self.scale(rest, -1)
        raise ClassNotFound(P)

    def __str__(self):
        return str(self.group)


def short_elements(P: PrimeIdeal, m: int, radius: int = LLL_RADIUS):
    """ Elements of the degree-1 prime P in increasing Minkowski size.

    The lattice of P has basis p, w - c, w**2 - c**2; it is LLL-reduced
    under the scaled embedding (real, sqrt(2) Re, sqrt(2) Im), then small
    combinations of the reduced basis are enumerated.
    """
    p, c = P.p, P.root
    basis = [(p, 0, 0), (-c, 1, 0), (-(c * c), 0, 1)]
    K = CubicField(m)
    with mpmath.workdps(40):
        rows = []
        for b in basis:
            e = K.element(*b)
            real, cplx = e.real_embedding(), e.complex_embedding()
            rows.append([int(mpmath.nint(LLL_WEIGHT * v))
                         for v in (real, mpmath.sqrt(2) * cplx.real, mpmath.sqrt(2) * cplx.imag)])
    reduced, transform = DomainMatrix([[ZZ(v) for v in row] for row in rows], (3, 3), ZZ).lll_transform()
    T = [[int(v) for v in row] for row in transform.to_list()]
    shape = np.array([[float(v) for v in row] for row in reduced.to_list()])
    reduced_basis = [tuple(sum(T[i][j] * basis[j][k] for j in range(3)) for k in range(3)) for i in range(3)]
    combos = [co for co in product(range(-radius, radius + 1), repeat=3) if any(co)]
    combos.sort(key=lambda co: (float(np.linalg.norm(np.array(co, dtype=float).dot(shape))), co))
    for co in combos:
        coords = [sum(co[i] * reduced_basis[i][k] for i in range(3)) for k in range(3)]
        yield K.element(*coords)


def class_group(m: int, relation_bound: int = DEFAULT_RELATION_BOUND, processes: int = 1) -> ClassGroup:
    """ Class group from relations among elements with coordinates up to ``relation_bound``.

    The rational primes of the factor base contribute the relations (p);
    the shells of growing sup-norm are scanned in lexicographic order,
    optionally spread over ``processes`` workers.
    """
    require_monogenic(m)
    bound = minkowski_bound(m)
    primes = tuple(p for p in primes_below(int(bound) + 1) if p <= bound)
    base = tuple(flatten(split_prime(p, m) for p in primes))
    lattice = RelationLattice(len(base))
    index = {P: i for i, P in enumerate(base)}
    stream = []
    for p in primes:
        vector = [0] * len(base)
        for P, e in rational_prime_factorization(p, m).factors:
            vector[index[P]] += e
        stream.append(tuple(vector))
    tasks = [(m, R, primes, base) for R in range(1, relation_bound + 1)]
    runner = scheduler_for(processes)
    try:
        stream.extend(flatten(runner.map(_shell_relations, tasks)))
    finally:
        runner.close()
    last_change = 0
    for position, relation in enumerate(stream, start=1):
        if lattice.insert(relation):
            last_change = position
    group = AbelianGroup.from_lattice(lattice)
    cg = ClassGroup(m, base, group, lattice, stream, last_change, relation_bound)
    logger.debug('class group of Z[cbrt(%i)]: %s from %i relations over %i primes, last change at %i',
                 m, group, len(stream), len(base), last_change)
    if not cg.stabilized:
        logger.warning('class group of Z[cbrt(%i)] is unstabilized (last change at relation %i of %i)',
                       m, last_change, len(stream))
    return cg


@dataclass(frozen=True)
class PointIdealClass:
    """ (alpha(P)) = a_P**2 and the class of a_P """
    point: object
    alpha: CubicElement
    factorization: IdealFactorization
    ideal: IdealFactorization
    class_vector: Tuple[int, ...]

    @property
    def is_trivial(self) -> bool:
        return not any(self.class_vector)


def point_ideal_class(P, cg: ClassGroup) -> PointIdealClass:
    """ Class of a_P for an affine point P, checking that (r - t**2 w) is a square ideal.

    Raises:
        ExponentParityViolation: a prime divides alpha(P) to an odd power
    """
    alpha = weil_representative(P)
    fac = factor_element(alpha)
    for prime, e in fac.factors:
        if e % 2:
            raise ExponentParityViolation(alpha, prime, e)
    half = fac.half()
    return PointIdealClass(P, alpha, fac, half, cg.class_of(half))


@dataclass(frozen=True)
class PrincipalityResult:
    status: str
    generator: Optional[CubicElement]
    class_vector: Optional[Tuple[int, ...]]

    @property
    def is_principal(self) -> bool:
        return self.status == PRINCIPAL


def _unit_powers(K: CubicField):
    a, exact = _family_parameter(K.m)
    if not exact:
        return [K.one]
    eps = family_unit(CubicField.from_a(a))
    inverse = eps.inverse()
    return [K.one, eps, inverse, eps * eps, inverse * inverse]


def _family_parameter(m: int):
    if m <= 3:
        return None, False
    a, exact = gmpy2.iroot(m - 3, 3)
    return int(a), bool(exact)


def is_principal(ideal: IdealFactorization, cg: ClassGroup,
                 bound: int = DEFAULT_PRINCIPAL_BOUND) -> PrincipalityResult:
    """ Search a generator of ``ideal`` among elements of sup-norm <= bound.

    A found generator is replaced by its smallest multiple eps**k, |k| <= 2,
    when m = a**3 + 3. ``not_principal`` is only claimed for a nonzero class
    in a stabilized group.
    """
    try:
        vector = cg.class_of(ideal)
    except ClassNotFound as error:
        logger.debug('is_principal: %s', error)
        vector = None
    K = cg.field
    target = ideal.norm
    for R in range(bound + 1):
        for x, y, z in _shell(R) if R else [(1, 0, 0)]:
            if abs(norm_form(K.m, x, y, z)) != target:
                continue
            candidate = K.element(x, y, z)
            if factor_element(candidate).factors != ideal.factors:
                continue
            generator = min((candidate * u for u in _unit_powers(K)), key=lambda g: (g.height(), str(g)))
            return PrincipalityResult(PRINCIPAL, generator, vector)
    if vector is not None and any(vector) and cg.stabilized:
        return PrincipalityResult(NOT_PRINCIPAL, None, vector)
    return PrincipalityResult(NOT_FOUND, None, vector)


def quadratic_symbol(e: CubicElement, P: PrimeIdeal) -> int:
    """ [e / P]_2 for a degree-1 prime P of odd norm: the Legendre symbol of e mod P """
    if P.residue_degree != 1 or P.p == 2:
        raise ValueError('quadratic symbol needs a degree-1 prime of odd norm, got %s' % P)
    x, y, z = e.integer_coords()
    residue = (x + y * P.root + z * P.root ** 2) % P.p
    if residue == 0:
        raise ValueError('%s lies in %s' % (e, P))
    return jacobi(residue, P.p)


def point_class_homomorphism_log(points, cg: ClassGroup) -> List[dict]:
    """ [a_P], [a_Q], [a_(P+Q)] and [a_P] + [a_Q] for each pair; nothing is asserted """
    rows = []
    for i, P in enumerate(points):
        for Q in points[i + 1:]:
            total = P + Q
            if total.is_infinity:
                continue
            try:
                cp, cq, cs = (point_ideal_class(X, cg) for X in (P, Q, total))
            except (ExponentParityViolation, ClassNotFound) as error:
                rows.append({'P': str(P), 'Q': str(Q), 'error': str(error)})
                continue
            added = cg.add(cp.class_vector, cq.class_vector)
            rows.append({'P': str(P), 'Q': str(Q), 'P+Q': str(total),
                         'class_P': list(cp.class_vector), 'class_Q': list(cq.class_vector),
                         'class_P+Q': list(cs.class_vector), 'class_P+class_Q': list(added),
                         'agrees': added == cs.class_vector})
            logger.debug('cubic class map %s', rows[-1])
    return rows
