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
""" Integer utilities used by the field, curve and class group modules.

:func:`factor` factors integers deterministically: trial division by the
primes below 10**6, then Brent's variant of Pollard rho with fixed seeds.
Cofactors are certified with strong probable prime tests to a fixed set
of bases, which is a proof below 3.3 * 10**24.

:func:`smith_normal_form` and :class:`RelationLattice` turn relation
matrices into finite abelian groups. Matrices are numpy arrays of
``dtype=object`` so the entries stay Python integers.

Example::

    >>> str(factor(54875))
    '5^3 * 439'
    >>> jacobi(45, 37)
    -1
"""
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import List, Optional, Sequence, Tuple

import gmpy2
import numpy as np
import sympy
from sympy.ntheory.residue_ntheory import nthroot_mod

TRIAL_DIVISION_BOUND = 10 ** 6
PRP_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


@lru_cache(maxsize=16)
def primes_below(limit: int) -> Tuple[int, ...]:
    """ All primes p < limit, sieved with numpy """
    if limit <= 2:
        return ()
    sieve = np.ones(limit, dtype=bool)
    sieve[:2] = False
    sieve[4::2] = False
    for p in range(3, int(limit ** 0.5) + 1, 2):
        if sieve[p]:
            sieve[p * p::2 * p] = False
    return tuple(int(p) for p in np.nonzero(sieve)[0])


def is_probable_prime(n: int) -> bool:
    """ Strong probable prime test to the bases in PRP_BASES.

    Deterministic; a proof of primality for n < 3.3 * 10**24.
    """
    if n < 2:
        return False
    for p in PRP_BASES:
        if n % p == 0:
            return n == p
    return all(gmpy2.is_strong_prp(n, a) for a in PRP_BASES)


def _brent_rho(n: int) -> int:
    """ A nontrivial factor of the odd composite n """
    n = gmpy2.mpz(n)
    for c in range(1, 200):
        y, r, q, g = gmpy2.mpz(2), 1, gmpy2.mpz(1), gmpy2.mpz(1)
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(128, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gmpy2.gcd(q, n)
                k += 128
            r *= 2
        if g == n:
            g = gmpy2.mpz(1)
            while g == 1:
                ys = (ys * ys + c) % n
                g = gmpy2.gcd(abs(x - ys), n)
        if g != n:
            return int(g)
    raise ArithmeticError('rho found no factor of %i' % n)


def _split(n: int) -> List[int]:
    if is_probable_prime(n):
        return [n]
    for k in (2, 3):
        root, exact = gmpy2.iroot(n, k)
        if exact:
            return _split(int(root)) * k
    d = _brent_rho(n)
    return _split(d) + _split(n // d)


@dataclass(frozen=True)
class Factorization:
    """ n = product of p**e over ``factors``, primes strictly increasing """
    n: int
    factors: Tuple[Tuple[int, int], ...]

    def primes(self) -> List[int]:
        return [p for p, _ in self.factors]

    def exponent(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0

    def __iter__(self):
        return iter(self.factors)

    def __str__(self):
        if not self.factors:
            return '1'
        return ' * '.join(str(p) if e == 1 else '%i^%i' % (p, e) for p, e in self.factors)


@lru_cache(maxsize=4096)
def factor(n: int) -> Factorization:
    """ Factors n >= 1.

    Raises:
        ValueError: for n < 1
    """
    n = int(n)
    if n < 1:
        raise ValueError('factor() needs n >= 1, got %i' % n)
    rest = n
    found = {}
    covered = False
    for p in primes_below(TRIAL_DIVISION_BOUND):
        if p * p > rest:
            covered = True
            break
        if rest % p == 0:
            e = 0
            while rest % p == 0:
                rest //= p
                e += 1
            found[p] = e
    if rest > 1:
        for q in ([rest] if covered else _split(rest)):
            found[q] = found.get(q, 0) + 1
    return Factorization(n, tuple(sorted(found.items())))


def jacobi(a: int, n: int) -> int:
    """ The Jacobi symbol (a/n) for odd n >= 1 """
    if n < 1 or n % 2 == 0:
        raise ValueError('jacobi() needs an odd positive modulus, got %i' % n)
    return int(gmpy2.jacobi(a, n))


@dataclass(frozen=True)
class CubefreeProfile:
    m: int
    factorization: Factorization
    is_squarefree: bool
    is_cubefree: bool
    squared_primes: Tuple[int, ...]
    squared_primes_2mod3: Tuple[int, ...]

    @property
    def odd_class_candidate(self) -> bool:
        """ exactly one squared prime p = 2 mod 3 """
        return len(self.squared_primes_2mod3) == 1


def cubefree_squarefree_profile(m: int) -> CubefreeProfile:
    if m < 2:
        raise ValueError('profile needs m >= 2, got %i' % m)
    fac = factor(m)
    squared = tuple(p for p, e in fac if e >= 2)
    return CubefreeProfile(m=m,
                           factorization=fac,
                           is_squarefree=not squared,
                           is_cubefree=all(e < 3 for _, e in fac),
                           squared_primes=squared,
                           squared_primes_2mod3=tuple(p for p in squared if p % 3 == 2))


def cube_roots_mod(m: int, p: int) -> List[int]:
    """ All c in [0, p) with c**3 = m mod p, ascending; p prime """
    m %= p
    if m == 0:
        return [0]
    if p <= 3:
        return [c for c in range(p) if pow(c, 3, p) == m]
    if p % 3 == 2:
        return [pow(m, (2 * p - 1) // 3, p)]
    roots = nthroot_mod(m, 3, p, all_roots=True) or []
    return sorted(int(c) for c in roots)


@dataclass(frozen=True)
class PolynomialFit:
    """ Interpolating polynomial of values taken at 1..k.

    ``coefficients`` are descending, ``differences[j]`` is the j-th
    forward difference row and ``degree`` the least d whose d-th
    differences are constant.
    """
    values: Tuple[int, ...]
    coefficients: Tuple[Fraction, ...]
    differences: Tuple[Tuple[int, ...], ...]
    degree: int

    @property
    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coefficients)

    def __call__(self, x):
        acc = Fraction(0)
        for c in self.coefficients:
            acc = acc * x + c
        return acc

    def as_poly(self, symbol='x') -> sympy.Poly:
        x = sympy.Symbol(symbol)
        return sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in self.coefficients], x)


def fit_polynomial(values: Sequence[int]) -> PolynomialFit:
    """ Newton forward-difference fit of values at the arguments 1..k.

    Example::

        >>> fit_polynomial([3, 17, 55, 129, 251, 433]).coefficients
        (Fraction(2, 1), Fraction(0, 1), Fraction(0, 1), Fraction(1, 1))
    """
    values = tuple(int(v) for v in values)
    if not values:
        raise ValueError('fit_polynomial needs at least one value')
    table = [values]
    while len(table[-1]) > 1:
        row = table[-1]
        table.append(tuple(row[i + 1] - row[i] for i in range(len(row) - 1)))
    degree = next(d for d, row in enumerate(table) if len(set(row)) == 1)
    x = sympy.Symbol('x')
    poly = sympy.Poly(0, x, domain='QQ')
    basis = sympy.Poly(1, x, domain='QQ')
    for j in range(degree + 1):
        poly += basis * sympy.Rational(table[j][0], factorial(j))
        basis *= sympy.Poly(x - 1 - j, x, domain='QQ')
    coefficients = tuple(Fraction(int(c.p), int(c.q)) for c in poly.all_coeffs())
    return PolynomialFit(values, coefficients, tuple(table), degree)


def int_matrix(rows) -> np.ndarray:
    """ Integer matrix as a numpy object array (exact entries) """
    matrix = np.array([[int(v) for v in row] for row in rows], dtype=object)
    if matrix.ndim != 2:
        matrix = matrix.reshape(len(rows), -1)
    return matrix


def _identity(n: int) -> np.ndarray:
    matrix = np.zeros((n, n), dtype=object)
    for i in range(n):
        matrix[i, i] = 1
    return matrix


def _smallest_entry(A: np.ndarray, t: int) -> Optional[Tuple[int, int]]:
    best = None
    for i in range(t, A.shape[0]):
        for j in range(t, A.shape[1]):
            if A[i, j] != 0 and (best is None or abs(A[i, j]) < abs(A[best])):
                best = (i, j)
    return best


def smith_normal_form(matrix) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """ Returns (U, S, V) with U * A * V = S.

    U and V are unimodular, S is diagonal with nonnegative entries and
    S[i, i] divides S[i + 1, i + 1].
    """
    A = int_matrix(matrix) if not isinstance(matrix, np.ndarray) else matrix.astype(object).copy()
    rows, cols = A.shape
    U, V = _identity(rows), _identity(cols)
    for t in range(min(rows, cols)):
        while True:
            pivot = _smallest_entry(A, t)
            if pivot is None:
                return U, A, V
            i, j = pivot
            A[[t, i]], U[[t, i]] = A[[i, t]], U[[i, t]]
            A[:, [t, j]], V[:, [t, j]] = A[:, [j, t]], V[:, [j, t]]
            clean = True
            for i in range(t + 1, rows):
                q = A[i, t] // A[t, t]
                if q:
                    A[i, :] = A[i, :] - q * A[t, :]
                    U[i, :] = U[i, :] - q * U[t, :]
                clean = clean and A[i, t] == 0
            for j in range(t + 1, cols):
                q = A[t, j] // A[t, t]
                if q:
                    A[:, j] = A[:, j] - q * A[:, t]
                    V[:, j] = V[:, j] - q * V[:, t]
                clean = clean and A[t, j] == 0
            if not clean:
                continue
            offender = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                             if A[i, j] % A[t, t] != 0), None)
            if offender is None:
                break
            A[t, :] = A[t, :] + A[offender[0], :]
            U[t, :] = U[t, :] + U[offender[0], :]
        if A[t, t] < 0:
            A[t, :] = -A[t, :]
            U[t, :] = -U[t, :]
    return U, A, V


class RelationLattice:
    """ Integer row lattice in Z^dimension kept in echelon form.

    Relations are inserted one at a time; :meth:`insert` tells whether
    the lattice grew. The cokernel Z^dimension / lattice is the group
    presented by the relations.
    """

    def __init__(self, dimension: int):
        self.dimension = dimension
        self._rows = {}

    def __len__(self):
        return len(self._rows)

    def _size_reduce(self, row, start):
        for col in range(start, self.dimension):
            pivot = self._rows.get(col)
            if pivot is not None and row[col]:
                q = row[col] // pivot[col]
                if q:
                    row = [r - q * p for r, p in zip(row, pivot)]
        return row

    def insert(self, relation) -> bool:
        row = [int(v) for v in relation]
        if len(row) != self.dimension:
            raise ValueError('relation has length %i, lattice dimension is %i' % (len(row), self.dimension))
        changed = False
        for col in range(self.dimension):
            if row[col] == 0:
                continue
            pivot = self._rows.get(col)
            if pivot is None:
                if row[col] < 0:
                    row = [-v for v in row]
                self._rows[col] = self._size_reduce(row, col + 1)
                return True
            a, b = pivot[col], row[col]
            if b % a == 0:
                q = b // a
                row = [r - q * p for r, p in zip(row, pivot)]
                continue
            g, x, y = (int(v) for v in gmpy2.gcdext(a, b))
            self._rows[col] = self._size_reduce([x * p + y * r for p, r in zip(pivot, row)], col + 1)
            row = [(b // g) * p - (a // g) * r for p, r in zip(pivot, row)]
            changed = True
        return changed

    def contains(self, vector) -> bool:
        row = [int(v) for v in vector]
        for col in range(self.dimension):
            if row[col] == 0:
                continue
            pivot = self._rows.get(col)
            if pivot is None or row[col] % pivot[col] != 0:
                return False
            q = row[col] // pivot[col]
            row = [r - q * p for r, p in zip(row, pivot)]
        return True

    def matrix(self) -> np.ndarray:
        if not self._rows:
            return np.zeros((0, self.dimension), dtype=object)
        return int_matrix([self._rows[col] for col in sorted(self._rows)])

    def cokernel(self) -> Tuple[List[int], np.ndarray]:
        """ Elementary divisors of Z^dimension / lattice and the column transform V.

        A vector x maps to the coordinates of x * V, the i-th taken mod the
        i-th divisor; a divisor 0 is a free factor.
        """
        if not self._rows:
            return [0] * self.dimension, _identity(self.dimension)
        _, S, V = smith_normal_form(self.matrix())
        divisors = [int(S[i, i]) for i in range(min(S.shape))]
        divisors += [0] * (self.dimension - len(divisors))
        return divisors, V


@dataclass(frozen=True)
class AbelianGroup:
    """ Finite or finitely generated abelian group Z/d_1 x ... with d_i | d_(i+1) """
    divisors: Tuple[int, ...]
    transform: np.ndarray = field(compare=False, repr=False)

    @classmethod
    def from_lattice(cls, lattice: RelationLattice) -> 'AbelianGroup':
        divisors, V = lattice.cokernel()
        return cls(tuple(divisors), V)

    @property
    def invariants(self) -> Tuple[int, ...]:
        return tuple(d for d in self.divisors if d != 1)

    @property
    def order(self) -> int:
        """ 0 for an infinite group """
        if any(d == 0 for d in self.divisors):
            return 0
        order = 1
        for d in self.divisors:
            order *= d
        return order

    @property
    def two_rank(self) -> int:
        return sum(1 for d in self.invariants if d % 2 == 0)

    def element(self, vector) -> Tuple[int, ...]:
        """ Coordinates of a generator-exponent vector on the invariant factors """
        image = np.array([int(v) for v in vector], dtype=object).dot(self.transform)
        return tuple(int(image[i]) % d if d else int(image[i])
                     for i, d in enumerate(self.divisors) if d != 1)

    def __str__(self):
        if not self.invariants:
            return '1'
        return ' x '.join('Z' if d == 0 else 'Z/%i' % d for d in self.invariants)
