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
""" This file defines the exceptions raised by cubiclab.

Functions that need a precondition on their input raise one of these.
Callers that only care about bad values can catch :exc:`ValueError`::

    try:
        field = CubicField(m)
    except NotCubefree:
        alternative_statements()
"""


class CubiclabError(Exception):
    """ Base class of all cubiclab exceptions """


class FieldMismatch(CubiclabError, TypeError):
    """ Binary operation on elements of two different fields """

    def __init__(self, left, right):
        self.left = left
        self.right = right
        Exception.__init__(self)

    def __str__(self):
        return 'operands live in Q(cbrt(%s)) and Q(cbrt(%s))' % (self.left, self.right)


class NotCubefree(CubiclabError, ValueError):
    def __init__(self, m, prime):
        self.m = m
        self.prime = prime
        Exception.__init__(self)

    def __str__(self):
        return 'm = %i is not cubefree (%i^3 divides it)' % (self.m, self.prime)


class NotMonogenic(CubiclabError, ValueError):
    """ Z[omega] is not the maximal order, so ideal arithmetic is refused """

    def __init__(self, m, reason):
        self.m = m
        self.reason = reason
        Exception.__init__(self)

    def __str__(self):
        return 'Z[cbrt(%i)] is not maximal: %s' % (self.m, self.reason)


class NotIntegral(CubiclabError, ValueError):
    def __init__(self, element):
        self.element = element
        Exception.__init__(self)

    def __str__(self):
        return '%s has non-integral coordinates' % str(self.element)


class FamilyShapeError(CubiclabError, ValueError):
    """ Raised when a family construction gets a parameter outside the family """

    def __init__(self, what, value):
        self.what = what
        self.value = value
        Exception.__init__(self)

    def __str__(self):
        return '%s: %s' % (self.what, self.value)


class IdentityFailure(CubiclabError, AssertionError):
    """ An exact identity that must hold for every parameter failed.

    This is an internal error, scans record it in the row and go on.
    """

    def __init__(self, name, parameter, lhs, rhs):
        self.name = name
        self.parameter = parameter
        self.lhs = lhs
        self.rhs = rhs
        Exception.__init__(self)

    def __str__(self):
        return 'identity %s fails at %s: %s != %s' % (self.name, self.parameter, self.lhs, self.rhs)


class SquareTestUndecided(CubiclabError):
    """ The square test ran out of precision before exact verification decided """

    def __init__(self, element, bits):
        self.element = element
        self.bits = bits
        Exception.__init__(self)

    def __str__(self):
        return 'square test undecided for %s at %i bits' % (str(self.element), self.bits)


class NotOnCurve(CubiclabError, ValueError):
    def __init__(self, m, x, y):
        self.m = m
        self.x = x
        self.y = y
        Exception.__init__(self)

    def __str__(self):
        return '(%s, %s) is not on y^2 = x^3 - %i' % (self.x, self.y, self.m)


class PointPreconditionError(CubiclabError, ValueError):
    def __init__(self, operation, reason):
        self.operation = operation
        self.reason = reason
        Exception.__init__(self)

    def __str__(self):
        return '%s: %s' % (self.operation, self.reason)


class ParityViolation(CubiclabError, AssertionError):
    """ P + Q of two odd-denominator points came out with odd denominator """

    def __init__(self, p, q, total):
        self.p = p
        self.q = q
        self.total = total
        Exception.__init__(self)

    def __str__(self):
        return '%s + %s = %s has odd t' % (self.p, self.q, self.total)


class DegeneratePoint(CubiclabError, ValueError):
    def __init__(self, point, prime):
        self.point = point
        self.prime = prime
        Exception.__init__(self)

    def __str__(self):
        return 'r and s of %s share the prime %i' % (str(self.point), self.prime)


class ExponentParityViolation(CubiclabError):
    """ (r - t^2 omega) is not the square of an ideal """

    def __init__(self, element, prime_ideal, exponent):
        self.element = element
        self.prime_ideal = prime_ideal
        self.exponent = exponent
        Exception.__init__(self)

    def __str__(self):
        return '%s has odd exponent %i at %s' % (str(self.element), self.exponent, str(self.prime_ideal))


class ClassNotFound(CubiclabError):
    """ No smooth element was found to express the class of a prime ideal """

    def __init__(self, prime_ideal):
        self.prime_ideal = prime_ideal
        Exception.__init__(self)

    def __str__(self):
        return 'could not express the class of %s over the factor base' % str(self.prime_ideal)


class ConfigError(CubiclabError, ValueError):
    def __init__(self, key, reason):
        self.key = key
        self.reason = reason
        Exception.__init__(self)

    def __str__(self):
        return 'configuration %s: %s' % (self.key, self.reason)
