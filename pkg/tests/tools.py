""" Shared fixtures for the test suites: the worked curves and
deterministic random elements.
"""
import random
from fractions import Fraction

from cubiclab.mordell import CurvePoint

P11 = CurvePoint(11, 3, 4, 1)
Q11 = CurvePoint(11, 15, 58, 1)
P219 = CurvePoint.from_xy(219, Fraction(55, 9), Fraction(82, 27))
Q219 = CurvePoint.from_xy(219, Fraction(283, 9), Fraction(4744, 27))


def family_m(b):
    return 8 * b ** 3 + 3


def random_elements(K, count, bound=20, seed=0, nonzero=True):
    """ ``count`` integral elements of K with coordinates in [-bound, bound] """
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        e = K.element(*(rng.randint(-bound, bound) for _ in range(3)))
        if nonzero and e.is_zero():
            continue
        out.append(e)
    return out


def random_points(points, count, seed=0):
    rng = random.Random(seed)
    return [tuple(rng.choice(points) for _ in range(3)) for _ in range(count)]
