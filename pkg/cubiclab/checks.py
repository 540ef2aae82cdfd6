""" Per-b checks of a family scan.

Every check takes b and the scan parameters and returns the columns it
fills. ``run_checks`` is the unit of work handed to the scheduler, so it
and everything it calls live at module level and pickle cleanly. A check
that raises leaves its columns empty and records the error in the row.
"""
import json
import logging
import os
from collections import OrderedDict
from functools import lru_cache

from . import classgrp, hcf, quad
from .cubic import epsilon_alpha_beta_identity
from .errors import ClassNotFound, CubiclabError
from .intarith import cubefree_squarefree_profile
from .mordell import (doubling_square_identity, family_point, is_torsion, root_number, search_points,
                      twisted_family_root_number, weil_representative)

logger = logging.getLogger(__name__)

ANNOTATIONS_PATH = os.path.join(os.path.dirname(__file__), 'data', 'annotations.json')

BASE_COLUMNS = ('b', 'm', 'factorization', 'cubefree', 'squarefree', 'monogenic', 'm_mod_9')


@lru_cache(maxsize=1)
def annotations() -> dict:
    with open(ANNOTATIONS_PATH, 'r', encoding='utf-8') as f:
        return json.load(f)


def annotated_rank(b: int):
    rank = annotations()['rank']
    if b > rank['b_max']:
        return None
    return rank['exceptions'].get(str(b), rank['default'])


def base_columns(b, params):
    m = 8 * b ** 3 + 3
    profile = cubefree_squarefree_profile(m)
    return {'b': b, 'm': m, 'factorization': str(profile.factorization), 'cubefree': profile.is_cubefree,
            'squarefree': profile.is_squarefree, 'monogenic': profile.is_squarefree and m % 9 not in (1, 8),
            'm_mod_9': m % 9}


def factor_check(b, params):
    """ m mod 100 and the squared primes behind the odd-class-number condition """
    m = 8 * b ** 3 + 3
    profile = cubefree_squarefree_profile(m)
    residue = m % 100
    return {'m_mod_100': residue,
            'twentyfive_divides': m % 25 == 0 if residue in (19, 69) else None,
            'squared_primes': ','.join(str(p) for p in profile.squared_primes),
            'odd_class_candidate': profile.odd_class_candidate}


def root_number_check(b, params):
    w = root_number(8 * b ** 3 + 3)
    return {'w': w.w, 'parity_prediction': 'odd' if w.predicts_odd_rank else 'even',
            'w_contributing_primes': ','.join(str(p) for p in w.contributing_primes),
            'twisted_w': twisted_family_root_number(b).w}


def family_point_check(b, params):
    P = family_point(b)
    return {'family_point': str(P), 'family_point_torsion': is_torsion(P),
            'doubling_identity': doubling_square_identity(P).holds}


def identities_check(b, params):
    cube = quad.cube_identity(b)
    return {'eps_alpha_beta': epsilon_alpha_beta_identity(b).holds,
            'cube_identity': cube.holds,
            'printed_root_cube': 'tau' if cube.details['positive_root_cube_is_tau'] else '-tau',
            'footnote_identity': quad.footnote_cube_identity(b).holds}


def points_check(b, params):
    m = 8 * b ** 3 + 3
    points = search_points(m, params['t_max'], params['r_max'])
    bound = hcf.two_rank_lower_bound(points, m, params['precision_cap_bits']) if points else None
    return {'points_found': len(points), 'even_t_points': sum(1 for P in points if P.t % 2 == 0),
            'two_rank_bound': None if bound is None else bound.bound}


def certificate_check(b, params):
    construction = hcf.construct_from_curve(8 * b ** 3 + 3, params['t_max'], params['r_max'],
                                            precision_cap=params['precision_cap_bits'])
    certificate = construction.certificate
    return {'certificate_valid': construction.found, 'certificate_via': construction.via,
            'certificate_alpha': None if certificate is None else str(certificate.alpha),
            'certificate_failures': construction.reason if not construction.found else ''}


def unit_check(b, params):
    """ a = 2b, so 4 | a exactly for even b """
    if b % 2:
        return {'unit_certificate': None}
    return {'unit_certificate': hcf.unit_construction(2 * b, params['precision_cap_bits']).valid}


def quad_classgroup_check(b, params):
    cg = quad.class_group(8 * b ** 3 + 3)
    return {'quad_h': cg.h, 'quad_structure': str(cg.group)}


def classgroup_check(b, params):
    """ Cl(Z[w]) and whether the ideal a_P of the family point is principal """
    cg = classgrp.class_group(8 * b ** 3 + 3, params['relation_bound'])
    P = family_point(b)
    try:
        ideal = classgrp.point_ideal_class(P, cg).ideal
    except ClassNotFound:
        ideal = classgrp.factor_element(weil_representative(P)).half()
    principal = classgrp.is_principal(ideal, cg, params['principal_bound'])
    return {'h': cg.h, 'class_group': str(cg.group), 'class_group_status': cg.status,
            'family_point_ideal': str(ideal), 'family_point_ideal_status': principal.status}


CHECKS = OrderedDict([
    ('factor', (factor_check, ('m_mod_100', 'twentyfive_divides', 'squared_primes', 'odd_class_candidate'))),
    ('root_number', (root_number_check, ('w', 'parity_prediction', 'w_contributing_primes', 'twisted_w'))),
    ('family_point', (family_point_check, ('family_point', 'family_point_torsion', 'doubling_identity'))),
    ('identities', (identities_check, ('eps_alpha_beta', 'cube_identity', 'printed_root_cube',
                                       'footnote_identity'))),
    ('points', (points_check, ('points_found', 'even_t_points', 'two_rank_bound'))),
    ('certificate', (certificate_check, ('certificate_valid', 'certificate_via', 'certificate_alpha',
                                         'certificate_failures'))),
    ('unit', (unit_check, ('unit_certificate',))),
    ('quad_classgroup', (quad_classgroup_check, ('quad_h', 'quad_structure'))),
    ('classgroup', (classgroup_check, ('h', 'class_group', 'class_group_status', 'family_point_ideal',
                                        'family_point_ideal_status'))),
])

ANNOTATION_COLUMNS = ('annotated_rank', 'annotated_h', 'annotated_odd_h')


def columns_for(checks) -> tuple:
    """ Report columns for the enabled checks, in a fixed order """
    columns = list(BASE_COLUMNS)
    for name, (_, names) in CHECKS.items():
        if name in checks:
            columns += names
    return tuple(columns) + ANNOTATION_COLUMNS + ('errors',)


def run_checks(task) -> dict:
    """ One report row; ``task`` is (b, checks, params) """
    b, checks, params = task
    row = OrderedDict((column, None) for column in columns_for(checks))
    errors = []
    try:
        row.update(base_columns(b, params))
    except (CubiclabError, ValueError, ArithmeticError) as error:
        row['b'] = b
        errors.append('base: %s' % error)
    for name, (check, _) in CHECKS.items():
        if name not in checks:
            continue
        try:
            row.update(check(b, params))
        except (CubiclabError, ValueError, ArithmeticError) as error:
            logger.warning('b = %i, %s: %s', b, name, error)
            errors.append('%s: %s' % (name, error))
    data = annotations()
    row['annotated_rank'] = annotated_rank(b)
    row['annotated_h'] = data['class_number'].get(str(b))
    row['annotated_odd_h'] = b in data['odd_class_number_b']
    row['errors'] = '; '.join(errors)
    return dict(row)
