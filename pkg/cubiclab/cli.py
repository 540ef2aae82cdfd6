""" Command line entry point: ``cubiclab <subcommand> ...``

Exit status 0 on a completed run (findings live in the output), 2 on
configuration or argument errors.
"""
import argparse
import json
import sys

from . import __version__, classgrp, hcf, quad, run_scan, threads_from_environment
from .checks import BASE_COLUMNS, ANNOTATION_COLUMNS, CHECKS
from .config_loader import load_scan_config
from .cubic import CubicField, epsilon_alpha_beta_identity
from .errors import ConfigError, CubiclabError
from .intarith import cubefree_squarefree_profile, fit_polynomial
from .logger import create_scan_logger
from .mordell import doubling_square_identity, family_point, search_points
from .report import emit

CONFIG_ERROR = 2
INPUT_ERROR = 1


def _columns_help() -> str:
    lines = ['TSV columns:', '  always: %s' % ', '.join(BASE_COLUMNS)]
    for name, (_, columns) in CHECKS.items():
        lines.append('  --checks %s: %s' % (name, ', '.join(columns)))
    lines.append('  always: %s (external annotation, not computed), errors' % ', '.join(ANNOTATION_COLUMNS))
    return '\n'.join(lines)


def _m_from(args) -> int:
    if args.m is not None:
        return args.m
    if args.b is not None:
        return 8 * args.b ** 3 + 3
    raise ConfigError('--m/--b', 'one of them is required')


def _write(text: str, out):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, 'w', encoding='utf-8', newline='') as f:
            f.write(text)


def cmd_scan(args) -> int:
    overrides = {'scan': {'b_min': args.b_min, 'b_max': args.b_max, 'checks': args.checks, 'format': args.format},
                 'search': {'t_max': args.search_t_max, 'r_max': args.search_r_max},
                 'classgroup': {'relation_bound': args.relation_bound}}
    loader = load_scan_config(args.config, overrides)
    processes = threads_from_environment()
    parameters = loader.get_scan_parameters()
    scan_logger = create_scan_logger(loader.config, parameters['result_path'], parameters['name'])
    try:
        report = run_scan(loader, processes, scan_logger)
    finally:
        if scan_logger is not None:
            scan_logger.close()
    _write(emit(report, parameters['format']), args.out)
    return 0


def cmd_factor(args) -> int:
    if args.numbers:
        lines = []
        for m in args.numbers:
            profile = cubefree_squarefree_profile(m)
            lines.append('%i: %s%s%s' % (m, profile.factorization, '' if profile.is_cubefree else ' (not cubefree)',
                                         '' if profile.is_squarefree else ' squared: %s'
                                         % ','.join(str(p) for p in profile.squared_primes)))
        _write('\n'.join(lines) + '\n', args.out)
        return 0
    args.checks = 'factor,root_number'
    args.search_t_max = args.search_r_max = args.relation_bound = None
    return cmd_scan(args)


def cmd_points(args) -> int:
    m = _m_from(args)
    t_max = args.search_t_max or 4
    r_max = args.search_r_max or 10 ** 4
    lines = ['x\ty\tt\talpha']
    for P in search_points(m, t_max, r_max, threads_from_environment()):
        lines.append('%s\t%s\t%i\t%s' % (P.x, P.y, P.t, CubicField(m).element(P.r, -P.t ** 2)))
    _write('\n'.join(lines) + '\n', args.out)
    return 0


def cmd_hcf(args) -> int:
    if args.unit is not None:
        _write(hcf.unit_construction(args.unit).to_json() + '\n', args.out)
        return 0
    m = _m_from(args)
    if args.alpha is not None:
        coords = [int(c) for c in args.alpha.split(',')]
        _write(hcf.certify_unramified(CubicField(m).element(*coords), source='command line').to_json() + '\n',
               args.out)
        return 0
    construction = hcf.construct_from_curve(m, args.search_t_max or 20, args.search_r_max or 10 ** 5,
                                            threads_from_environment())
    document = {'m': str(m), 'found': construction.found, 'via': construction.via,
                'point': None if construction.point is None else str(construction.point),
                'reason': construction.reason,
                'certificate': None if construction.certificate is None else construction.certificate.to_dict()}
    _write(json.dumps(document, indent=2, sort_keys=True) + '\n', args.out)
    return 0


def cmd_classgroup(args) -> int:
    m = _m_from(args)
    cg = classgrp.class_group(m, args.relation_bound or classgrp.DEFAULT_RELATION_BOUND, threads_from_environment())
    document = {'m': m, 'h': cg.h, 'structure': str(cg.group), 'status': cg.status,
                'minkowski_bound': str(classgrp.minkowski_bound(m)),
                'factor_base': [P.label for P in cg.factor_base], 'relations': len(cg.relations),
                'last_change': cg.last_change}
    if args.points:
        rows = []
        for P in search_points(m, args.search_t_max or 4, args.search_r_max or 10 ** 4):
            try:
                result = classgrp.point_ideal_class(P, cg)
            except (CubiclabError, ValueError) as error:
                rows.append({'point': str(P), 'error': str(error)})
                continue
            rows.append({'point': str(P), 'alpha': str(result.alpha), 'ideal': str(result.ideal),
                         'class': list(result.class_vector), 'trivial': result.is_trivial})
        document['points'] = rows
    _write(json.dumps(document, indent=2, sort_keys=True) + '\n', args.out)
    return 0


def cmd_identities(args) -> int:
    b_min, b_max = args.b_min or 1, args.b_max or 30
    lines = ['b\teps_alpha_beta\tcube_identity\tfootnote_identity\tdoubling_identity\terrors']
    numerators_x, numerators_y = [], []
    for b in range(b_min, b_max + 1):
        cells, errors = [], []
        for name, identity in (('eps_alpha_beta', epsilon_alpha_beta_identity), ('cube', quad.cube_identity),
                               ('footnote', quad.footnote_cube_identity),
                               ('doubling', lambda b: doubling_square_identity(family_point(b)))):
            try:
                cells.append(str(identity(b).holds))
            except (CubiclabError, ValueError) as error:
                cells.append('')
                errors.append('%s: %s' % (name, error))
        lines.append('%i\t%s\t%s' % (b, '\t'.join(cells), '; '.join(errors)))
        try:
            P = family_point(b)
        except CubiclabError:
            continue
        numerators_x.append((b, P.x.numerator))
        numerators_y.append((b, P.y.numerator))
    prefix = 0
    while prefix < len(numerators_x) and numerators_x[prefix][0] == prefix + 1:
        prefix += 1
    if prefix > 4:
        lines.append('')
        for name, values in (('x', numerators_x), ('y', numerators_y)):
            fit = fit_polynomial([v for _, v in values[:prefix]])
            lines.append('%s numerator fit: %s' % (name, fit.as_poly('b').as_expr()))
    _write('\n'.join(lines) + '\n', args.out)
    return 0


def cmd_quadmap(args) -> int:
    m = _m_from(args)
    points = search_points(m, args.search_t_max or 4, args.search_r_max or 10 ** 4)
    document = {'m': m, 'points': [str(P) for P in points],
                'quadratic': quad.quad_class_homomorphism_log(points, quad.class_group(m))}
    if args.cubic:
        cg = classgrp.class_group(m, args.relation_bound or classgrp.DEFAULT_RELATION_BOUND)
        document['cubic'] = classgrp.point_class_homomorphism_log(points, cg)
    _write(json.dumps(document, indent=2, sort_keys=True, default=str) + '\n', args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--b-min', type=int, help='first b of the range')
    common.add_argument('--b-max', type=int, help='last b of the range')
    common.add_argument('--b', type=int, help='a single b, m = 8b^3 + 3')
    common.add_argument('--m', type=int, help='an arbitrary cubefree m')
    common.add_argument('--search-t-max', type=int, help='largest denominator t searched for points')
    common.add_argument('--search-r-max', type=int, help='largest |r| searched for points')
    common.add_argument('--relation-bound', type=int, help='coordinate bound for class group relations')
    common.add_argument('--format', choices=('tsv', 'json'), help='report format')
    common.add_argument('--out', help='output file, default stdout')

    parser = argparse.ArgumentParser(prog='cubiclab', description='Pure cubic fields Q(cbrt(8b^3 + 3)), the curves '
                                     'y^2 = x^3 - m and their unramified quadratic extensions.',
                                     epilog='CUBICLAB_THREADS sets the number of worker processes.')
    parser.add_argument('--version', action='version', version='cubiclab %s' % __version__)
    sub = parser.add_subparsers(dest='command', required=True)

    scan = sub.add_parser('scan', parents=[common], help='per-b checks over a range of b',
                          epilog=_columns_help(), formatter_class=argparse.RawDescriptionHelpFormatter)
    scan.add_argument('--config', help='JSON configuration file')
    scan.add_argument('--checks', help='comma separated checks: %s' % ', '.join(CHECKS))
    scan.set_defaults(handler=cmd_scan)

    factor = sub.add_parser('factor', parents=[common], help='factorizations of m(b), or of the given numbers')
    factor.add_argument('numbers', nargs='*', type=int)
    factor.add_argument('--config', help='JSON configuration file')
    factor.set_defaults(handler=cmd_factor)

    points = sub.add_parser('points', parents=[common], help='rational points on y^2 = x^3 - m')
    points.set_defaults(handler=cmd_points)

    certificate = sub.add_parser('hcf', parents=[common], help='certify an unramified quadratic extension')
    certificate.add_argument('--alpha', help='x,y,z for alpha = x + y w + z w^2')
    certificate.add_argument('--unit', type=int, metavar='A', help='use the unit of Q(cbrt(A^3 + 3))')
    certificate.set_defaults(handler=cmd_hcf)

    classgroup = sub.add_parser('classgroup', parents=[common], help='class group of Z[cbrt(m)]')
    classgroup.add_argument('--points', action='store_true', help='also the classes of a_P for found points')
    classgroup.set_defaults(handler=cmd_classgroup)

    identities = sub.add_parser('identities', parents=[common], help='family identities over a range of b')
    identities.set_defaults(handler=cmd_identities)

    quadmap = sub.add_parser('quadmap', parents=[common], help='P -> class of b experiment')
    quadmap.add_argument('--cubic', action='store_true', help='also P -> class of a_P in Z[cbrt(m)]')
    quadmap.set_defaults(handler=cmd_quadmap)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except (ConfigError, FileNotFoundError) as error:
        sys.stderr.write('cubiclab: %s\n' % error)
        return CONFIG_ERROR
    except (CubiclabError, ValueError) as error:
        sys.stderr.write('cubiclab: %s\n' % error)
        return INPUT_ERROR


if __name__ == '__main__':
    sys.exit(main())
