import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional

import mpmath
from loguru import logger

from . import constants
from .accessorysolver import solve
from .blockcatalog import BLOCK_IDS, check_duals, get_block
from .casecatalog import CASE_IDS, export_registry, get_case
from .comparator import verify, verify_all
from .contourcheck import NumConfig, contour_Vminus1, convergence_order
from .exceptions import CatalogMiss, ConjectureMismatch, HeunWKBError
from .expansioncase import ExpansionCase
from .rationalsolver import check_oracle, rational_solve
from .symmetry import check_symmetries


def main(argv: Optional[list[str]] = None) -> int:
    """Entrypoint for the program"""

    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return constants.EXIT_USAGE if e.code else constants.EXIT_OK

    _setup_logs(args.verbose, args.log_to_file)

    try:
        return _COMMANDS[args.command](args)
    except (CatalogMiss, ValueError) as e:
        logger.error(str(e))
        return constants.EXIT_USAGE
    except ConjectureMismatch as e:
        logger.error(str(e))
        return constants.EXIT_MISMATCH
    except HeunWKBError as e:
        logger.error(f'{e.__class__.__name__}: {e}')
        return constants.EXIT_INVARIANT


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser()
    parser.prog = 'heunwkb'
    parser.description = 'Accessory parameters of the confluent Heun equations from exact WKB, ' \
                         'checked against classical conformal blocks'
    parser.add_argument('--verbose', action='store_true', help='enable more detailed logs '
                                                               '(useful for debugging)')
    parser.add_argument('--log-to-file', type=Path, help='redirect logs to file LOG_FILE', metavar='LOG_FILE')

    output = argparse.ArgumentParser(add_help=False)
    output.add_argument('--format', choices=('json', 'text', 'latex'), default='json',
                        help='output format (defaults to json)')
    output.add_argument('--output', type=Path, help='write the result to OUTPUT instead of stdout')

    case = argparse.ArgumentParser(add_help=False)
    case.add_argument('--case', required=True, help=f'expansion case, one of {", ".join(CASE_IDS)}')
    case.add_argument('--variant', help='alternative leading branch of the case')

    subparsers = parser.add_subparsers(help='command to run', dest='command', required=True)

    compute_parser = subparsers.add_parser('compute', parents=[case, output], help='solve the Voros conditions')
    compute_parser.add_argument('--k', type=int, default=constants.DEFAULT_K,
                                help=f'last hbar^(2k) order (defaults to {constants.DEFAULT_K})')
    compute_parser.add_argument('--l', type=int, default=constants.DEFAULT_L,
                                help=f'last Lambda order (defaults to {constants.DEFAULT_L})')
    compute_parser.add_argument('--check', action='store_true',
                                help='compare the table with the hbar-exact columns')

    verify_parser = subparsers.add_parser('verify', parents=[case, output],
                                          help='compare the accessory parameter with its conformal block')
    verify_parser.add_argument('--through', type=Fraction, help='last t-exponent to check '
                                                                '(defaults to the catalogued order)')

    verify_all_parser = subparsers.add_parser('verify-all', parents=[output], help='verify every case')
    verify_all_parser.add_argument('--jobs', type=int, default=1, help='worker processes (defaults to 1)')

    blocks_parser = subparsers.add_parser('blocks', parents=[output], help='dump classical conformal blocks')
    blocks_parser.add_argument('--block', action='append', choices=BLOCK_IDS,
                               help='block to dump (repeatable, defaults to all)')
    blocks_parser.add_argument('--check', action='store_true',
                               help='rederive displayed blocks and check the dual pairs')

    numcheck_parser = subparsers.add_parser('numcheck', parents=[case, output],
                                            help='numeric contour integral of the leading WKB form')
    numcheck_parser.add_argument('--set', action='append', default=[], metavar='NAME=VALUE',
                                 help='exact value of a parameter, e.g. nu=1/3 (repeatable)')
    numcheck_parser.add_argument('--lam', type=Fraction, default=Fraction(0), help='value of Lambda')
    numcheck_parser.add_argument('--g', help='leading accessory value, overriding the solved series')
    numcheck_parser.add_argument('--levels', type=int,
                                 help='Lambda truncation of the solved series (defaults to the smallest order '
                                      'whose truncation error stays below the tolerance)')
    numcheck_parser.add_argument('--points', type=int, default=constants.DEFAULT_QUADRATURE_POINTS,
                                 help='quadrature nodes')
    numcheck_parser.add_argument('--radius', type=Fraction, help='contour radius (defaults to automatic)')
    numcheck_parser.add_argument('--precision', type=int,
                                 help=f'decimal digits (defaults to ${constants.PRECISION_ENV_VAR} '
                                      f'or {constants.DEFAULT_PRECISION})')
    numcheck_parser.add_argument('--convergence', type=Fraction, nargs='+', metavar='LAM',
                                 help='instead of one period, fit the order of the truncation error over these '
                                      'Lambda values')

    subparsers.add_parser('registry', help='export the case registry as JSON').add_argument(
        '--output', type=Path, help='write the registry to OUTPUT instead of stdout')

    return parser


def _setup_logs(verbose: bool, log_file: Optional[Path] = None):
    logger.remove()
    log_level = 'DEBUG' if verbose else 'INFO'
    log_file = str(log_file) if log_file else sys.stderr
    logger.add(log_file, level=log_level)


def _emit(args: argparse.Namespace, payload: dict[str, object], text: str, latex: Optional[str] = None) -> None:
    fmt = getattr(args, 'format', 'json')
    if fmt == 'json':
        out = json.dumps({'schema': constants.SCHEMA_VERSION, **payload}, indent=2, ensure_ascii=False)
    elif fmt == 'latex':
        if latex is None:
            raise ValueError(f'{args.command} has no LaTeX output')
        out = latex
    else:
        out = text
    if args.output:
        args.output.write_text(out + '\n', encoding='utf-8')
        logger.info(f'Wrote {args.output}')
    else:
        print(out)


def _run_compute(args: argparse.Namespace) -> int:
    case = get_case(args.case, args.variant)
    logger.info(f'Starting compute for {case}')
    expansion = solve(case, args.k, args.l)
    if args.check:
        valuations = check_oracle(rational_solve(case, args.l), expansion)
        logger.info(f'hbar-exact columns agree with the table (differences start at {valuations or "none"})')
    _emit(args, expansion.to_dict(), str(expansion), expansion.to_latex())
    return constants.EXIT_OK


def _report_text(reports) -> str:
    lines = []
    for report in reports:
        line = f'{report.case_id:12} {report.status.value:4} {report.relation} through t^({report.reached})'
        if report.first_mismatch is not None:
            m = report.first_mismatch
            line += f'; first mismatch at t^({m.exponent}): block {m.expected}, accessory {m.actual}'
        lines.append(line)
    return '\n'.join(lines)


def _run_verify(args: argparse.Namespace) -> int:
    case = get_case(args.case, args.variant)
    logger.info(f'Starting verify for {case}')
    reports = verify(case, args.through)
    payload = reports[0].to_dict() if len(reports) == 1 else {'reports': [r.to_dict() for r in reports]}
    _emit(args, payload, _report_text(reports))
    return constants.EXIT_OK if all(r.passed for r in reports) else constants.EXIT_MISMATCH


def _run_verify_all(args: argparse.Namespace) -> int:
    logger.info(f'Starting verify-all over {len(CASE_IDS)} cases')
    symmetries = check_symmetries('VI')
    reports = verify_all(jobs=args.jobs)
    failed = [r for r in reports if not r.passed]
    logger.info(f'{len(reports) - len(failed)} of {len(reports)} relations pass')
    payload = {'symmetries': symmetries, 'reports': [r.to_dict() for r in reports]}
    _emit(args, payload, _report_text(reports))
    return constants.EXIT_MISMATCH if failed else constants.EXIT_OK


def _run_blocks(args: argparse.Namespace) -> int:
    block_ids = args.block or list(BLOCK_IDS)
    logger.info(f'Starting blocks for {len(block_ids)} blocks')
    entries = [get_block(block_id) for block_id in block_ids]
    checks = {}
    if args.check:
        for entry in entries:
            checks[entry.block_id] = [str(e) for e in entry.check_printed()]
        checks.update({pair: [str(e) for e in exponents] for pair, exponents in check_duals().items()})
    payload = {'blocks': [entry.to_dict() for entry in entries]}
    if args.check:
        payload['checked'] = checks
    text = '\n'.join(f'{entry.block_id}: W = {entry.series}' for entry in entries)
    latex = '\n'.join(rf'W_{{\mathrm{{{entry.block_id}}}}} = {entry.series.to_latex()}' for entry in entries)
    _emit(args, payload, text, latex)
    return constants.EXIT_OK


def _parse_assignment(items: list[str]) -> dict[str, Fraction]:
    assignment = {}
    for item in items:
        name, sep, value = item.partition('=')
        if not sep or not name:
            raise ValueError(f'expected NAME=VALUE, got {item!r}')
        assignment[name.strip()] = Fraction(value.strip())
    return assignment


def _levels_for(lam: Fraction, digits: int) -> int:
    levels = constants.DEFAULT_L
    while 0 < abs(lam) < 1 and abs(lam) ** (levels + 1) > Fraction(1, 10 ** (digits + 2)):
        levels += 1
    return levels


def _run_numcheck(args: argparse.Namespace) -> int:
    case = get_case(args.case, args.variant)
    logger.info(f'Starting numcheck for {case}')
    options = {'precision': args.precision} if args.precision is not None else {}
    if args.convergence:
        return _run_convergence(args, case, options)
    digits = constants.CLOSED_FORM_TOLERANCE_DIGITS if args.lam == 0 else constants.NUMERIC_TOLERANCE_DIGITS
    levels = args.levels if args.levels is not None else _levels_for(args.lam, digits)
    cfg = NumConfig(points=args.points, radius=args.radius, assignment=_parse_assignment(args.set),
                    lam=args.lam, levels=levels, **options)
    result = contour_Vminus1(case, cfg, args.g)
    with mpmath.workdps(cfg.precision):
        passed = result.relative_error <= mpmath.mpf(10) ** -digits
    payload = {**result.to_dict(), 'tolerance': f'1e-{digits}', 'status': 'pass' if passed else 'fail'}
    text = (f'{case.case_id}: V = {mpmath.nstr(result.value, 20)}, expected {mpmath.nstr(result.expected, 20)}, '
            f'relative error {mpmath.nstr(result.relative_error, 5)}')
    _emit(args, payload, text)
    return constants.EXIT_OK if passed else constants.EXIT_MISMATCH


def _run_convergence(args: argparse.Namespace, case: ExpansionCase, options: dict[str, int]) -> int:
    levels = args.levels if args.levels is not None else constants.DEFAULT_L
    cfg = NumConfig(points=args.points, radius=args.radius, assignment=_parse_assignment(args.set),
                    levels=levels, **options)
    slopes = convergence_order(case, cfg, sorted(args.convergence, reverse=True))
    required = levels + 1 - constants.CONVERGENCE_SLACK
    with mpmath.workdps(cfg.precision):
        passed = bool(slopes) and all(slope >= mpmath.mpf(required.numerator) / required.denominator
                                      for slope in slopes)
    payload = {
        'case': case.case_id,
        'levels': levels,
        'lambdas': [str(lam) for lam in sorted(args.convergence, reverse=True)],
        'slopes': [mpmath.nstr(slope, 8) for slope in slopes],
        'required': str(required),
        'status': 'pass' if passed else 'fail',
    }
    text = f'{case.case_id}: observed orders {", ".join(payload["slopes"])}, required {required}'
    _emit(args, payload, text)
    return constants.EXIT_OK if passed else constants.EXIT_MISMATCH


def _run_registry(args: argparse.Namespace) -> int:
    logger.info('Starting registry export')
    registry = export_registry()
    if args.output:
        args.output.write_text(registry + '\n', encoding='utf-8')
    else:
        print(registry)
    return constants.EXIT_OK


_COMMANDS = {
    'compute': _run_compute,
    'verify': _run_verify,
    'verify-all': _run_verify_all,
    'blocks': _run_blocks,
    'numcheck': _run_numcheck,
    'registry': _run_registry,
}


if __name__ == '__main__':
    sys.exit(main())
