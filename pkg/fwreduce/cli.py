"""FWReduce: two-body Foldy-Wouthuysen reduction with a matrix oracle."""

import argparse
import fwreduce as fw
import json
import logging
import sys


logger = logging.getLogger(__name__)
TARGETS = ('eq3_oe', 'eq3_eo', 'eq3_oo', 'eq4', 'eq6', 'eq7', 'eq8', 'eq9')


def _options(arg):
    """Translate setting flags into configuration options."""
    flags = {
        'reduction:sequence': getattr(arg, 'sequence', None),
        'reduction:trunc_order': getattr(arg, 'trunc', None),
        'reduction:cleanup': getattr(arg, 'cleanup', None),
        'numcheck:seed': getattr(arg, 'seed', None),
        'numcheck:aux_dim': getattr(arg, 'aux_dim', None),
        'numcheck:c_values': getattr(arg, 'c_values', None),
    }
    flags = [f'{k}={v}' for k, v in flags.items() if v is not None]
    return [*arg.set, *flags]


def _problem(arg):
    """Load configuration and problem, then apply command-line options."""
    conf = fw.config.load(*arg.config)
    problem = fw.problem.load_problem(arg.problem, conf)
    fw.config.argparse(problem.config, *_options(arg))
    return problem


def _save(data, path):
    import katy
    katy.io.save(data, path)


def _reduce(problem):
    if not any(beta[1] for beta, _, _ in problem.hamiltonian.terms):
        trunc = problem.reduction.trunc_order
        return fw.engine.one_body_trace(problem.hamiltonian, trunc)
    return fw.engine.reduce(problem.hamiltonian, problem.reduction)


def candidate(trace, id, /):
    """Part of a reduction trace that a reference describes.

    Parameters
    ----------
    trace : ReductionTrace
        Reduction.
    id : str
        Reference identifier from `TARGETS`.

    Returns
    -------
    tuple of Expression
        Candidate and reference, truncated at the trace order.

    """
    if id not in TARGETS:
        raise ValueError(f'reference "{id}" not in {TARGETS}')

    H = trace.hamiltonian
    table = H.table
    trunc = trace.config.trunc_order
    ref = fw.reference.reference_expression(id, table)

    if id.startswith('eq3_'):
        kind = id.removeprefix('eq3_')
        steps = [s for s in trace.steps if s.round == 0 and s.kind == kind]
        if not steps:
            raise ValueError(f'trace has no first-round {kind} generator')
        out = steps[0].generator
    elif id == 'eq9':
        out = fw.engine.cleanup_generator(trace)
    elif id == 'eq8':
        eq6 = fw.reference.reference_expression('eq6', table)
        out = H - fw.algebra.truncate(eq6, trunc)
    else:
        out = H

    return fw.algebra.truncate(out, trunc), fw.algebra.truncate(ref, trunc)


def run_reduce(arg):
    """Reduce a problem and print the transformed Hamiltonian."""
    problem = _problem(arg)
    trace = _reduce(problem)
    emit = arg.emit or problem.config['render']['emit']

    if arg.generators:
        for s in trace.steps:
            print(f'# round {s.round} {s.kind}')
            print(fw.render.render(s.generator, emit))
        print('# transformed Hamiltonian')
    print(fw.render.render(trace.hamiltonian, emit))

    if arg.out:
        data = trace.to_json()
        data['table'] = fw.golden.table_to_json(problem.table)
        _save(data, arg.out)
        logger.info('saved trace to "%s"', arg.out)
    return 0


def run_verify(arg):
    """Compare a reduction with a reference expression."""
    problem = _problem(arg)
    trace = _reduce(problem)
    out, ref = candidate(trace, arg.against)
    report = fw.reference.diff_report(out, ref)

    emit = arg.emit or problem.config['render']['emit']
    print(fw.render.render(report, emit))
    return 0 if report.is_empty else 1


def run_numcheck(arg):
    """Check a reduction numerically with random matrices."""
    problem = _problem(arg)
    settings = problem.numcheck
    if arg.fault:
        settings['fault'] = True

    trace = _reduce(problem)
    config = fw.oracle.OracleConfig.from_dict(settings)
    report = fw.oracle.order_scaling(problem.hamiltonian, trace, config)

    for c, r in zip(report.c_values, report.residuals, strict=True):
        print(f'c = {c}: residual {r:.3e}')
    print(f'slope {report.slope}', 'pass' if report.passed else 'FAIL')

    if arg.out:
        _save(report.to_json(), arg.out)
        logger.info('saved report to "%s"', arg.out)
    return 0 if report.passed else 1


def run_references(arg):
    """Print references, or write or check their golden files.

    With JSON output, the references form one object keyed by identifier.

    """
    conf = fw.config.load(*arg.config)
    fw.config.argparse(conf, *arg.set)
    ids = arg.ids or fw.reference.IDS
    emit = arg.emit or 'text'

    status = 0
    out = {}
    for id in ids:
        if arg.write:
            print(fw.golden.save(conf, id))
        elif arg.check:
            report = fw.golden.check(conf, id)
            print(f'{id}:', 'ok' if report.is_empty else 'DIFFERS')
            status |= not report.is_empty
        elif emit == 'json':
            expr = fw.reference.reference_expression(id)
            out[id] = json.loads(fw.render.render(expr, emit))
        else:
            expr = fw.reference.reference_expression(id)
            print(f'# {id}')
            print(fw.render.render(expr, emit))

    if out:
        print(json.dumps(out, indent=1))
    return int(status)


def main(argv=None):
    """Entry point for command-line execution.

    Parameters
    ----------
    argv : list of str, optional
        Command-line arguments. If None, defaults to `sys.argv[1:]`.

    """
    p = argparse.ArgumentParser(
        prog='fwreduce',
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
        description='''
            FWReduce removes the odd parts of a two-body Dirac Hamiltonian
            order by order in 1/c, with exact coefficients rational in the
            masses, and checks the result against published expressions or
            numerically with random matrices.
        ''',
    )
    # ruff: noqa: E501
    p.add_argument('-V', version=fw.__version__, action='version', help='print version and exit')
    sub = p.add_subparsers(dest='command')

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('-c', dest='config', action='append', default=[], help='configuration JSON file, repeatable')
    common.add_argument('-s', dest='set', action='append', default=[], help='set option key[:sub]=value, repeatable')
    common.add_argument('-e', '--emit', dest='emit', choices=('text', 'latex', 'json'), help='output format')
    common.add_argument('-v', dest='verbose', default=0, action='count', help='repeat to increase verbosity')

    reduction = argparse.ArgumentParser(add_help=False)
    reduction.add_argument('--sequence', help='generator order, like oe,eo,oo')
    reduction.add_argument('--trunc', type=int, help='lowest effective order kept')
    reduction.add_argument('--cleanup', action='store_const', const='true', help='apply the even-even cleanup')

    x = sub.add_parser('reduce', parents=[common, reduction], help='reduce a problem file')
    x.add_argument('problem', help='problem file')
    x.add_argument('-g', dest='generators', action='store_true', help='also print generators')
    x.add_argument('-o', '--out', dest='out', help='output trace JSON file')
    x.set_defaults(run=run_reduce)

    x = sub.add_parser('verify', parents=[common, reduction], help='compare with a reference')
    x.add_argument('problem', help='problem file')
    x.add_argument('--against', required=True, choices=TARGETS, help='reference identifier')
    x.set_defaults(run=run_verify)

    x = sub.add_parser('numcheck', parents=[common, reduction], help='check numerically')
    x.add_argument('problem', help='problem file')
    x.add_argument('-o', '--out', dest='out', help='output report JSON file')
    x.add_argument('--seed', type=int, help='random seed')
    x.add_argument('--aux-dim', dest='aux_dim', type=int, help='auxiliary dimension per particle')
    x.add_argument('--c', '--c-values', dest='c_values', help='speeds of light, like 8,16,32,64')
    x.add_argument('--fault', action='store_true', help='perturb the result, expecting failure')
    x.set_defaults(run=run_numcheck)

    x = sub.add_parser('references', parents=[common], help='print references')
    x.add_argument('ids', metavar='id', nargs='*', help='reference identifiers')
    x.add_argument('--write', action='store_true', help='write golden files')
    x.add_argument('--check', action='store_true', help='compare golden files')
    x.set_defaults(run=run_references)
    # ruff: enable: E501

    if argv is None:
        argv = sys.argv[1:]

    # Early exit.
    if len(argv) == 0:
        p.print_usage()
        exit(0)

    arg = p.parse_args(argv)
    if arg.command is None:
        p.print_usage()
        exit(0)

    # Verbosity.
    v = {0: 'WARNING', 1: 'INFO'}.get(arg.verbose, 'DEBUG')
    logging.basicConfig(format='%(levelname)s: %(message)s', level=v)

    try:
        code = arg.run(arg)
    except (OSError, ValueError) as e:
        print(f'ERROR: {e}', file=sys.stderr)
        exit(2)
    except (ArithmeticError, RuntimeError) as e:
        print(f'ERROR: {e}', file=sys.stderr)
        exit(3)

    exit(code)


if __name__ == '__main__':
    main()
