#
# (c) 2026, pyCMono contributors
#
# Created: 16.10.2026
# Updated: 19.10.2026
#
# License: Apache 2.0
#
"""
The `cmono` command line.  Every subcommand reads its inputs as JSON specs (inline or `@path`), writes JSON with
sorted keys (rationals as `"p/q"` strings, floats in their shortest round-trip form) or, for densities, CSV.

Exit codes: 0 on success, 1 if the input was not acceptable, 2 if a numerical check failed.
"""
import argparse
import concurrent.futures
import json
import logging
import os
import sys

import mpmath
from sympy import QQ

from . import cumulants, limits, mixed_moments, pair_convolutions, semigroups
from .analytic_compiler import AnalyticMap
from .config import settings
from .errors import CMonoError, MalformedSpec, NumericalError, ValidationError
from .measures import AtomicMeasure, MomentSeq, dump_measure, format_rational, moments_of, parse_measure
from .transforms import FiniteMeasure


LOGGER = logging.getLogger(__name__)

BERNOULLI = {'type': 'atomic', 'atoms': [['-1', '1/2'], ['1', '1/2']]}


def _load(text: str, what: str):
    """A JSON value given inline or as `@path`."""
    if text is None:
        return None
    if text.startswith('@'):
        try:
            with open(text[1:]) as f:
                text = f.read()
        except OSError as e:
            raise MalformedSpec(f"cannot read {what} from {text[1:]}: {e.strerror}")
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedSpec(f"invalid JSON in {what}: {e}")


def _jsonable(value):
    if isinstance(value, (bool, str, int, float)) or value is None:
        return value
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (MomentSeq, cumulants.CumulantSeq)):
        return [format_rational(v) for v in value]
    if isinstance(value, mpmath.mpf):
        return float(value)
    try:
        if QQ.of_type(value):
            return format_rational(value)
    except TypeError:
        pass
    raise TypeError(f"not serializable: {value!r}")


def _dump_result(mu):
    if isinstance(mu, (AtomicMeasure, MomentSeq)):
        return dump_measure(mu)
    if isinstance(mu, FiniteMeasure):
        if mu.exact:
            return dump_measure(mu.to_atomic())
        return {'type': 'atomic-float', 'atoms': [[float(x), float(w)] for x, w in mu.atoms]}
    return dump_measure(mu)


def _emit(args, text: str):
    if args.output is None:
        sys.stdout.write(text)
    else:
        with open(args.output, 'w') as f:
            f.write(text)


def _emit_json(args, value):
    _emit(args, json.dumps(_jsonable(value), sort_keys=True, indent=2) + '\n')


def _measure(text: str, what: str):
    return parse_measure(_load(text, what))


def _transform(text: str):
    if text is None:
        return None
    return pair_convolutions.parse_transform(_load(text, 'transform spec'))


#
# Subcommands
#

def cmd_cumulants(args):
    order = args.order
    m_mu = moments_of(_measure(args.mu, 'mu'), order)
    m_nu = m_mu if args.nu is None else moments_of(_measure(args.nu, 'nu'), order)
    if args.flavor == 'cmonotone':
        result = cumulants.cmonotone_cumulants(m_mu, m_nu, order)
    elif args.flavor == 'monotone':
        result = cumulants.monotone_cumulants(m_mu, order)
    elif args.flavor == 'boolean':
        result = cumulants.boolean_cumulants(m_mu, order)
    elif args.flavor == 'free':
        result = cumulants.free_cumulants(m_mu, order)
    else:
        result = cumulants.free_and_cfree_cumulants(m_mu, m_nu, order)[1]
    _emit_json(args, list(result))
    return 0


def cmd_convolve(args):
    mu = _measure(args.mu, 'mu')
    nu = _measure(args.nu, 'nu')
    order = args.order
    if args.op in ('cmono', 'cfree'):
        second = (mu, nu) if args.mu2 is None else (_measure(args.mu2, 'mu2'), _measure(args.nu2 or args.mu2, 'nu2'))
        if args.op == 'cmono':
            first_result, second_result = pair_convolutions.cmonotone_convolve((mu, nu), second, order)
        else:
            first_result, second_result = pair_convolutions.cfree_convolve((mu, nu), second, order)
        _emit_json(args, {'first': _dump_result(first_result), 'second': _dump_result(second_result)})
        return 0
    if args.op == 'mono':
        result = pair_convolutions.monotone_convolve(mu, nu, order)
    elif args.op == 'bool':
        result = pair_convolutions.boolean_convolve(mu, nu, order)
    elif args.op == 'ortho':
        result = pair_convolutions.orthogonal_convolve(mu, nu, order)
    else:
        transform = _transform(args.transform)
        if transform is None:
            raise MalformedSpec("the deformed convolution needs --transform")
        result = pair_convolutions.deformed_convolve(transform, mu, nu, order)
    _emit_json(args, _dump_result(result))
    return 0


def _tables(spec):
    if isinstance(spec, dict):
        spec = [dict(value, index=int(key)) for key, value in spec.items()]
    if not isinstance(spec, list):
        raise MalformedSpec("the tables must be a JSON object or a list of {index, phi, psi} objects")
    try:
        return [mixed_moments.AlgebraSpec(int(t['index']), t['phi'], t.get('psi')) for t in
                sorted(spec, key=lambda t: int(t['index']))]
    except (KeyError, TypeError, ValueError) as e:
        raise MalformedSpec(f"malformed algebra table: {e}")


def cmd_mixedmoment(args):
    family = _tables(_load(args.tables, 'tables'))
    phi, psi = mixed_moments.eval_pair(args.word, family, fold=args.fold, strategy=args.strategy)
    _emit_json(args, {'phi': phi, 'psi': psi})
    return 0


def cmd_semigroup(args):
    A1 = semigroups.parse_field(_load(args.a1, 'a1'))
    A2 = semigroups.parse_field(_load(args.a2, 'a2'))
    state = semigroups.integrate_flow(A1, A2, args.t)
    result = {
        't': args.t,
        'points': [{'z': [z.real, z.imag], 'H': [h.real, h.imag], 'F': [f.real, f.imag]}
                   for z, h, f in zip(state.grid, state.H, state.F)],
    }
    code = 0
    if args.check_law:
        report = semigroups.verify_semigroup_law(A1, A2, args.s, args.t)
        result['law'] = {'s': report.s, 't': report.t, 'f_residual': report.f_residual,
                         'h_residual': report.h_residual, 'passed': report.passed}
        code = 0 if report.passed else 2
    _emit_json(args, result)
    return code


def cmd_idcheck(args):
    if args.order % 2 != 0:
        raise MalformedSpec("--order must be even (2K)")
    m_mu = moments_of(_measure(args.mu, 'mu'), args.order)
    m_nu = m_mu if args.nu is None else moments_of(_measure(args.nu, 'nu'), args.order)
    r = cumulants.cmonotone_cumulants(m_mu, m_nu, args.order)
    verdict = semigroups.is_infinitely_divisible(r.values, r.single, args.order // 2)
    _emit_json(args, {'divisible': verdict.divisible, 'min_eig': verdict.min_eig, 'K': verdict.order,
                      'label': verdict.label})
    return 0


def _iterate(mode, mu, nu, transform, N, order, lam, rho):
    if mode == 'clt':
        return limits.clt_iterate(mu, transform, N, order, nu=nu)
    return limits.poisson_iterate(lam, transform, N, order, rho=rho)


def cmd_limit(args):
    transform = _transform(args.transform)
    order = args.order
    if args.mode == 'clt':
        mu = _measure(args.mu or json.dumps(BERNOULLI), 'mu')
        nu = None if args.nu is None else _measure(args.nu, 'nu')
        m_mu = moments_of(mu, order)
        m_nu = m_mu if nu is None else moments_of(nu, order)
        law = limits.central_limit_law(transform, m_mu.variance, m_nu.variance)
    else:
        mu = nu = None
        law = limits.poisson_limit_law(transform, args.lam, args.rho)
    reference = limits.limit_law_moments(law, order)
    jobs = [(args.mode, mu, nu, transform, N, order, args.lam, args.rho) for N in args.N]
    if settings.threads > 1 and len(jobs) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=settings.threads) as pool:
            iterates = list(pool.map(_iterate, *zip(*jobs)))
    else:
        iterates = [_iterate(*job) for job in jobs]
    runs = []
    for N, moments in zip(args.N, iterates):
        runs.append({'N': N, 'moments': moments, 'abs_errors': limits.moment_errors(moments, reference)})
    result = {'law': repr(law), 'reference': reference, 'runs': runs}
    if len(runs) == 1:
        result['moments'] = runs[0]['moments']
        result['abs_errors'] = runs[0]['abs_errors']
    elif len(runs) > 1:
        last = order if order % 2 == 0 else order - 1
        errors = [run['abs_errors'][last - 1] for run in runs]
        if all(e > 0 for e in errors):
            result['convergence_order'] = limits.convergence_order(args.N, errors)
    _emit_json(args, result)
    return 0


def _grid(text: str):
    try:
        a, b, n = text.split(':')
        a, b, n = float(a), float(b), int(n)
    except ValueError:
        raise MalformedSpec(f"a grid is given as a:b:n, not {text!r}")
    if n < 2 or not a < b:
        raise MalformedSpec(f"bad grid {text!r}")
    return [a + (b - a) * k / (n - 1) for k in range(n)]


def cmd_density(args):
    law = limits.parse_law(_load(args.law, 'law spec'))
    xs = _grid(args.grid) if args.grid is not None else _grid(f"-3:3:{settings.density_points}")
    table = limits.limit_law_density(law, xs)
    lines = [f"# law: {law!r}"]
    lines.extend(f"# atom: {x!r},{w!r}" for x, w in table.atoms)
    lines.append(f"# mass: {table.mass!r}")
    lines.append("x,density")
    lines.extend(f"{x!r},{v!r}" for x, v in zip(table.xs, table.values))
    _emit(args, '\n'.join(lines) + '\n')
    return 0 if table.passed else 2


def _selftest_checks():
    bernoulli = parse_measure(BERNOULLI)
    m = moments_of(bernoulli, 4)
    delta0 = MomentSeq.of(0, 0, 0, 0)

    def monotone_table():
        return cumulants.monotone_cumulants(m) == (0, 1, 0, QQ(-1, 2))

    def boolean_reduction():
        return cumulants.cmonotone_cumulants(m, delta0) == (0, 1, 0, 0)

    def additivity():
        pair = (MomentSeq.of(1, 3, 7, 19), MomentSeq.of(0, 2, 1, 9))
        r = cumulants.cmonotone_cumulants(*pair)
        r3 = cumulants.cmonotone_cumulants(*pair_convolutions.cmonotone_power(pair, 3, 4))
        return r3.values == tuple(3 * v for v in r.values)

    def arcsine_flow():
        field = semigroups.arcsine_field()
        state = semigroups.integrate_flow(field, field, 1.0)
        exact = AnalyticMap("sqrt(z**2 - 2)")
        return max(abs(complex(f) - complex(exact(z))) for z, f in zip(state.grid, state.F)) < 1e-9

    def bernoulli_rejected():
        r = cumulants.monotone_cumulants(m)
        return not semigroups.is_infinitely_divisible(r.values, r.single, 2).divisible

    def associativity():
        specs = [mixed_moments.AlgebraSpec(i, [QQ(i), QQ(i + 1), QQ(2), QQ(5)], [QQ(1), QQ(2), QQ(3), QQ(4)])
                 for i in (1, 2, 3)]
        return mixed_moments.check_product_associativity(specs, max_length=4).passed

    def v_algebra():
        v = pair_convolutions.Vtua(2, 3, 5)
        return pair_convolutions.transform_algebra(v, pair_convolutions.invert(v)) == pair_convolutions.Identity()

    return [('monotone_table', monotone_table), ('boolean_reduction', boolean_reduction),
            ('additivity', additivity), ('arcsine_flow', arcsine_flow), ('bernoulli_rejected', bernoulli_rejected),
            ('associativity', associativity), ('v_algebra', v_algebra)]


def cmd_selftest(args):
    results = {}
    for name, check in _selftest_checks():
        try:
            results[name] = bool(check())
        except CMonoError as e:
            LOGGER.error("selftest %s raised %s: %s", name, type(e).__name__, e)
            results[name] = False
        LOGGER.info("selftest %s: %s", name, 'ok' if results[name] else 'FAIL')
    passed = all(results.values())
    _emit_json(args, {'checks': results, 'passed': passed})
    return 0 if passed else 2


#
# Parser
#

def build_parser():
    parser = argparse.ArgumentParser(prog='cmono', description="c-monotone probability toolkit.")
    parser.add_argument('--log-level', default=os.environ.get('CMONO_LOG_LEVEL', 'WARNING'),
                        help="logging level (default: $CMONO_LOG_LEVEL or WARNING)")
    parser.add_argument('--output', '-o', default=None, help="write the result to this file instead of stdout")
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('cumulants', help="cumulants of a measure or a pair")
    p.add_argument('--flavor', choices=('cmonotone', 'monotone', 'boolean', 'free', 'cfree'), default='cmonotone')
    p.add_argument('--mu', required=True, help="measure spec (JSON or @path)")
    p.add_argument('--nu', default=None, help="measure spec of the second component (default: mu)")
    p.add_argument('--order', type=int, default=settings.series_order)
    p.set_defaults(func=cmd_cumulants)

    p = sub.add_parser('convolve', help="convolutions of measures and of pairs")
    p.add_argument('--op', choices=('mono', 'bool', 'ortho', 'cmono', 'cfree', 'deformed'), required=True)
    p.add_argument('--mu', required=True)
    p.add_argument('--nu', required=True)
    p.add_argument('--mu2', default=None, help="first component of the second pair (default: the first pair)")
    p.add_argument('--nu2', default=None)
    p.add_argument('--transform', default=None, help="transform spec for --op deformed")
    p.add_argument('--order', type=int, default=None, help="use the moment track with this order")
    p.set_defaults(func=cmd_convolve)

    p = sub.add_parser('mixedmoment', help="phi and psi of a word in the c-monotone product")
    p.add_argument('--word', required=True, help='e.g. "1^2 2^1 1^1"')
    p.add_argument('--tables', required=True, help="algebra tables (JSON or @path)")
    p.add_argument('--fold', choices=('left', 'right'), default='left')
    p.add_argument('--strategy', choices=('left', 'right'), default='left')
    p.set_defaults(func=cmd_mixedmoment)

    p = sub.add_parser('semigroup', help="integrate the flow of a pair of fields")
    p.add_argument('--a1', required=True, help="field spec of the first component")
    p.add_argument('--a2', required=True, help="field spec of the second component")
    p.add_argument('--t', type=float, default=1.0)
    p.add_argument('--s', type=float, default=0.5, help="the other time for --check-law")
    p.add_argument('--check-law', action='store_true')
    p.set_defaults(func=cmd_semigroup)

    p = sub.add_parser('idcheck', help="Hankel test for infinite divisibility")
    p.add_argument('--mu', required=True)
    p.add_argument('--nu', default=None)
    p.add_argument('--order', type=int, default=4, help="cumulant order 2K")
    p.set_defaults(func=cmd_idcheck)

    p = sub.add_parser('limit', help="central and Poisson limit iterates against their limit laws")
    p.add_argument('--mode', choices=('clt', 'poisson'), required=True)
    p.add_argument('--transform', default=None, help="transform spec (default: the pair convolution)")
    p.add_argument('--mu', default=None, help="input law for --mode clt (default: Bernoulli)")
    p.add_argument('--nu', default=None)
    p.add_argument('--lam', default='1')
    p.add_argument('--rho', default=None)
    p.add_argument('--N', type=int, nargs='+', default=[512])
    p.add_argument('--order', type=int, default=settings.series_order)
    p.set_defaults(func=cmd_limit)

    p = sub.add_parser('density', help="density table and atoms of a limit law, as CSV")
    p.add_argument('--law', required=True, help='law spec, e.g. {"kind": "deformed_clt_0a", "a": "1"}')
    p.add_argument('--grid', default=None, help="a:b:n")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser('selftest', help="run a compact acceptance pass")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=getattr(logging, str(args.log_level).upper(), logging.WARNING),
                        format='%(levelname)s %(name)s: %(message)s')
    try:
        return args.func(args)
    except ValidationError as e:
        print(f"{args.command}: {type(e).__name__}: {e}", file=sys.stderr)
        return 1
    except NumericalError as e:
        print(f"{args.command}: {type(e).__name__}: {e}", file=sys.stderr)
        return 2


if __name__ == '__main__':
    sys.exit(main())
