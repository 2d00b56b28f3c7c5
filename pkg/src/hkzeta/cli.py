#!/usr/bin/env python3

import functools
import json
import logging
import sys
import time
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Optional

import click
import pandas as pd

from .closedform import (Q_L_formula, anticanonical_zeta, formula_constant, holomorphy_gap,
                         variety_zeta, wan_constant, zeta_for_bundle)
from .counting import count_partition, count_U_table, count_variety, enumerate_points
from .curve import CurveData
from .errors import (BudgetExceededError, CurveError, HKZetaError, NotBigError,
                     NotPrimitiveError, SeriesError, UnsupportedGenusError)
from .hkgeom import (BETA, HKVariety, LineBundle, Position, alpha_star, alpha_star_numeric,
                     anticanonical, classify, decompose, is_big)
from .utils import frac_str, load_config, setup_logging

logger = logging.getLogger(__name__)

EXIT_VERIFY_FAILED = 1
EXIT_INVALID = 2
EXIT_UNSUPPORTED = 3
EXIT_BUDGET = 4


@dataclass
class JobSpec:
    variety: str
    bundle: Optional[str] = None
    q: int = 2
    curve: Optional[str] = None
    m_min: int = 0
    m_max: int = 4

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, data):
        return cls(**data)

    def resolve(self):
        X = HKVariety.parse(self.variety)
        if self.bundle is None or self.bundle == 'anticanonical':
            L = anticanonical(X)
        else:
            L = LineBundle.parse(self.bundle)
        if self.curve:
            curve = CurveData.load(self.curve)
            if curve.q != self.q:
                raise CurveError("curve file is over F_{}, but --q is {}".format(curve.q, self.q))
        else:
            curve = CurveData.rational(self.q)
        return X, L, curve

    @property
    def anticanonical(self):
        return self.bundle is None or self.bundle == 'anticanonical'


def exit_code(err):
    if isinstance(err, (NotBigError, NotPrimitiveError)):
        return EXIT_INVALID
    if isinstance(err, (UnsupportedGenusError, CurveError)):
        return EXIT_UNSUPPORTED
    if isinstance(err, BudgetExceededError):
        return EXIT_BUDGET
    return EXIT_INVALID


def handle_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except HKZetaError as err:
            click.echo("Error: {}".format(err), err=True)
            sys.exit(exit_code(err))
    return wrapper


def job_options(fn):
    fn = click.option('--variety', required=True, help="e.g. 'HK(r=1,t=2;a=1)'")(fn)
    fn = click.option('--bundle', default=None, help="gamma,xi of L")(fn)
    fn = click.option('--anticanonical', 'use_anticanonical', is_flag=True, help="use L = -K_X")(fn)
    fn = click.option('--q', 'q', default=2, type=int, show_default=True)(fn)
    fn = click.option('--curve', 'curve_path', default=None, type=click.Path(exists=True),
                      help="curve data JSON; F_q(T) when absent")(fn)
    return fn


def _job(variety, bundle, use_anticanonical, q, curve_path, **extra):
    if bundle is not None and use_anticanonical:
        raise HKZetaError("give either --bundle or --anticanonical, not both")
    return JobSpec(variety, None if use_anticanonical or bundle is None else bundle, q, curve_path, **extra)


def _json_default(obj):
    if isinstance(obj, Fraction):
        return frac_str(obj)
    raise TypeError("cannot serialize {!r}".format(obj))


def emit(data, as_csv, config):
    if as_csv:
        rows = data if isinstance(data, list) else [data]
        click.echo(pd.DataFrame(rows).to_csv(index=False), nl=False)
    else:
        click.echo(json.dumps(data, indent=config['output']['indent'], sort_keys=True,
                              default=_json_default))


@click.group()
@click.option('--config', 'config_path', default=None, type=click.Path(), help="config.toml to use")
@click.option('-v', '--verbose', count=True)
@click.pass_context
def cli(ctx, config_path, verbose):
    """Exact height zeta functions of Hirzebruch-Kleinschmidt varieties over F_q(T)."""
    setup_logging(verbose)
    ctx.obj = load_config(config_path)


@cli.command()
@job_options
@click.option('-N', 'order', default=None, type=int, help="number of coefficients to print")
@click.option('--whole', is_flag=True, help="zeta function of all of X instead of U")
@click.option('--csv', 'as_csv', is_flag=True)
@click.option('--timing', is_flag=True)
@click.pass_obj
@handle_errors
def zeta(config, variety, bundle, use_anticanonical, q, curve_path, order, whole, as_csv, timing):
    """Print Z(T) in factored form with its first coefficients."""
    job = _job(variety, bundle, use_anticanonical, q, curve_path)
    N = config['series']['default_order'] if order is None else order
    start = time.perf_counter()
    X, L, curve = job.resolve()
    if job.anticanonical and not whole:
        result = anticanonical_zeta(X, curve)
    else:
        result = zeta_for_bundle(X, L, curve, target='variety' if whole else 'open')
    data = result.to_dict(N)
    elapsed = time.perf_counter() - start
    if as_csv:
        rows = [{'M': M, 'coefficient': c} for M, c in enumerate(data['coefficients'])]
        if timing:
            for row in rows:
                row['runtime'] = elapsed
        emit(rows, True, config)
    else:
        if timing:
            data['runtime'] = elapsed
        emit(data, False, config)


@cli.command()
@job_options
@click.option('--m-min', default=0, type=int, show_default=True)
@click.option('--m-max', default=4, type=int, show_default=True)
@click.option('--components', is_flag=True, help="one row per piece of the decomposition of X")
@click.option('--whole', is_flag=True, help="count points of all of X instead of U")
@click.option('--exhaustive', is_flag=True, help="iterate literal tuples")
@click.option('--jobs', default=None, type=int)
@click.option('--budget', default=None, type=float)
@click.option('--progress', is_flag=True)
@click.option('--json', 'as_json', is_flag=True)
@click.option('--timing', is_flag=True)
@click.pass_obj
@handle_errors
def count(config, variety, bundle, use_anticanonical, q, curve_path, m_min, m_max, components,
          whole, exhaustive, jobs, budget, progress, as_json, timing):
    """Brute-force point counts of height exactly q^M."""
    job = _job(variety, bundle, use_anticanonical, q, curve_path, m_min=m_min, m_max=m_max)
    X, L, curve = job.resolve()
    opts = dict(jobs=config['enumeration']['jobs'] if jobs is None else jobs,
                budget=config['enumeration']['budget'] if budget is None else budget,
                progress=progress or config['enumeration']['progress'])
    rows = []
    start = time.perf_counter()
    if components:
        for M in range(m_min, m_max + 1):
            parts = count_partition(X, L, M, curve, exhaustive=exhaustive, **opts)
            rows += [{'M': M, 'component': label, 'count': n} for label, n in parts]
            rows.append({'M': M, 'component': 'total', 'count': sum(n for _, n in parts)})
    elif whole:
        for M in range(m_min, m_max + 1):
            rows.append({'M': M, 'count': count_variety(X, L, M, curve, exhaustive=exhaustive, **opts)})
    else:
        table = count_U_table(X, L, m_max, curve, exhaustive=exhaustive, **opts)
        rows = [{'M': M, 'count': table[M]} for M in range(m_min, m_max + 1)]
    if timing:
        elapsed = time.perf_counter() - start
        for row in rows:
            row['runtime'] = elapsed
    emit(rows, not as_json, config)


def _verify_rows(config, X, L, curve, max_M, partition_max_M, opts, tamper=None):
    rows = []

    def check(name, passed, detail):
        rows.append({'check': name, 'passed': bool(passed), 'detail': detail})
        logger.info("%s: %s (%s)", name, 'pass' if passed else 'FAIL', detail)

    result = zeta_for_bundle(X, L, curve)
    coeffs = result.coefficients(max_M)
    if tamper is not None and 0 <= tamper <= max_M:
        coeffs[tamper] += 1
    counts = count_U_table(X, L, max_M, curve, **opts)
    bad = [M for M in range(max_M + 1) if coeffs[M] != counts[M]]
    check('coefficients', not bad, "M <= {}, mismatches at {}".format(max_M, bad))

    cls = result.classification
    formula, extracted = result.constants.get('formula'), result.constants.get('extracted')
    if formula is not None and extracted is not None:
        check('leading_constant', formula == extracted, "{} vs {}".format(formula, extracted))
    if cls.position is Position.EQUAL_AB and formula is not None:
        try:
            lead = result.asymptotics().leading_coefficients()[0]
            C_L = formula.value * cls.eta_L
            check('class_polynomial', formula.q_power == 0 and lead == C_L,
                  "{} vs {}".format(frac_str(lead), frac_str(C_L)))
        except SeriesError as err:
            logger.warning("skipping class polynomial check: %s", err)

    if L.xi > 0:
        for M in range(partition_max_M + 1):
            parts = count_partition(X, L, M, curve, **opts)
            direct = enumerate_points(X, L, M, curve)
            total = sum(n for _, n in parts)
            check('partition M={}'.format(M), total == direct, "{} vs {}".format(total, direct))
        whole = variety_zeta(X, L, curve).expand(partition_max_M)
        direct = [enumerate_points(X, L, M, curve) for M in range(partition_max_M + 1)]
        check('variety_zeta', [int(c) for c in whole] == direct, "{}".format(direct))

    if (X.r, X.t, X.a) == (1, 2, (1,)) and (L.gamma, L.xi) == (1, 1):
        qq = Fraction(curve.q)
        C3 = formula_constant(X, L, curve)
        C2 = wan_constant(1, curve)
        expected3 = (qq ** 2 + qq + 1) * (qq ** 2 - 1) / qq ** 2
        expected2 = (qq ** 2 - 1) / qq
        check('C_3', C3 is not None and C3.value == expected3, frac_str(expected3))
        check('C_2', C2.value == expected2, frac_str(expected2))
        check('C_3 > 2 C_2', C3 is not None and C3.value > 2 * C2.value, "")
    return rows


@cli.command()
@job_options
@click.option('--max-M', 'max_M', default=None, type=int)
@click.option('--jobs', default=None, type=int)
@click.option('--budget', default=None, type=float)
@click.option('--tamper', default=None, type=int, hidden=True)
@click.option('--csv', 'as_csv', is_flag=True)
@click.pass_obj
@handle_errors
def verify(config, variety, bundle, use_anticanonical, q, curve_path, max_M, jobs, budget, tamper, as_csv):
    """Check closed forms against brute-force counts."""
    job = _job(variety, bundle, use_anticanonical, q, curve_path)
    X, L, curve = job.resolve()
    if curve.genus != 0:
        raise UnsupportedGenusError("verify enumerates points, which needs genus 0")
    opts = dict(jobs=config['enumeration']['jobs'] if jobs is None else jobs,
                budget=config['enumeration']['budget'] if budget is None else budget)
    max_M = config['verify']['max_M'] if max_M is None else max_M
    rows = _verify_rows(config, X, L, curve, max_M, config['verify']['partition_max_M'], opts, tamper)
    emit(rows if as_csv else {'checks': rows, 'passed': all(r['passed'] for r in rows)}, as_csv, config)
    if not all(r['passed'] for r in rows):
        sys.exit(EXIT_VERIFY_FAILED)


@cli.command()
@job_options
@click.option('--m-min', default=0, type=int, show_default=True)
@click.option('--m-max', default=None, type=int)
@click.option('--cutoff', default=None, type=int, help="degree cutoff of the Q_L sums")
@click.option('--csv', 'as_csv', is_flag=True)
@click.pass_obj
@handle_errors
def asym(config, variety, bundle, use_anticanonical, q, curve_path, m_min, m_max, cutoff, as_csv):
    """Classification, leading constants and Q_L(M)."""
    job = _job(variety, bundle, use_anticanonical, q, curve_path)
    X, L, curve = job.resolve()
    cutoff = config['verify']['tail_cutoff'] if cutoff is None else cutoff
    result = anticanonical_zeta(X, curve) if job.anticanonical else zeta_for_bundle(X, L, curve)
    cls = result.classification
    if m_max is None:
        m_max = m_min + cls.c_L * cls.eta_L
    q_rows = []
    for M in range(m_min, m_max + 1):
        out = Q_L_formula(X, L, M, curve, cutoff)
        q_rows.append({'M': M, 'case': out['case'],
                       'Q_L': None if out['value'] is None else str(out['value']),
                       'tail': None if out['tail'] is None else str(out['tail'])})
    if as_csv:
        emit(q_rows, True, config)
        return
    data = {'variety': str(X), 'bundle': L.to_list(), 'classification': cls.to_dict(),
            'constants': {k: (None if v is None else v.to_json()) for k, v in sorted(result.constants.items())},
            'Q_L': q_rows}
    try:
        data['expansion'] = result.asymptotics().to_json()
        data['holomorphy'] = {k: (str(v) if isinstance(v, Fraction) else v)
                              for k, v in holomorphy_gap(result, curve.q).items()}
    except SeriesError as err:
        logger.warning("no asymptotic expansion: %s", err)
    emit(data, False, config)


@cli.command()
@click.option('--variety', required=True)
@click.option('--bundle', default=None)
@click.option('--csv', 'as_csv', is_flag=True)
@click.pass_obj
@handle_errors
def invariants(config, variety, bundle, as_csv):
    """Picard-lattice invariants of X (and of L when given)."""
    X = HKVariety.parse(variety)
    K = anticanonical(X)
    data = {'variety': str(X), 'r': X.r, 't': X.t, 'a': list(X.a), 'd': X.d, 'a_abs': X.a_abs,
            'a_r': X.a_r, 'N_X': X.N_X, 'eta_X': X.eta_X, 'anticanonical': K.to_list(),
            'alpha_star': frac_str(alpha_star(X)), 'alpha_star_numeric': alpha_star_numeric(X),
            'beta': BETA}
    if bundle is not None:
        L = LineBundle.parse(bundle)
        data.update({'bundle': L.to_list(), 'big': is_big(L, X), 'eta_L': L.eta})
        if is_big(L, X):
            data['classification'] = classify(L, X).to_dict()
    emit(data, as_csv, config)


@cli.command('decompose')
@click.option('--variety', required=True)
@click.option('--bundle', default=None)
@click.option('--shallow', is_flag=True, help="stop at the first level")
@click.option('--csv', 'as_csv', is_flag=True)
@click.pass_obj
@handle_errors
def decompose_cmd(config, variety, bundle, shallow, as_csv):
    """Pieces of X with their restricted heights."""
    X = HKVariety.parse(variety)
    L = anticanonical(X) if bundle is None else LineBundle.parse(bundle)
    parts = [c.to_dict() for c in decompose(X, L, recursive=not shallow)]
    if as_csv:
        emit([{k: (json.dumps(v) if isinstance(v, list) else v) for k, v in p.items()} for p in parts],
             True, config)
    else:
        emit({'variety': str(X), 'bundle': L.to_list(), 'components': parts}, False, config)


if __name__ == '__main__':
    cli()
