#!/usr/bin/env python3

"""Brute-force point counts over F_q(T).

Heights are handled through their log_q exponents. Tuples of rational
functions are grouped by pole divisor, so a count runs over divisor
tuples weighted by how many field elements share each pole divisor.
The literal enumerations (exhaustive=True, count_projective_naive,
enumerate_points) exist to cross-check the grouped ones on tiny cases.
"""

import itertools
import logging
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Tuple

from tqdm import tqdm

from .curve import require_genus_zero
from .divisor import Divisor, infinite_divisor, sup_divisors
from .errors import BudgetExceededError, HKZetaError, InfiniteCountError, UnsupportedError
from .ffq import RationalFunction, all_polys, enumerate_rational_functions, poly_gcd, poly_lcm
from .hkgeom import decompose, require_big

logger = logging.getLogger(__name__)


def _rf(v):
    return v if isinstance(v, RationalFunction) else RationalFunction(v)


def _rf_pow(x, n):
    out = RationalFunction.constant(x.field, 1)
    for _ in range(n):
        out = out * x
    return out


@dataclass(frozen=True)
class HKPoint:
    """([x0 : x_11 : ... : x_tr], [y_1 : ... : y_t]) with x[i][j] = x_{i+1, j+1}."""

    x0: RationalFunction
    x: Tuple[Tuple[RationalFunction, ...], ...]
    y: Tuple[RationalFunction, ...]

    def x_block(self):
        return [self.x0] + [v for row in self.x for v in row]

    def satisfies(self, X):
        if len(self.y) != X.t or len(self.x) != X.t or any(len(row) != X.r for row in self.x):
            return False
        if all(v.is_zero for v in self.x_block()) or all(v.is_zero for v in self.y):
            return False
        for j, a_j in enumerate(X.a):
            for m, n in itertools.combinations(range(X.t), 2):
                lhs = self.x[m][j] * _rf_pow(self.y[n], a_j)
                rhs = self.x[n][j] * _rf_pow(self.y[m], a_j)
                if lhs != rhs:
                    return False
        return True

    def __str__(self):
        xs = ' : '.join(str(v) for v in self.x_block())
        return '([{}], [{}])'.format(xs, ' : '.join(str(v) for v in self.y))


def param_to_point(x, X):
    """Point of U_d(a) attached to x in K^d."""
    x = [_rf(v) for v in x]
    if len(x) != X.d:
        raise HKZetaError("U_d(a) is parametrized by {} coordinates, got {}".format(X.d, len(x)))
    field = x[0].field
    one = RationalFunction.constant(field, 1)
    t, r, a = X.t, X.r, X.a
    rows = []
    for i in range(1, t + 1):
        row = []
        for j in range(1, r + 1):
            if j < r:
                v = x[t + j - 2]
                if i < t:
                    v = v * _rf_pow(x[i - 1], a[j - 1])
            else:
                v = _rf_pow(x[i - 1], a[r - 1]) if i < t else one
            row.append(v)
        rows.append(tuple(row))
    y = tuple(x[:t - 1]) + (one,)
    return HKPoint(x[X.d - 1], tuple(rows), y)


def block_log_height(values):
    """log_q of the height of [v_0 : ... : v_n] in P^n(F_q(T))."""
    nonzero = [_rf(v) for v in values if not _rf(v).is_zero]
    if not nonzero:
        raise HKZetaError("all coordinates of a projective point are zero")
    den = reduce(poly_lcm, (v.den for v in nonzero))
    polys = [v.num * (den // v.den) for v in nonzero]
    g = reduce(poly_gcd, polys)
    return max((f // g).degree for f in polys)


def height_L(point, L):
    """log_q H_L(P) = gamma h(x-block) + xi h(y-block)."""
    return L.gamma * block_log_height(point.x_block()) + L.xi * block_log_height(point.y)


def d_L_from_poles(poles, X, L):
    """The divisor d_L built from the pole divisors of x_1..x_d."""
    if X.a_r == 0:
        raise UnsupportedError("d_L is only defined for a_r > 0")
    t, r, a = X.t, X.r, X.a
    zero = Divisor.zero()
    S = sup_divisors(list(poles[:t - 1]) + [zero])
    terms = [poles[X.d - 1], a[r - 1] * S, zero]
    terms += [poles[t + j - 2] + a[j - 1] * S for j in range(1, r)]
    return L.gamma * sup_divisors(terms) + L.xi * S


def d_L(x, X, L):
    return d_L_from_poles([infinite_divisor(_rf(v)) for v in x], X, L)


@lru_cache(maxsize=None)
def _pole_histogram(field, B):
    hist = Counter()
    for v in enumerate_rational_functions(field, B):
        hist[infinite_divisor(v)] += 1
    return hist


def pole_histogram(field, B):
    """Number of x in F_q(T) with deg (x)_inf <= B, per pole divisor."""
    return Counter(_pole_histogram(field, B))


def sup_fold(hist, k, max_degree=None):
    """Histogram of sup of k pole divisors drawn independently from hist."""
    acc = Counter({Divisor.zero(): 1})
    for _ in range(k):
        nxt = Counter()
        for E, w in acc.items():
            for D, n in hist.items():
                S = E.sup(D)
                if max_degree is not None and S.degree > max_degree:
                    continue
                nxt[S] += w * n
        acc = nxt
    return acc


def _bounds(X, L, max_degree):
    B_y = max_degree // L.c(X)
    B_x = (max_degree + max(0, -L.xi) * B_y) // L.gamma
    return B_y, B_x


def _histogram_chunk(args):
    groups, hx, X, L, max_degree = args
    gamma, xi, a = L.gamma, L.xi, X.a
    out = Counter()
    for S, weight in groups:
        base = xi * S.degree
        acc = Counter({a[-1] * S: 1})
        # x_{t-1+j} for j < r, then x_d
        shifts = [a[j - 1] * S for j in range(1, X.r)] + [Divisor.zero()]
        for shift in shifts:
            nxt = Counter()
            for E, w in acc.items():
                for D, n in hx.items():
                    F = E.sup(D + shift)
                    if gamma * F.degree + base > max_degree:
                        continue
                    nxt[F] += w * n
            acc = nxt
        for E, w in acc.items():
            out[gamma * E + xi * S] += weight * w
    return out


def d_L_divisor_histogram(X, L, max_degree, curve, jobs=1, progress=False):
    """Number of x in K^d with deg d_L(x) <= max_degree, per divisor d_L(x)."""
    require_genus_zero(curve, "brute-force counting")
    require_big(L, X)
    if X.a_r == 0:
        raise UnsupportedError("d_L is only defined for a_r > 0")
    field = curve.field
    B_y, B_x = _bounds(X, L, max_degree)
    hy = _pole_histogram(field, B_y)
    hx = _pole_histogram(field, B_x)
    c_L = L.c(X)
    s_hist = sup_fold(hy, X.t - 1, B_y)
    groups = [(S, w) for S, w in sorted(s_hist.items(), key=lambda sw: (sw[0].degree, repr(sw[0])))
              if c_L * S.degree <= max_degree]
    logger.info("Counting %s, L=%s up to degree %d: %d y-groups, %d x-divisors",
                X, L, max_degree, len(groups), len(hx))

    if jobs > 1 and len(groups) > 1:
        chunks = [groups[i::jobs] for i in range(jobs)]
        total = Counter()
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            for part in executor.map(_histogram_chunk,
                                     [(chunk, hx, X, L, max_degree) for chunk in chunks if chunk]):
                total.update(part)
        return total

    total = Counter()
    for group in tqdm(groups, ncols=70, disable=not progress):
        total.update(_histogram_chunk(([group], hx, X, L, max_degree)))
    return total


def d_L_histogram_exhaustive(X, L, max_degree, curve):
    """Same as d_L_divisor_histogram, one literal tuple at a time."""
    require_genus_zero(curve, "brute-force counting")
    require_big(L, X)
    B_y, B_x = _bounds(X, L, max_degree)
    ys = list(enumerate_rational_functions(curve.field, B_y))
    xs = list(enumerate_rational_functions(curve.field, B_x))
    poles = {}
    for v in ys + xs:
        if v not in poles:
            poles[v] = infinite_divisor(v)
    hist = Counter()
    for y_part in itertools.product(ys, repeat=X.t - 1):
        for x_part in itertools.product(xs, repeat=X.r):
            D = d_L_from_poles([poles[v] for v in y_part + x_part], X, L)
            if D.degree <= max_degree:
                hist[D] += 1
    return hist


def estimate_cost(X, L, M, q):
    """Upper bound on the number of literal tuples behind a count at degree M."""
    B_y, B_x = _bounds(X, L, M)
    return q ** ((X.t - 1) * (2 * B_y + 1) + X.r * (2 * B_x + 1))


def count_affine(n, d, curve):
    """#{x in K^n : deg sup (x_i)_inf = d}, the points of A^n of height q^d."""
    require_genus_zero(curve, "brute-force counting")
    if d < 0:
        return 0
    if n == 0:
        return 1 if d == 0 else 0
    folded = sup_fold(_pole_histogram(curve.field, d), n, d)
    return sum(w for D, w in folded.items() if D.degree == d)


def count_projective(n, d, curve):
    """Points of P^n(K) of height q^d, one affine chart at a time."""
    return sum(count_affine(k, d, curve) for k in range(n + 1))


def primitive_tuples(field, n, max_degree):
    """Coprime polynomial (n+1)-tuples of degree <= max_degree with first
    nonzero entry monic: one representative per point of P^n."""
    polys = list(all_polys(field, max_degree))
    for tup in itertools.product(polys, repeat=n + 1):
        nonzero = [f for f in tup if not f.is_zero]
        if not nonzero or not nonzero[0].is_monic:
            continue
        if reduce(poly_gcd, nonzero).degree == 0:
            yield tup


def count_projective_naive(n, d, curve):
    require_genus_zero(curve, "brute-force counting")
    return sum(1 for tup in primitive_tuples(curve.field, n, d)
               if max(f.degree for f in tup) == d)


def _count_U_product(X, L, M, curve):
    # a_r = 0: U_d(a) = A^r x P^(t-1)
    total = 0
    for d1 in range(M // L.gamma + 1):
        rest = M - L.gamma * d1
        if rest % L.xi:
            continue
        total += count_affine(X.r, d1, curve) * count_projective(X.t - 1, rest // L.xi, curve)
    return total


def count_U_table(X, L, M_max, curve, jobs=1, progress=False, exhaustive=False, budget=None):
    """[#{P in U_d(a) : H_L(P) = q^M} for M = 0..M_max]."""
    require_genus_zero(curve, "brute-force counting")
    require_big(L, X)
    if M_max < 0:
        return []
    if X.a_r == 0:
        return [_count_U_product(X, L, M, curve) for M in range(M_max + 1)]
    if budget is not None:
        cost = estimate_cost(X, L, M_max, curve.q)
        if cost > budget:
            raise BudgetExceededError("counting {} with L={} to degree {} needs about {:.3g} tuples, "
                                      "over the budget of {:.3g}".format(X, L, M_max, cost, budget))
    if exhaustive:
        hist = d_L_histogram_exhaustive(X, L, M_max, curve)
    else:
        hist = d_L_divisor_histogram(X, L, M_max, curve, jobs=jobs, progress=progress)
    table = [0] * (M_max + 1)
    for D, n in hist.items():
        table[D.degree] += n
    return table


def count_U(X, L, M, curve, jobs=1, progress=False, exhaustive=False, budget=None):
    if M < 0:
        return 0
    return count_U_table(X, L, M, curve, jobs, progress, exhaustive, budget)[M]


def _restricted(count, n, exponent, M, curve):
    if exponent <= 0:
        if M == 0 and exponent == 0:
            raise InfiniteCountError("height H^0 is constant: infinitely many points of height 1")
        return count(n, 0, curve) if M == 0 else 0
    if M % exponent:
        return 0
    return count(n, M // exponent, curve)


def count_component(comp, M, curve, **kwargs):
    if comp.kind == 'projective':
        return _restricted(count_projective, comp.n, comp.exponent, M, curve)
    if comp.kind == 'affine':
        return _restricted(count_affine, comp.n, comp.exponent, M, curve)
    if comp.kind == 'open':
        return count_U(comp.variety, comp.bundle, M, curve, **kwargs)
    if comp.kind == 'variety':
        return count_variety(comp.variety, comp.bundle, M, curve, **kwargs)
    raise HKZetaError("unknown component kind '{}'".format(comp.kind))


def count_partition(X, L, M, curve, **kwargs):
    """[(label, count)] over the full decomposition of X at height q^M."""
    return [(comp.label(), count_component(comp, M, curve, **kwargs))
            for comp in decompose(X, L, recursive=True)]


def count_variety(X, L, M, curve, **kwargs):
    return sum(n for _, n in count_partition(X, L, M, curve, **kwargs))


def enumerate_points(X, L, M, curve, ambient=False):
    """#{P in X(K) : H_L(P) = q^M} by listing points of X itself.

    Points are built fibre by fibre over [y] in P^(t-1), as
    x_ij = lambda_j y_i^(a_j); ambient=True instead scans the ambient
    P^(rt) x P^(t-1) and keeps the solutions of the defining equations.
    """
    require_genus_zero(curve, "point enumeration")
    if L.gamma <= 0 or L.xi <= 0:
        raise UnsupportedError("point enumeration needs gamma > 0 and xi > 0, got L={}".format(L))
    field = curve.field
    B_y, B_x = M // L.xi, M // L.gamma
    if ambient:
        return _enumerate_ambient(X, L, M, field, B_x, B_y)

    lambdas = [(max(f.degree for f in tup), tup) for tup in primitive_tuples(field, X.r, B_x)]
    found = 0
    for y in primitive_tuples(field, X.t - 1, B_y):
        rest = M - L.xi * max(f.degree for f in y)
        if rest < 0:
            continue
        yv = tuple(RationalFunction(f) for f in y)
        for deg, lam in lambdas:
            if L.gamma * deg > rest:
                continue
            rows = tuple(tuple(RationalFunction(lam[j + 1]) * _rf_pow(yv[i], X.a[j]) for j in range(X.r))
                         for i in range(X.t))
            point = HKPoint(RationalFunction(lam[0]), rows, yv)
            assert point.satisfies(X), "fibre point {} is off the variety".format(point)
            if height_L(point, L) == M:
                found += 1
    logger.debug("enumerated %d points of %s at height q^%d", found, X, M)
    return found


def _enumerate_ambient(X, L, M, field, B_x, B_y):
    found = 0
    ys = list(primitive_tuples(field, X.t - 1, B_y))
    for xs in primitive_tuples(field, X.r * X.t, B_x):
        xv = [RationalFunction(f) for f in xs]
        rows = tuple(tuple(xv[1 + i * X.r + j] for j in range(X.r)) for i in range(X.t))
        for y in ys:
            point = HKPoint(xv[0], rows, tuple(RationalFunction(f) for f in y))
            if point.satisfies(X) and height_L(point, L) == M:
                found += 1
    return found
