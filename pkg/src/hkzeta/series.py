#!/usr/bin/env python3

"""Exact power series in T, rational functions with denominators kept as
products of (1 - c T^m)^k, and coefficient asymptotics by exact partial
fractions over residue classes.
"""

from __future__ import annotations

import functools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import sympy

from .errors import SeriesError
from .utils import frac_str, parse_frac

logger = logging.getLogger(__name__)

Factor = Tuple[Fraction, int, int]


# polynomial helpers, coefficient lists low degree first

def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _padd(a, b):
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def _pscale(a, c):
    return _trim([x * c for x in a])


def _pmul(a, b, N=None):
    if not a or not b:
        return []
    size = len(a) + len(b) - 1
    if N is not None:
        size = min(size, N + 1)
    out = [Fraction(0)] * size
    for i, x in enumerate(a):
        if x == 0 or i >= size:
            continue
        for j, y in enumerate(b):
            if i + j >= size:
                break
            out[i + j] += x * y
    return _trim(out)


def _pdivmod(a, b):
    b = _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = [Fraction(x) for x in a]
    db = len(b) - 1
    quot = [Fraction(0)] * max(len(rem) - db, 0)
    lead = Fraction(b[-1])
    for i in range(len(rem) - 1, db - 1, -1):
        c = rem[i]
        if c == 0:
            continue
        f = c / lead
        quot[i - db] = f
        for j, y in enumerate(b):
            rem[i - db + j] -= f * y
    return _trim(quot), _trim(rem)


def _peval(p, x):
    value = Fraction(0)
    for c in reversed(p):
        value = value * x + c
    return value


def _binomial_poly(c, m):
    """Coefficients of 1 - c T^m."""
    out = [Fraction(0)] * (m + 1)
    out[0] = Fraction(1)
    out[m] = -Fraction(c)
    return out


def _ppow(a, k):
    out = [Fraction(1)]
    for _ in range(k):
        out = _pmul(out, a)
    return out


def _geometric_sum(c, m, terms):
    """1 + c T^m + ... + (c T^m)^(terms-1)."""
    out = [Fraction(0)] * (m * (terms - 1) + 1)
    for u in range(terms):
        out[m * u] = Fraction(c) ** u
    return out


def _series_div(a, b, N):
    """Power series a / b truncated at T^N; b[0] must be nonzero."""
    if not b or b[0] == 0:
        raise SeriesError("denominator series must have a nonzero constant term")
    out = [Fraction(0)] * (N + 1)
    inv0 = 1 / Fraction(b[0])
    for n in range(N + 1):
        s = Fraction(a[n]) if n < len(a) else Fraction(0)
        for i in range(1, min(n, len(b) - 1) + 1):
            s -= b[i] * out[n - i]
        out[n] = s * inv0
    return out


def _rational_root(x, n):
    """Exact n-th root of a positive rational, or None."""
    x = Fraction(x)
    if x <= 0:
        return None
    num, ok_num = sympy.integer_nthroot(x.numerator, n)
    den, ok_den = sympy.integer_nthroot(x.denominator, n)
    if ok_num and ok_den:
        return Fraction(int(num), int(den))
    return None


def q_log(x, q):
    """Integer e with q^e == x, or None."""
    x = Fraction(x)
    if x <= 0:
        return None
    sign = 1
    if x < 1:
        x, sign = 1 / x, -1
    e = 0
    power = Fraction(1)
    while power < x:
        power *= q
        e += 1
    return sign * e if power == x else None


def _merge_factors(factors):
    merged = {}
    for c, m, k in factors:
        c, m, k = Fraction(c), int(m), int(k)
        if c <= 0 or m < 1:
            raise SeriesError("denominator factors need c > 0 and m >= 1, got ({}, {})".format(c, m))
        merged[(c, m)] = merged.get((c, m), 0) + k
    out = [(c, m, k) for (c, m), k in merged.items() if k != 0]
    if any(k < 0 for _, _, k in out):
        raise SeriesError("negative multiplicity in denominator factors")
    return tuple(sorted(out, key=lambda f: (f[1], f[0])))


@dataclass(frozen=True)
class ScaledConstant:
    """Exact value * q^q_power * log(q)^log_exponent, with 0 <= q_power < 1."""

    value: Fraction
    log_exponent: int = 0
    q_power: Fraction = Fraction(0)
    q: Optional[int] = field(default=None, compare=False)

    def __post_init__(self):
        value = Fraction(self.value)
        q_power = Fraction(self.q_power)
        whole = math.floor(q_power)
        if whole:
            if self.q is None:
                raise SeriesError("q is required to normalize a q-power")
            value *= Fraction(self.q) ** whole
            q_power -= whole
        if value == 0:
            q_power = Fraction(0)
        object.__setattr__(self, 'value', value)
        object.__setattr__(self, 'q_power', q_power)

    def _q(self, other):
        return self.q if self.q is not None else getattr(other, 'q', None)

    def __mul__(self, other):
        if isinstance(other, ScaledConstant):
            return ScaledConstant(self.value * other.value,
                                  self.log_exponent + other.log_exponent,
                                  self.q_power + other.q_power, self._q(other))
        return ScaledConstant(self.value * Fraction(other), self.log_exponent,
                              self.q_power, self.q)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, ScaledConstant):
            return ScaledConstant(self.value / other.value,
                                  self.log_exponent - other.log_exponent,
                                  self.q_power - other.q_power, self._q(other))
        return ScaledConstant(self.value / Fraction(other), self.log_exponent,
                              self.q_power, self.q)

    def times_log(self, n):
        return ScaledConstant(self.value, self.log_exponent + n, self.q_power, self.q)

    @property
    def is_rational(self):
        return self.log_exponent == 0 and self.q_power == 0

    def rational(self):
        if not self.is_rational:
            raise SeriesError("{} is not a rational number".format(self))
        return self.value

    def __float__(self):
        out = float(self.value)
        if self.q_power or self.log_exponent:
            out *= float(self.q) ** float(self.q_power) * math.log(self.q) ** self.log_exponent
        return out

    def to_json(self):
        return {'value': frac_str(self.value), 'log_exponent': self.log_exponent,
                'q_power': frac_str(self.q_power)}

    def __str__(self):
        out = frac_str(self.value)
        if self.q_power:
            out += '*q^({})'.format(frac_str(self.q_power))
        if self.log_exponent:
            out += '*log(q)^({})'.format(self.log_exponent)
        return out


class FactoredRational:
    """numerator(T) / (extra_den(T) * prod (1 - c T^m)^k) over the rationals.

    extra_den is 1 unless a division left a numerator that does not split
    into (1 - c T^m) factors; `general` reports that case.
    """

    def __init__(self, numerator, den_factors=(), extra_den=None):
        num = _trim([Fraction(c) for c in numerator])
        extra = [Fraction(1)] if extra_den is None else _trim([Fraction(c) for c in extra_den])
        if not extra or extra[0] == 0:
            raise SeriesError("general denominator needs a nonzero constant term")
        if extra[0] != 1:
            num = _pscale(num, 1 / extra[0])
            extra = _pscale(extra, 1 / extra[0])
        self.numerator = num
        self.den = _merge_factors(den_factors)
        self.extra_den = extra
        self._reduce()

    @classmethod
    def polynomial(cls, coeffs):
        return cls(coeffs)

    @classmethod
    def one(cls):
        return cls([1])

    @classmethod
    def geometric(cls, c, m=1, k=1):
        """1 / (1 - c T^m)^k."""
        return cls([1], [(c, m, k)])

    @property
    def general(self):
        return self.extra_den != [1]

    @property
    def is_zero(self):
        return not self.numerator

    def _reduce(self):
        if not self.numerator:
            self.den = ()
            self.extra_den = [Fraction(1)]
            return
        num = self.numerator
        kept = []
        for c, m, k in self.den:
            b = _binomial_poly(c, m)
            while k > 0:
                quo, rem = _pdivmod(num, b)
                if rem:
                    break
                num = quo
                k -= 1
            if k:
                kept.append((c, m, k))
        self.numerator = num
        self.den = tuple(kept)

    def denominator_poly(self):
        out = list(self.extra_den)
        for c, m, k in self.den:
            out = _pmul(out, _ppow(_binomial_poly(c, m), k))
        return out

    # arithmetic

    def __mul__(self, other):
        if not isinstance(other, FactoredRational):
            return FactoredRational(_pscale(self.numerator, Fraction(other)), self.den, self.extra_den)
        return FactoredRational(_pmul(self.numerator, other.numerator),
                                self.den + other.den,
                                _pmul(self.extra_den, other.extra_den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, FactoredRational):
            return self * (1 / Fraction(other))
        if other.is_zero:
            raise ZeroDivisionError("division by the zero series")
        P = list(other.numerator)
        if P[0] == 0:
            raise SeriesError("quotient is not a power series (divisor vanishes at T=0)")
        lead = P[0]
        P = _pscale(P, 1 / lead)
        candidates = [(c, m) for c, m, _ in self.den + other.den]
        peeled, rest = _peel_binomials(P, candidates)
        num = _pmul(self.numerator, other.denominator_poly())
        num = _pscale(num, 1 / lead)
        extra = _pmul(self.extra_den, rest)
        if len(rest) > 1:
            logger.debug("division left a general denominator of degree %d", len(rest) - 1)
        return FactoredRational(num, self.den + tuple(peeled), extra)

    def __add__(self, other):
        if not isinstance(other, FactoredRational):
            other = FactoredRational([other])
        keys = {}
        for c, m, k in self.den + other.den:
            keys[(c, m)] = max(keys.get((c, m), 0), k)
        a_num, b_num = self.numerator, other.numerator
        ka = {(c, m): k for c, m, k in self.den}
        kb = {(c, m): k for c, m, k in other.den}
        for (c, m), K in keys.items():
            a_num = _pmul(a_num, _ppow(_binomial_poly(c, m), K - ka.get((c, m), 0)))
            b_num = _pmul(b_num, _ppow(_binomial_poly(c, m), K - kb.get((c, m), 0)))
        if self.extra_den == other.extra_den:
            extra = self.extra_den
        else:
            a_num = _pmul(a_num, other.extra_den)
            b_num = _pmul(b_num, self.extra_den)
            extra = _pmul(self.extra_den, other.extra_den)
        return FactoredRational(_padd(a_num, b_num), [(c, m, K) for (c, m), K in keys.items()], extra)

    __radd__ = __add__

    def __neg__(self):
        return FactoredRational(_pscale(self.numerator, -1), self.den, self.extra_den)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __eq__(self, other):
        if not isinstance(other, FactoredRational):
            return NotImplemented
        lhs = _pmul(self.numerator, other.denominator_poly())
        rhs = _pmul(other.numerator, self.denominator_poly())
        return lhs == rhs

    def substitute(self, c, m):
        """Replace T by c T^m."""
        c = Fraction(c)

        def sub_poly(p):
            out = [Fraction(0)] * (m * (len(p) - 1) + 1) if p else []
            for i, a in enumerate(p):
                out[m * i] = a * c ** i
            return out

        return FactoredRational(sub_poly(self.numerator),
                                [(cc * c ** mm, m * mm, k) for cc, mm, k in self.den],
                                sub_poly(self.extra_den))

    def expand(self, N):
        """Coefficients c_0..c_N of the power series."""
        if N < 0:
            raise SeriesError("expansion order must be nonnegative, not '{}'".format(N))
        series = [Fraction(0)] * (N + 1)
        for i, a in enumerate(self.numerator[:N + 1]):
            series[i] = a
        for c, m, k in self.den:
            inverse = [Fraction(0)] * (N + 1)
            for j in range(N // m + 1):
                inverse[m * j] = math.comb(j + k - 1, k - 1) * c ** j
            series = _pmul(series, inverse, N)
            series = series + [Fraction(0)] * (N + 1 - len(series))
        if self.general:
            series = _series_div(series, self.extra_den, N)
        return series

    def evaluate(self, T):
        T = Fraction(T)
        den = _peval(self.extra_den, T)
        for c, m, k in self.den:
            den *= (1 - c * T ** m) ** k
        if den == 0:
            raise SeriesError("pole at T = {}".format(T))
        return _peval(self.numerator, T) / den

    def pole_order_at(self, base):
        """Total multiplicity of the factors vanishing at T = 1/base."""
        T0 = 1 / Fraction(base)
        return sum(k for c, m, k in self.den if c * T0 ** m == 1)

    def principal_coefficient(self, base, order=None):
        """lim_{T -> 1/base} (1 - base T)^order Z(T) for rational base > 0."""
        T0 = 1 / Fraction(base)
        nominal = self.pole_order_at(base)
        if order is None:
            order = nominal
        if order < nominal:
            raise SeriesError("pole of order {} at T = {} exceeds {}".format(nominal, T0, order))
        if order > nominal:
            return Fraction(0)
        value = _peval(self.numerator, T0)
        den = _peval(self.extra_den, T0)
        if den == 0:
            raise SeriesError("general denominator vanishes at T = {}".format(T0))
        for c, m, k in self.den:
            if c * T0 ** m == 1:
                # (1 - c T^m) / (1 - T/T0) -> m at T0
                den *= Fraction(m) ** k
            else:
                den *= (1 - c * T0 ** m) ** k
        return value / den

    def to_json(self):
        data = {'num': [frac_str(c) for c in self.numerator],
                'den': [[_json_number(c), m, k] for c, m, k in self.den]}
        if self.general:
            data['extra_den'] = [frac_str(c) for c in self.extra_den]
        return data

    @classmethod
    def from_json(cls, data):
        try:
            num = [parse_frac(c) for c in data['num']]
            den = [(parse_frac(c), int(m), int(k)) for c, m, k in data['den']]
        except (KeyError, TypeError, ValueError):
            raise SeriesError("invalid factored rational JSON '{}'".format(data))
        extra = data.get('extra_den')
        return cls(num, den, None if extra is None else [parse_frac(c) for c in extra])

    def __repr__(self):
        dens = ''.join('(1-{}T^{})^{}'.format(frac_str(c), m, k) for c, m, k in self.den)
        return 'FactoredRational([{}] / {}{})'.format(
            ', '.join(frac_str(c) for c in self.numerator), dens or '1',
            '' if not self.general else ' / [{}]'.format(', '.join(frac_str(c) for c in self.extra_den)))


def _json_number(c):
    return c.numerator if c.denominator == 1 else frac_str(c)


def _peel_binomials(P, candidates):
    """Split P (P[0] = 1) into (1 - c T^m) factors plus an unsplit rest."""
    peeled = []
    rest = _trim(P)
    progress = True
    while progress and len(rest) > 1:
        progress = False
        m0 = next(i for i in range(1, len(rest)) if rest[i] != 0)
        tries = list(dict.fromkeys(list(candidates) + [(-rest[m0], m0)]))
        for c, m in tries:
            if c <= 0:
                continue
            quo, rem = _pdivmod(rest, _binomial_poly(c, m))
            if not rem:
                peeled.append((Fraction(c), m, 1))
                rest = quo
                progress = True
                break
    return peeled, rest


def expand(Z, N):
    return Z.expand(N)


def arith(a, b, op):
    if op == 'mul':
        return a * b
    elif op == 'div':
        return a / b
    elif op == 'add':
        return a + b
    else:
        raise SeriesError("op should be one of 'mul', 'div', 'add', not '{}'".format(op))


def substitute(Z, c, m):
    return Z.substitute(c, m)


@dataclass
class PoleGroup:
    """All poles on one circle, merged into (1 - C T^L)^K.

    coeffs[i - 1][j] multiplies T^j / (1 - C T^L)^i.
    """

    C: Fraction
    L: int
    K: int
    coeffs: List[List[Fraction]]

    @property
    def order(self):
        for i in range(self.K, 0, -1):
            if any(self.coeffs[i - 1]):
                return i
        return 0

    def contribution(self, M):
        j = M % self.L
        n = (M - j) // self.L
        total = Fraction(0)
        for i in range(1, self.K + 1):
            a = self.coeffs[i - 1][j]
            if a:
                total += a * math.comb(n + i - 1, i - 1) * self.C ** n
        return total

    def abs_contribution(self, M):
        j = M % self.L
        n = (M - j) // self.L
        return sum((abs(self.coeffs[i - 1][j]) * math.comb(n + i - 1, i - 1) * self.C ** n
                    for i in range(1, self.K + 1)), Fraction(0))

    def class_polynomial(self, j):
        """Q_j with contribution(M) = Q_j(M) * C^((M - j)/L) for M = j mod L."""
        out = []
        for i in range(1, self.K + 1):
            a = self.coeffs[i - 1][j]
            if not a:
                continue
            poly = [Fraction(1)]
            for s in range(1, i):
                poly = _pmul(poly, [Fraction(s * self.L - j, s * self.L), Fraction(1, s * self.L)])
            out = _padd(out, _pscale(poly, a))
        return out


def _same_radius(f1, f2):
    (c1, m1), (c2, m2) = f1, f2
    return c1 ** m2 == c2 ** m1


def _compare_radius(g1, g2):
    # larger C^(1/L) means a smaller pole radius
    lhs, rhs = g1.C ** g2.L, g2.C ** g1.L
    return -1 if lhs > rhs else (1 if lhs < rhs else 0)


class AsymptoticExpansion:

    def __init__(self, groups, poly_part, eta=1):
        self.groups = sorted([g for g in groups if g.order > 0],
                             key=functools.cmp_to_key(_compare_radius))
        self.poly_part = list(poly_part)
        self.eta = eta

    @property
    def finitely_supported(self):
        return not self.groups

    @property
    def dominant(self):
        if not self.groups:
            raise SeriesError("finitely supported series has no dominant pole")
        return self.groups[0]

    @property
    def order(self):
        return self.dominant.order

    @property
    def period(self):
        return self.dominant.L

    def coefficient(self, M):
        value = self.poly_part[M] if M < len(self.poly_part) else Fraction(0)
        for g in self.groups:
            value += g.contribution(M)
        return value

    def main_term(self, M):
        return self.dominant.contribution(M)

    def remainder(self, M):
        return self.coefficient(M) - self.main_term(M)

    def remainder_bound(self, M):
        value = abs(self.poly_part[M]) if M < len(self.poly_part) else Fraction(0)
        for g in self.groups[1:]:
            value += g.abs_contribution(M)
        return value

    def class_polynomial(self, j):
        return self.dominant.class_polynomial(j)

    def growth_base(self):
        return _rational_root(self.dominant.C, self.dominant.L)

    def normalized_class_polynomial(self, j):
        """P_j with main_term(M) = P_j(M) * beta^M for M = j mod L."""
        beta = self.growth_base()
        if beta is None:
            raise SeriesError("growth base {}^(1/{}) is irrational".format(self.dominant.C, self.dominant.L))
        return _pscale(self.class_polynomial(j), beta ** (-j))

    def leading_coefficients(self):
        """Coefficient of M^(order-1) of every normalized class polynomial."""
        out = []
        for j in range(self.period):
            poly = self.normalized_class_polynomial(j)
            out.append(poly[self.order - 1] if len(poly) >= self.order else Fraction(0))
        return out

    def growth_exponent(self, q):
        e = q_log(self.dominant.C, q)
        return None if e is None else Fraction(e, self.dominant.L)

    def error_exponent(self, q):
        if len(self.groups) < 2:
            return None
        e = q_log(self.groups[1].C, q)
        return None if e is None else Fraction(e, self.groups[1].L)

    def to_json(self):
        data = {'finitely_supported': self.finitely_supported,
                'poly_part': [frac_str(c) for c in self.poly_part]}
        if self.groups:
            g = self.dominant
            data.update({'base': [frac_str(g.C), g.L], 'order': g.order,
                         'class_polynomials': [[frac_str(c) for c in g.class_polynomial(j)]
                                               for j in range(g.L)]})
            if len(self.groups) > 1:
                data['next_base'] = [frac_str(self.groups[1].C), self.groups[1].L]
        return data


def _to_sympy(x):
    return sympy.Rational(x.numerator, x.denominator)


def _from_sympy(x):
    x = sympy.Rational(x)
    return Fraction(int(x.p), int(x.q))


def _group_factors(factors):
    groups = []
    for c, m, k in factors:
        for g in groups:
            if _same_radius((g[0][0], g[0][1]), (c, m)):
                g.append((c, m, k))
                break
        else:
            groups.append([(c, m, k)])
    return groups


def partial_fractions(Z, extra_factorization=None):
    """Exact decomposition of Z into a polynomial part plus, per pole circle,
    sum_i A_i(T) / (1 - C T^L)^i with deg A_i < L."""
    factors = list(Z.den)
    numerator = list(Z.numerator)
    if Z.general:
        if extra_factorization is None:
            raise SeriesError("general denominator: supply its factorization into (1 - c T^m) factors")
        check = [Fraction(1)]
        for c, m, k in extra_factorization:
            check = _pmul(check, _ppow(_binomial_poly(c, m), k))
        if check != Z.extra_den:
            raise SeriesError("supplied factorization does not reproduce the general denominator")
        factors += [(Fraction(c), int(m), int(k)) for c, m, k in extra_factorization]
        factors = list(_merge_factors(factors))

    merged = []
    for group in _group_factors(factors):
        L = 1
        for _, m, _ in group:
            L = int(sympy.ilcm(L, m))
        c0, m0, _ = group[0]
        C = Fraction(c0) ** (L // m0)
        K = 0
        for c, m, k in group:
            numerator = _pmul(numerator, _ppow(_geometric_sum(c, m, L // m), k))
            K += k
        merged.append((C, L, K))

    n = sum(L * K for _, L, K in merged)
    deg_num = len(numerator) - 1
    poly_len = max(deg_num - n + 1, 0)
    size = n + poly_len
    logger.debug("partial fractions: %d groups, %d unknowns", len(merged), size)

    full = [Fraction(1)]
    for C, L, K in merged:
        full = _pmul(full, _ppow(_binomial_poly(C, L), K))

    columns = []
    for gi, (C, L, K) in enumerate(merged):
        others = [Fraction(1)]
        for hi, (C2, L2, K2) in enumerate(merged):
            if hi != gi:
                others = _pmul(others, _ppow(_binomial_poly(C2, L2), K2))
        for i in range(1, K + 1):
            base = _pmul(others, _ppow(_binomial_poly(C, L), K - i))
            for j in range(L):
                columns.append([Fraction(0)] * j + base)
    for k in range(poly_len):
        columns.append([Fraction(0)] * k + full)

    if size == 0:
        return [], numerator
    A = sympy.zeros(size, size)
    for col, poly in enumerate(columns):
        for row, value in enumerate(poly[:size]):
            if value:
                A[row, col] = _to_sympy(value)
    b = sympy.Matrix([_to_sympy(numerator[i]) if i < len(numerator) else 0 for i in range(size)])
    sol = [_from_sympy(x) for x in A.LUsolve(b)]

    groups = []
    pos = 0
    for C, L, K in merged:
        coeffs = []
        for i in range(K):
            coeffs.append(sol[pos:pos + L])
            pos += L
        groups.append(PoleGroup(C, L, K, coeffs))
    poly_part = sol[pos:pos + poly_len]
    return groups, poly_part


def asymptotics(Z, eta=1, extra_factorization=None):
    if not Z.den and not Z.general:
        logger.warning("asymptotics of a finitely supported series")
        return AsymptoticExpansion([], Z.numerator, eta)
    groups, poly_part = partial_fractions(Z, extra_factorization)
    return AsymptoticExpansion(groups, poly_part, eta)
