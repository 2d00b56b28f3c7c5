#!/usr/bin/env python3

"""The base function field: curve data, Z_K(T), exact zeta values, R_K
and the residue constant of zeta_K at s = 1.
"""

import json
import logging
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, List, Optional

import sympy

from .divisor import Divisor, Place, enumerate_effective, ell
from .errors import CurveError, UnsupportedGenusError
from .ffq import enumerate_monic_irreducibles, field_for_order, mobius_int
from .series import FactoredRational, ScaledConstant, _rational_root, _series_div

logger = logging.getLogger(__name__)


@dataclass
class CurveData:
    q: int
    genus: int = 0
    L: List[int] = dc_field(default_factory=lambda: [1])
    place_counts: Optional[List[int]] = None
    ell_table: Dict[Divisor, int] = dc_field(default_factory=dict)
    field: object = None
    cache: dict = dc_field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self.L = [int(c) for c in self.L]
        if len(self.L) != 2 * self.genus + 1 or self.L[0] != 1:
            raise CurveError("L-polynomial must have degree 2g = {} and constant term 1, got {}".format(
                2 * self.genus, self.L))
        if self.class_number <= 0:
            raise CurveError("class number L(1) must be positive, got {}".format(self.class_number))
        if self.genus == 0 and self.field is None:
            self.field = field_for_order(self.q)

    @classmethod
    def rational(cls, q):
        """F_q(T)."""
        return cls(q=q, genus=0, L=[1], field=field_for_order(q))

    @classmethod
    def from_dict(cls, data):
        try:
            q, g, L = int(data['q']), int(data['g']), data['L']
        except (KeyError, TypeError, ValueError):
            raise CurveError("curve data needs 'q', 'g' and 'L', got keys {}".format(sorted(data)))
        counts = None
        if 'places' in data:
            by_degree = {int(p['deg']): int(p['count']) for p in data['places']}
            top = max(by_degree) if by_degree else 0
            counts = [by_degree.get(n, 0) for n in range(1, top + 1)]
        curve = cls(q=q, genus=g, L=L, place_counts=counts)
        for entry in data.get('ell_table', []):
            D = Divisor.from_json(entry['divisor'], curve)
            curve.ell_table[D] = int(entry['ell'])
        if counts is not None:
            derived = [curve.derived_place_count(n) for n in range(1, len(counts) + 1)]
            if derived != counts:
                raise CurveError("place counts {} disagree with the L-polynomial ({})".format(counts, derived))
        return curve

    @classmethod
    def load(cls, fname):
        with open(fname, 'r') as f:
            data = json.load(f)
        logger.info("Loaded curve data from {}".format(fname))
        return cls.from_dict(data)

    def to_dict(self):
        data = {'q': self.q, 'g': self.genus, 'L': list(self.L)}
        if self.place_counts is not None:
            data['places'] = [{'deg': n + 1, 'count': c} for n, c in enumerate(self.place_counts)]
        if self.ell_table:
            data['ell_table'] = [{'divisor': D.to_json(), 'ell': v} for D, v in self.ell_table.items()]
        return data

    @property
    def class_number(self):
        return sum(self.L)

    def point_counts(self, n_max):
        """N_n = #C(F_{q^n}) for n = 1..n_max, from the L-polynomial."""
        L = [Fraction(c) for c in self.L]
        dL = [Fraction(i * c) for i, c in enumerate(L)]  # T L'(T)
        ratio = _series_div(dL, L, n_max)
        return [self.q ** n + 1 + int(ratio[n]) for n in range(1, n_max + 1)]

    def derived_place_count(self, n):
        N = self.point_counts(n)
        total = sum(mobius_int(n // d) * N[d - 1] for d in sympy.divisors(n))
        assert total % n == 0, "place count for degree {} is not integral".format(n)
        return total // n

    def place_count(self, n):
        if self.place_counts is not None and n <= len(self.place_counts):
            return self.place_counts[n - 1]
        return self.derived_place_count(n)

    def places_up_to(self, n):
        if n < 1:
            return []
        if self.genus == 0:
            places = [Place.infinity()]
            places += [Place.finite(P) for P in enumerate_monic_irreducibles(self.field, n)]
            return places
        return [Place.abstract(d, i) for d in range(1, n + 1) for i in range(self.place_count(d))]


def Z_K(curve):
    """L_K(T) / ((1 - T)(1 - qT))."""
    return FactoredRational(curve.L, [(1, 1, 1), (curve.q, 1, 1)])


def q_power(q, e):
    """Exact q^e for rational e, when it is rational."""
    e = Fraction(e)
    base = Fraction(q) ** e.numerator
    if e.denominator == 1:
        return base
    root = _rational_root(base, e.denominator)
    if root is None:
        raise CurveError("q^({}) is irrational for q = {}".format(e, q))
    return root


def zeta_K_at(curve, s):
    s = Fraction(s)
    if s <= 1:
        raise CurveError("zeta_K diverges at s = {} (needs s > 1)".format(s))
    return Z_K(curve).evaluate(1 / q_power(curve.q, s))


def residue_constant(curve):
    q, g = curve.q, curve.genus
    value = curve.class_number * Fraction(q) ** (1 - g) / (q - 1)
    return ScaledConstant(value, -1, q=q)


def S_K(curve, a, b):
    """Finite correction sum over effective D of degree <= 2g - 2."""
    q, g = curve.q, curve.genus
    total = Fraction(0)
    for n in range(0, 2 * g - 1):
        for D in enumerate_effective(n, curve):
            total += q_power(q, -(a * ell(D, curve) + Fraction(b) * n))
            total -= q_power(q, a * (g - 1) - (a + Fraction(b)) * n)
    return total


def R_K(curve, a, b):
    """sum over D >= 0 of q^-(a l(D) + b deg D)."""
    b = Fraction(b)
    if a > 0:
        raise CurveError("R_K needs a <= 0, got a = {}".format(a))
    if a + b <= 1:
        raise CurveError("R_K diverges for a + b = {} <= 1".format(a + b))
    q, g = curve.q, curve.genus
    if g == 0:
        return Fraction(q) ** (-a) * zeta_K_at(curve, a + b)
    return q_power(q, a * (g - 1)) * zeta_K_at(curve, a + b) + S_K(curve, a, b)


def truncated_R_K(curve, a, b, max_degree):
    """Defining sum of R_K over deg D <= max_degree, with an exact bound on
    the omitted tail. Returns (partial_sum, tail_bound)."""
    q, g = curve.q, curve.genus
    b = Fraction(b)
    if a + b <= 1:
        raise CurveError("R_K diverges for a + b = {} <= 1".format(a + b))
    counts = Z_K(curve).expand(max_degree)
    total = Fraction(0)
    for n in range(max_degree + 1):
        if n <= 2 * g - 2:
            for D in enumerate_effective(n, curve):
                total += q_power(q, -(a * ell(D, curve) + b * n))
        else:
            total += counts[n] * q_power(q, -(a * (n + 1 - g) + b * n))
    x = q_power(q, 1 - a - b)
    n0 = max(max_degree + 1, 2 * g - 1)
    tail = curve.class_number * q_power(q, (1 - a) * (1 - g)) / (q - 1) * x ** n0 / (1 - x)
    return total, tail


def ntilde_f_series(curve, m, b):
    """Generating series of (Ntilde_m * F_b) summed per degree:
    q^m Z_K(q^m T) / Z_K(q^-b T)."""
    if curve.genus != 0:
        raise UnsupportedGenusError("closed form of the Ntilde*F series is genus 0 only")
    zk = Z_K(curve)
    return zk.substitute(Fraction(curve.q) ** m, 1) * Fraction(curve.q) ** m \
        / zk.substitute(Fraction(1, curve.q ** b), 1)


def effective_counts(curve, n_max):
    return [int(c) for c in Z_K(curve).expand(n_max)]


def require_genus_zero(curve, what):
    if curve.genus != 0:
        raise UnsupportedGenusError("{} needs the rational function field (genus 0), got genus {}".format(
            what, curve.genus))
