#!/usr/bin/env python3

"""Places, divisors and the divisor calculus of the counting arguments:
Riemann-Roch dimensions, the divisor Moebius function, convolution over
sub-divisor lattices and the counting functions N, Ntilde and F_m.
"""

import itertools
import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import DivisorError, MissingCurveDataError
from .ffq import PolyFq, factor

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Place:
    kind: str
    degree: int
    poly: Optional[PolyFq] = None
    index: int = 0

    @classmethod
    def infinity(cls):
        return cls('inf', 1)

    @classmethod
    def finite(cls, poly):
        assert poly.is_monic and poly.degree >= 1, \
            "finite places are monic irreducibles, got {}".format(poly)
        return cls('finite', poly.degree, poly)

    @classmethod
    def abstract(cls, degree, index):
        return cls('abstract', degree, None, index)

    @property
    def is_infinity(self):
        return self.kind == 'inf'

    def sort_key(self):
        if self.kind == 'inf':
            return (0, 0, ())
        if self.kind == 'finite':
            return (1, self.degree, self.poly.key()[1])
        return (1, self.degree, (self.index,))

    def label(self):
        if self.kind == 'inf':
            return 'inf'
        if self.kind == 'finite':
            return str(self.poly)
        return 'P{}.{}'.format(self.degree, self.index)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __repr__(self):
        return 'Place({})'.format(self.label())


class Divisor:
    """Sparse integer combination of places."""

    __slots__ = ('_coeffs', '_hash')

    def __init__(self, coeffs=None):
        if coeffs is None:
            coeffs = {}
        self._coeffs = {v: int(c) for v, c in coeffs.items() if c != 0}
        self._hash = None

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def from_place(cls, place, n=1):
        return cls({place: n})

    def coeff(self, place):
        return self._coeffs.get(place, 0)

    def items(self):
        return sorted(self._coeffs.items(), key=lambda vc: vc[0].sort_key())

    def support(self):
        return [v for v, _ in self.items()]

    @property
    def degree(self):
        return sum(v.degree * c for v, c in self._coeffs.items())

    @property
    def is_zero(self):
        return not self._coeffs

    @property
    def is_effective(self):
        return all(c > 0 for c in self._coeffs.values())

    def __add__(self, other):
        out = dict(self._coeffs)
        for v, c in other._coeffs.items():
            out[v] = out.get(v, 0) + c
        return Divisor(out)

    def __neg__(self):
        return Divisor({v: -c for v, c in self._coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, n):
        return Divisor({v: n * c for v, c in self._coeffs.items()})

    __rmul__ = __mul__

    def __le__(self, other):
        return (other - self).is_effective

    def __ge__(self, other):
        return other <= self

    def __eq__(self, other):
        return isinstance(other, Divisor) and self._coeffs == other._coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._coeffs.items()))
        return self._hash

    def floor_div(self, n):
        """Coefficientwise floor of D/n."""
        return Divisor({v: c // n for v, c in self._coeffs.items()})

    def sup(self, other):
        return sup_divisors([self, other])

    def sub_divisors(self):
        """Every 0 <= D' <= D in mixed-radix order (first place most significant)."""
        if not self.is_effective:
            raise DivisorError("sub-divisor lattice needs an effective divisor, not {}".format(self))
        items = self.items()
        places = [v for v, _ in items]
        shape = tuple(c + 1 for _, c in items)
        for idx in np.ndindex(*shape):
            yield Divisor({v: int(i) for v, i in zip(places, idx)})

    def to_json(self):
        return [{'place': v.label(), 'coeff': c} for v, c in self.items()]

    @classmethod
    def from_json(cls, data, curve):
        coeffs = {}
        for entry in data:
            try:
                label, c = entry['place'], int(entry['coeff'])
            except (KeyError, TypeError):
                raise DivisorError("divisor entries need 'place' and 'coeff', got '{}'".format(entry))
            place = parse_place(label, curve)
            coeffs[place] = coeffs.get(place, 0) + c
        return cls(coeffs)

    def __repr__(self):
        if self.is_zero:
            return 'Divisor(0)'
        return 'Divisor({})'.format(' + '.join('{}*[{}]'.format(c, v.label())
                                              for v, c in self.items()))


def parse_place(label, curve):
    if label == 'inf':
        return Place.infinity()
    m = re.match(r'^P(\d+)\.(\d+)$', label)
    if m:
        return Place.abstract(int(m.group(1)), int(m.group(2)))
    if curve.field is None:
        raise DivisorError("place '{}' needs a genus-0 curve".format(label))
    poly = PolyFq.parse(curve.field, label)
    if not poly.is_monic or len(factor(poly)) != 1 or factor(poly)[0][1] != 1:
        raise DivisorError("place '{}' is not a monic irreducible".format(label))
    return Place.finite(poly)


def infinite_divisor(x):
    """Pole divisor (x)_inf of a normalized rational function; (0)_inf = 0."""
    if x.is_zero:
        return Divisor.zero()
    coeffs = {}
    if x.den.degree > 0:
        for P, mult in factor(x.den):
            coeffs[Place.finite(P)] = mult
    excess = x.num.degree - x.den.degree
    if excess > 0:
        coeffs[Place.infinity()] = excess
    return Divisor(coeffs)


def sup_divisors(divisors):
    divisors = list(divisors)
    if not divisors:
        raise DivisorError("sup of an empty list of divisors")
    places = set()
    for D in divisors:
        places.update(D._coeffs)
    return Divisor({v: max(D.coeff(v) for D in divisors) for v in places})


def ell(D, curve):
    """Riemann-Roch dimension l(D)."""
    deg = D.degree
    if deg < 0:
        return 0
    g = curve.genus
    if g == 0:
        return deg + 1
    if deg > 2 * g - 2:
        return deg + 1 - g
    if D.is_zero:
        return 1
    try:
        return curve.ell_table[D]
    except KeyError:
        raise MissingCurveDataError("no l-value supplied for {} (genus {})".format(D, g))


def _effective_dicts(places, n, start):
    if n == 0:
        yield {}
        return
    for i in range(start, len(places)):
        f = places[i].degree
        if f > n:
            break
        for mult in range(1, n // f + 1):
            for rest in _effective_dicts(places, n - mult * f, i + 1):
                out = {places[i]: mult}
                out.update(rest)
                yield out


def enumerate_effective(n, curve):
    """All effective divisors of degree exactly n."""
    if n < 0:
        raise DivisorError("degree must be nonnegative, not '{}'".format(n))
    cache = curve.cache.setdefault('effective', {})
    if n not in cache:
        places = sorted(curve.places_up_to(n), key=lambda v: (v.degree, v.sort_key()))
        cache[n] = [Divisor(c) for c in _effective_dicts(places, n, 0)]
    return cache[n]


def unit(D):
    return 1 if D.is_zero else 0


def one(D):
    return 1


def moebius(D):
    if not D.is_effective:
        raise DivisorError("moebius needs an effective divisor, not {}".format(D))
    total = 0
    for c in D._coeffs.values():
        if c > 1:
            return 0
        total += c
    return -1 if total % 2 else 1


def convolve(f, g, D):
    """(f * g)(D) = sum over 0 <= D' <= D of f(D') g(D - D')."""
    return sum((f(E) * g(D - E) for E in D.sub_divisors()), 0)


def N_m_n(m, n, D, curve):
    """Number of m-tuples x with n sup (x_i)_inf <= D."""
    if m == 0:
        return 1
    return curve.q ** (m * ell(D.floor_div(n), curve))


def Ntilde(m, D, curve):
    """Number of m-tuples x with sup (x_i)_inf = D, i.e. (N_m^1 * mu)(D)."""
    if m == 0:
        return unit(D)
    if not D.is_effective:
        raise DivisorError("Ntilde needs an effective divisor, not {}".format(D))
    # mu vanishes off square-free sub-divisors
    items = D.items()
    total = 0
    for choice in itertools.product((0, 1), repeat=len(items)):
        S = Divisor({v: e for (v, _), e in zip(items, choice)})
        sign = -1 if sum(choice) % 2 else 1
        total += sign * N_m_n(m, 1, D - S, curve)
    return total


def F_m(m, D, curve):
    if m == 0:
        return unit(D)
    value = Fraction(1)
    for v, c in D._coeffs.items():
        if c > 0:
            value *= 1 - Fraction(1, curve.q ** (m * v.degree))
    return value
