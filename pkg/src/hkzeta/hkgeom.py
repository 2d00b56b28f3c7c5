#!/usr/bin/env python3

"""Hirzebruch-Kleinschmidt varieties X_d(a_1..a_r) and line bundles on them.

Pic(X) = Z h + Z f, and a bundle is given by its coordinates (gamma, xi).
This module holds the Picard-lattice invariants, bigness, the abscissa
data A_L, B_L, a(L), b(L), and the decomposition of X into projective,
affine and good-open pieces.
"""

import enum
import logging
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

import numpy as np
from scipy import integrate

from .errors import NotBigError, NotPrimitiveError, HKZetaError

logger = logging.getLogger(__name__)

# split toric varieties
BETA = 1

_VARIETY_RE = re.compile(r'^\s*HK\(\s*r\s*=\s*(\d+)\s*,\s*t\s*=\s*(\d+)\s*;\s*a\s*=\s*([\d,\s]*)\)\s*$')


@dataclass(frozen=True)
class HKVariety:
    r: int
    t: int
    a: Tuple[int, ...]

    def __post_init__(self):
        a = tuple(int(x) for x in self.a)
        object.__setattr__(self, 'a', a)
        if self.r < 1 or self.t < 2:
            raise HKZetaError("need r >= 1 and t >= 2, got r={}, t={}".format(self.r, self.t))
        if len(a) != self.r:
            raise HKZetaError("need {} twists a_j, got {}".format(self.r, list(a)))
        if any(x < 0 for x in a) or list(a) != sorted(a):
            raise HKZetaError("twists must satisfy 0 <= a_1 <= ... <= a_r, got {}".format(list(a)))

    @classmethod
    def parse(cls, spec):
        m = _VARIETY_RE.match(spec)
        if m is None:
            raise HKZetaError("variety spec should look like 'HK(r=1,t=2;a=1)', not '{}'".format(spec))
        r, t = int(m.group(1)), int(m.group(2))
        a = tuple(int(x) for x in m.group(3).split(',') if x.strip())
        return cls(r, t, a)

    @classmethod
    def from_dict(cls, data):
        return cls(int(data['r']), int(data['t']), tuple(data['a']))

    def to_dict(self):
        return {'r': self.r, 't': self.t, 'a': list(self.a)}

    def __str__(self):
        return 'HK(r={},t={};a={})'.format(self.r, self.t, ','.join(str(x) for x in self.a))

    @property
    def d(self):
        return self.r + self.t - 1

    @property
    def a_abs(self):
        return sum(self.a)

    @property
    def a_r(self):
        return self.a[-1]

    @property
    def N_X(self):
        return sum(1 for x in self.a if x == self.a_r)

    @property
    def A(self):
        """a_r - a_{r - N_X}, with a_0 = 0."""
        below = self.a[self.r - self.N_X - 1] if self.r > self.N_X else 0
        return self.a_r - below

    @property
    def eta_X(self):
        return math.gcd(self.r + 1, self.t - self.a_abs)

    @property
    def e(self):
        """(r+1) a_r - |a|."""
        return (self.r + 1) * self.a_r - self.a_abs

    def truncated(self, r):
        return HKVariety(r, self.t, self.a[:r])

    def with_t(self, t):
        return HKVariety(self.r, t, self.a)


@dataclass(frozen=True)
class LineBundle:
    gamma: int
    xi: int

    @classmethod
    def parse(cls, spec):
        try:
            gamma, xi = (int(x) for x in spec.split(','))
        except ValueError:
            raise HKZetaError("bundle should look like 'gamma,xi', not '{}'".format(spec))
        return cls(gamma, xi)

    @property
    def eta(self):
        return math.gcd(self.gamma, self.xi)

    @property
    def is_primitive(self):
        return self.eta == 1

    def primitive(self):
        eta = self.eta
        if eta == 0:
            raise NotPrimitiveError("the zero bundle has no primitive part")
        return LineBundle(self.gamma // eta, self.xi // eta)

    def scaled(self, m):
        return LineBundle(m * self.gamma, m * self.xi)

    def c(self, X):
        return self.gamma * X.a_r + self.xi

    def to_list(self):
        return [self.gamma, self.xi]

    def __str__(self):
        return '({},{})'.format(self.gamma, self.xi)


def anticanonical(X):
    return LineBundle(X.r + 1, X.t - X.a_abs)


def is_big(L, X):
    return L.gamma > 0 and L.xi > -L.gamma * X.a_r


def require_big(L, X):
    if not is_big(L, X):
        raise NotBigError("bundle {} is not big on {}: L is big iff gamma > 0 and xi > -gamma*a_r".format(L, X))


def alpha_star(X):
    return Fraction(1, (X.r + 1) * ((X.r + 1) * X.a_r + X.t - X.a_abs))


def alpha_star_numeric(X):
    """alpha* as an integral of exp(-<-K, y>) over the dual effective cone."""
    k1, k2 = X.r + 1, X.t - X.a_abs
    value, _ = integrate.dblquad(lambda y1, y2: np.exp(-k1 * y1 - k2 * y2),
                                 0, np.inf, lambda y2: X.a_r * y2, lambda y2: np.inf)
    return value


class Position(enum.Enum):
    EQUAL_AB = 'EqualAB'
    A_LESS_B = 'ALessB'
    A_GREATER_B = 'AGreaterB'


@dataclass(frozen=True)
class Classification:
    position: Position
    A: Fraction
    B: Fraction
    a: Fraction
    b: int
    eta_L: int
    c_L: int
    N_X: int
    # non-real poles on the lines Re s = A_L and Re s = B_L
    secondary_poles: Tuple[int, int] = (0, 0)
    a_prime: Optional[Fraction] = None
    a_double_prime: Optional[Fraction] = None

    def to_dict(self):
        out = {'position': self.position.value, 'A_L': str(self.A), 'B_L': str(self.B),
               'a': str(self.a), 'b': self.b, 'eta_L': self.eta_L, 'c_L': self.c_L,
               'N_X': self.N_X, 'secondary_poles': list(self.secondary_poles)}
        if self.a_prime is not None:
            out['a_prime'] = str(self.a_prime)
        if self.a_double_prime is not None:
            out['a_double_prime'] = str(self.a_double_prime)
        return out


def classify(L, X):
    require_big(L, X)
    gamma, xi = L.gamma, L.xi
    c_L = L.c(X)
    A = Fraction(X.r + 1, gamma)
    B = Fraction(X.e + X.t, c_L)
    if A == B:
        position = Position.EQUAL_AB
    elif A < B:
        position = Position.A_LESS_B
    else:
        position = Position.A_GREATER_B

    a_prime = a_double_prime = None
    if X.a_r > 0:
        if position is Position.EQUAL_AB:
            a_prime = max(A - Fraction(1, gamma), B - Fraction(1, c_L))
        elif position is Position.A_LESS_B:
            a_prime = max(A, B - Fraction(1, c_L))
        else:
            a_prime = max(A - Fraction(1, gamma), B)
    else:
        if position is Position.EQUAL_AB:
            a_double_prime = max(Fraction(1, 2 * gamma), Fraction(1, 2 * xi))
        elif position is Position.A_LESS_B:
            a_double_prime = max(A, Fraction(1, 2 * xi))
        else:
            a_double_prime = max(Fraction(1, 2 * gamma), B)

    eta = L.eta
    secondary = (gamma // eta - 1, c_L // eta - 1)
    return Classification(position, A, B, max(A, B), 2 if A == B else 1, eta, c_L,
                          X.N_X, secondary, a_prime, a_double_prime)


@dataclass(frozen=True)
class Component:
    """A locally closed piece of X with the restriction of H_L on it.

    kind is 'projective' or 'affine' (dimension n, height H^exponent),
    'open' (good open subset of `variety` with `bundle`) or 'variety'
    (a smaller HK variety with `bundle`, decomposed further on demand).
    """

    kind: str
    n: int = 0
    exponent: int = 0
    variety: Optional[HKVariety] = None
    bundle: Optional[LineBundle] = None

    def label(self):
        if self.kind == 'projective':
            return 'P^{}[H^{}]'.format(self.n, self.exponent)
        if self.kind == 'affine':
            return 'A^{}[H^{}]'.format(self.n, self.exponent)
        if self.kind == 'open':
            return 'U[{};{}]'.format(self.variety, self.bundle)
        return 'X[{};{}]'.format(self.variety, self.bundle)

    def to_dict(self):
        out = {'kind': self.kind, 'label': self.label()}
        if self.kind in ('projective', 'affine'):
            out.update({'n': self.n, 'exponent': self.exponent})
        else:
            out.update({'variety': str(self.variety), 'bundle': self.bundle.to_list()})
        return out


def decompose(X, L=None, recursive=False):
    if L is None:
        L = anticanonical(X)
    gamma, xi = L.gamma, L.xi
    parts = []
    if X.a_r > 0:
        if X.r >= 2:
            parts.append(Component('variety', variety=X.truncated(X.r - 1), bundle=L))
        else:
            parts.append(Component('projective', n=X.t - 1, exponent=xi))
        parts.append(Component('affine', n=X.r, exponent=gamma))
        for t in range(X.t, 1, -1):
            parts.append(Component('open', variety=X.with_t(t), bundle=L))
    else:
        if X.r >= 2:
            parts.append(Component('variety', variety=X.truncated(X.r - 1), bundle=L))
        else:
            parts.append(Component('projective', n=X.t - 1, exponent=xi))
        parts.append(Component('open', variety=X, bundle=L))

    if recursive:
        flat = []
        for comp in parts:
            if comp.kind == 'variety':
                flat.extend(decompose(comp.variety, comp.bundle, recursive=True))
            else:
                flat.append(comp)
        parts = flat
    logger.debug("decomposition of %s: %s", X, [c.label() for c in parts])
    return parts
