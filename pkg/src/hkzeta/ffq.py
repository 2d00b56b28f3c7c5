#!/usr/bin/env python3

"""Finite fields F_q, univariate polynomials over F_q and normalized
rational functions in F_q(T).

Field elements are plain ints. For q = p the int is the residue; for
q = p^k it encodes the polynomial sum(c_i u^i) in base p, low digit first.
All arithmetic goes through tables built once per field.
"""

import logging
import re
from functools import lru_cache

import numpy as np
import sympy

from .errors import FieldError

logger = logging.getLogger(__name__)


def mobius_int(n):
    """Classical Moebius function on positive integers."""
    if n < 1:
        raise FieldError("mobius is defined on positive integers, not '{}'".format(n))
    exps = sympy.factorint(n)
    if any(e > 1 for e in exps.values()):
        return 0
    return -1 if len(exps) % 2 else 1


def count_irreducibles(q, n):
    """Number of monic irreducibles of degree n over F_q (necklace count)."""
    total = sum(mobius_int(d) * q ** (n // d) for d in sympy.divisors(n))
    return total // n


class FqField:

    def __init__(self, p, k=1):
        if not sympy.isprime(p):
            raise FieldError("field characteristic must be prime, not '{}'".format(p))
        if k < 1:
            raise FieldError("extension degree must be positive, not '{}'".format(k))
        self.p = int(p)
        self.k = int(k)
        self.q = self.p ** self.k
        self._irreducibles = {}

        if self.k == 1:
            self.modulus = None
            self._build_prime_tables()
        else:
            base = get_field(self.p, 1)
            self.modulus = enumerate_monic_irreducibles(base, self.k, exact=True)[0]
            self._build_extension_tables()
        logger.debug("built tables for F_%d (modulus %s)", self.q, self.modulus)

    def _build_prime_tables(self):
        r = np.arange(self.p, dtype=np.int64)
        self.add_table = (np.add.outer(r, r) % self.p).tolist()
        self.mul_table = (np.multiply.outer(r, r) % self.p).tolist()
        self.neg_table = ((-r) % self.p).tolist()
        self._finish_inverse()

    def _build_extension_tables(self):
        p, k, q = self.p, self.k, self.q
        powers = p ** np.arange(k, dtype=np.int64)
        digits = (np.arange(q, dtype=np.int64)[:, None] // powers[None, :]) % p
        self._digits = digits.tolist()

        summed = (digits[:, None, :] + digits[None, :, :]) % p
        self.add_table = (summed @ powers).tolist()
        self.neg_table = (((-digits) % p) @ powers).tolist()

        # reduce u^k with the modulus: u^k = -sum(m_i u^i)
        mod = list(self.modulus.coeffs)
        mul = [[0] * q for _ in range(q)]
        for a in range(q):
            da = self._digits[a]
            for b in range(a, q):
                db = self._digits[b]
                prod = [0] * (2 * k - 1)
                for i, ca in enumerate(da):
                    if ca:
                        for j, cb in enumerate(db):
                            prod[i + j] = (prod[i + j] + ca * cb) % p
                for deg in range(2 * k - 2, k - 1, -1):
                    c = prod[deg]
                    if c:
                        prod[deg] = 0
                        for i in range(k):
                            prod[deg - k + i] = (prod[deg - k + i] - c * mod[i]) % p
                value = int(sum(prod[i] * int(powers[i]) for i in range(k)))
                mul[a][b] = value
                mul[b][a] = value
        self.mul_table = mul
        self._finish_inverse()

    def _finish_inverse(self):
        inv = [None] * self.q
        for a in range(1, self.q):
            row = self.mul_table[a]
            inv[a] = row.index(1)
        self.inv_table = inv

    # element arithmetic

    def add(self, a, b):
        return self.add_table[a][b]

    def sub(self, a, b):
        return self.add_table[a][self.neg_table[b]]

    def mul(self, a, b):
        return self.mul_table[a][b]

    def neg(self, a):
        return self.neg_table[a]

    def inv(self, a):
        if a == 0:
            raise FieldError("inversion of zero in F_{}".format(self.q))
        return self.inv_table[a]

    def elements(self):
        return range(self.q)

    def format_element(self, e):
        if self.k == 1:
            return str(e)
        terms = []
        for i in range(self.k - 1, -1, -1):
            c = self._digits[e][i]
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                mono = 'u' if i == 1 else 'u^{}'.format(i)
                terms.append(mono if c == 1 else '{}*{}'.format(c, mono))
        return '+'.join(terms) if terms else '0'

    def parse_element(self, s):
        s = s.strip()
        if s.startswith('(') and s.endswith(')'):
            s = s[1:-1]
        if self.k == 1:
            try:
                return int(s) % self.p
            except ValueError:
                raise FieldError("invalid element of F_{}: '{}'".format(self.q, s))
        digits = [0] * self.k
        for sign, term in _split_terms(s):
            m = re.match(r'^(?:(\d+)\*?)?(u(?:\^(\d+))?)?$', term)
            if m is None or (m.group(1) is None and m.group(2) is None):
                raise FieldError("invalid element of F_{}: '{}'".format(self.q, s))
            c = int(m.group(1)) if m.group(1) is not None else 1
            deg = 0 if m.group(2) is None else (int(m.group(3)) if m.group(3) else 1)
            if deg >= self.k:
                raise FieldError("u-degree too large in '{}'".format(s))
            digits[deg] = (digits[deg] + sign * c) % self.p
        return int(sum(d * self.p ** i for i, d in enumerate(digits)))

    def __eq__(self, other):
        return isinstance(other, FqField) and (self.p, self.k) == (other.p, other.k)

    def __hash__(self):
        return hash(('FqField', self.p, self.k))

    def __repr__(self):
        return 'FqField(p={}, k={})'.format(self.p, self.k)


@lru_cache(maxsize=None)
def get_field(p, k=1):
    return FqField(p, k)


def field_for_order(q):
    exps = sympy.factorint(q)
    if len(exps) != 1:
        raise FieldError("field order must be a prime power, not '{}'".format(q))
    (p, k), = exps.items()
    return get_field(int(p), int(k))


def field_arith(field, a, b=None, op='add'):
    if op == 'add':
        return field.add(a, b)
    elif op == 'mul':
        return field.mul(a, b)
    elif op == 'neg':
        return field.neg(a)
    elif op == 'inv':
        return field.inv(a)
    else:
        raise FieldError("op should be one of 'add', 'mul', 'neg', 'inv', not '{}'".format(op))


def _split_terms(s):
    """Split a sum at top-level +/- signs into (sign, term) pairs."""
    s = s.replace(' ', '')
    out = []
    depth = 0
    start = 0
    sign = 1
    for i, ch in enumerate(s):
        if ch == '(':
            depth += 1
        elif ch == ')':
            depth -= 1
        elif ch in '+-' and depth == 0 and i > 0 and s[i - 1] not in '^*':
            out.append((sign, s[start:i]))
            sign = 1 if ch == '+' else -1
            start = i + 1
        elif ch == '-' and i == 0:
            sign = -1
            start = 1
    out.append((sign, s[start:]))
    return [(sg, t) for sg, t in out if t != '']


class PolyFq:
    """Polynomial over F_q, coefficients stored low degree first."""

    __slots__ = ('field', 'coeffs')

    def __init__(self, field, coeffs):
        coeffs = list(coeffs)
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        self.field = field
        self.coeffs = tuple(coeffs)

    @classmethod
    def zero(cls, field):
        return cls(field, ())

    @classmethod
    def one(cls, field):
        return cls(field, (1,))

    @classmethod
    def T(cls, field):
        return cls(field, (0, 1))

    @classmethod
    def constant(cls, field, c):
        return cls(field, (c,))

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def is_zero(self):
        return not self.coeffs

    @property
    def leading(self):
        return self.coeffs[-1] if self.coeffs else 0

    @property
    def is_monic(self):
        return self.leading == 1

    def key(self):
        return (self.degree, tuple(reversed(self.coeffs)))

    def __add__(self, other):
        add = self.field.add_table
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = add[out[i]][c]
        return PolyFq(self.field, out)

    def __neg__(self):
        neg = self.field.neg_table
        return PolyFq(self.field, [neg[c] for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        if self.is_zero or other.is_zero:
            return PolyFq.zero(self.field)
        add, mul = self.field.add_table, self.field.mul_table
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            row = mul[a]
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] = add[out[i + j]][row[b]]
        return PolyFq(self.field, out)

    def __pow__(self, n):
        result = PolyFq.one(self.field)
        base = self
        while n > 0:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c):
        row = self.field.mul_table[c]
        return PolyFq(self.field, [row[x] for x in self.coeffs])

    def monic(self):
        if self.is_zero:
            return self
        return self.scale(self.field.inv(self.leading))

    def __divmod__(self, other):
        if other.is_zero:
            raise FieldError("polynomial division by zero")
        field = self.field
        add, mul, neg = field.add_table, field.mul_table, field.neg_table
        inv_lead = field.inv(other.leading)
        rem = list(self.coeffs)
        db = other.degree
        quot = [0] * max(len(rem) - db, 0)
        for i in range(len(rem) - 1, db - 1, -1):
            c = rem[i]
            if c == 0:
                continue
            factor = mul[c][inv_lead]
            quot[i - db] = factor
            nf = neg[factor]
            row = mul[nf]
            for j, b in enumerate(other.coeffs):
                rem[i - db + j] = add[rem[i - db + j]][row[b]]
        return PolyFq(field, quot), PolyFq(field, rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def divides(self, other):
        return (other % self).is_zero

    def __eq__(self, other):
        return (isinstance(other, PolyFq) and self.field == other.field
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.field.q, self.coeffs))

    def __lt__(self, other):
        return self.key() < other.key()

    def __repr__(self):
        return 'PolyFq({})'.format(self)

    def __str__(self):
        if self.is_zero:
            return '0'
        fmt = self.field.format_element
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            cs = fmt(c)
            if self.field.k > 1 and ('+' in cs or '*' in cs):
                cs = '({})'.format(cs)
            if i == 0:
                terms.append(cs)
            else:
                mono = 'T' if i == 1 else 'T^{}'.format(i)
                terms.append(mono if c == 1 else '{}*{}'.format(cs, mono))
        return '+'.join(terms)

    @classmethod
    def parse(cls, field, s):
        coeffs = {}
        for sign, term in _split_terms(s):
            m = re.match(r'^(?:(\([^()]*\)|\d+|\d*\*?u(?:\^\d+)?)\*?)?(T(?:\^(\d+))?)?$', term)
            if m is None or (m.group(1) is None and m.group(2) is None):
                raise FieldError("invalid polynomial string '{}'".format(s))
            c = field.parse_element(m.group(1)) if m.group(1) is not None else 1
            if sign < 0:
                c = field.neg(c)
            deg = 0 if m.group(2) is None else (int(m.group(3)) if m.group(3) else 1)
            coeffs[deg] = field.add(coeffs.get(deg, 0), c)
        top = max(coeffs) if coeffs else -1
        return cls(field, [coeffs.get(i, 0) for i in range(top + 1)])


def poly_gcd(f, g):
    """Monic gcd of f and g (zero when both are zero)."""
    a, b = f, g
    while not b.is_zero:
        a, b = b, a % b
    return a.monic()


def poly_lcm(f, g):
    if f.is_zero or g.is_zero:
        return PolyFq.zero(f.field)
    return ((f * g) // poly_gcd(f, g)).monic()


def monic_polys(field, degree):
    """All monic polynomials of exact degree, in lexicographic order."""
    q = field.q
    for code in range(q ** degree):
        digits = []
        for _ in range(degree):
            code, c = divmod(code, q)
            digits.append(c)
        yield PolyFq(field, digits + [1])


def all_polys(field, max_degree):
    """Zero followed by every nonzero polynomial of degree <= max_degree."""
    yield PolyFq.zero(field)
    for deg in range(max_degree + 1):
        for lead in range(1, field.q):
            for mono in monic_polys(field, deg):
                yield mono.scale(lead)


def _irreducibles_of_degree(field, n):
    cache = field._irreducibles
    if n in cache:
        return cache[n]
    small = [P for d in range(1, n // 2 + 1) for P in _irreducibles_of_degree(field, d)]
    found = []
    for f in monic_polys(field, n):
        if all(not P.divides(f) for P in small):
            found.append(f)
    assert len(found) == count_irreducibles(field.q, n), \
        "irreducible count mismatch in degree {}".format(n)
    cache[n] = found
    return found


def enumerate_monic_irreducibles(field, B, exact=False):
    """All monic irreducibles of degree <= B (or exactly B when exact=True),
    ordered by degree then lexicographically."""
    if B < 1:
        raise FieldError("degree bound must be at least 1, not '{}'".format(B))
    if exact:
        return list(_irreducibles_of_degree(field, B))
    return [P for n in range(1, B + 1) for P in _irreducibles_of_degree(field, n)]


@lru_cache(maxsize=None)
def factor(f):
    """Factor f into (monic irreducible, multiplicity) pairs."""
    if f.is_zero:
        raise FieldError("cannot factor the zero polynomial")
    g = f.monic()
    out = []
    d = 1
    while 2 * d <= g.degree:
        for P in _irreducibles_of_degree(g.field, d):
            mult = 0
            while True:
                quo, rem = divmod(g, P)
                if not rem.is_zero:
                    break
                g = quo
                mult += 1
            if mult:
                out.append((P, mult))
        d += 1
    if g.degree >= 1:
        out.append((g, 1))
    out.sort(key=lambda pm: pm[0].key())
    return tuple(out)


class RationalFunction:
    """Element num/den of F_q(T) with den monic and gcd(num, den) = 1."""

    __slots__ = ('num', 'den')

    def __init__(self, num, den=None):
        field = num.field
        if den is None:
            den = PolyFq.one(field)
        if den.is_zero:
            raise FieldError("rational function with zero denominator")
        if num.is_zero:
            num, den = PolyFq.zero(field), PolyFq.one(field)
        else:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num, den = num // g, den // g
            c = field.inv(den.leading)
            num, den = num.scale(c), den.scale(c)
        self.num = num
        self.den = den

    @classmethod
    def _normalized(cls, num, den):
        obj = cls.__new__(cls)
        obj.num = num
        obj.den = den
        return obj

    @classmethod
    def constant(cls, field, c):
        return cls(PolyFq.constant(field, c))

    @classmethod
    def from_poly(cls, f):
        return cls(f)

    @property
    def field(self):
        return self.num.field

    @property
    def is_zero(self):
        return self.num.is_zero

    @property
    def pole_degree(self):
        if self.is_zero:
            return 0
        return max(self.num.degree, self.den.degree)

    def __add__(self, other):
        return RationalFunction(self.num * other.den + other.num * self.den,
                                self.den * other.den)

    def __neg__(self):
        return RationalFunction._normalized(-self.num, self.den)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        return RationalFunction(self.num * other.num, self.den * other.den)

    def __truediv__(self, other):
        if other.is_zero:
            raise FieldError("division by the zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __eq__(self, other):
        return (isinstance(other, RationalFunction) and self.num == other.num
                and self.den == other.den)

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return 'RationalFunction({})'.format(self)

    def __str__(self):
        if self.den.degree == 0:
            return str(self.num)
        return '({})/({})'.format(self.num, self.den)


def enumerate_rational_functions(field, B):
    """Stream every x in F_q(T) with deg (x)_inf <= B exactly once."""
    if B < 0:
        raise FieldError("pole-degree bound must be nonnegative, not '{}'".format(B))
    numerators = list(all_polys(field, B))
    for dd in range(B + 1):
        for den in monic_polys(field, dd):
            for num in numerators:
                if num.is_zero:
                    if dd == 0:
                        yield RationalFunction._normalized(num, den)
                    continue
                if dd == 0 or poly_gcd(num, den).degree == 0:
                    yield RationalFunction._normalized(num, den)
