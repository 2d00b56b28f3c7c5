#!/usr/bin/env python3

"""Closed-form height zeta functions as rational functions of T = q^-s.

The open-set series Z_{U,L} is assembled from Z_K (plus the finite
correction polynomials P_1, P_2, P_3 in positive genus). Products of
projective zeta functions cover a_r = 0, and the full variety is the sum
over its decomposition. Leading constants come both from the closed
formulas and from the exact principal coefficient of Z at the real pole.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional

from .curve import R_K, Z_K, ntilde_f_series, q_power, require_genus_zero, zeta_K_at
from .divisor import N_m_n, Ntilde, enumerate_effective
from .errors import CurveError, InfiniteCountError, NotPrimitiveError, SeriesError, UnsupportedError
from .hkgeom import Position, anticanonical, classify, decompose, require_big
from .series import FactoredRational, ScaledConstant, asymptotics

logger = logging.getLogger(__name__)


@dataclass
class ZetaResult:
    Z: FactoredRational
    variety: object
    bundle: object
    route: str
    classification: object = None
    constants: Dict[str, Optional[ScaledConstant]] = field(default_factory=dict)
    eta: int = 1
    target: str = 'open'

    def coefficients(self, N):
        out = []
        for c in self.Z.expand(N):
            assert c.denominator == 1, "non-integral coefficient {} in {}".format(c, self.Z)
            out.append(int(c))
        return out

    def asymptotics(self):
        return asymptotics(self.Z, self.eta)

    def to_dict(self, N=None):
        data = {'variety': str(self.variety), 'bundle': self.bundle.to_list(),
                'route': self.route, 'target': self.target, 'eta': self.eta,
                'Z': self.Z.to_json(),
                'constants': {k: (None if v is None else v.to_json())
                              for k, v in sorted(self.constants.items())}}
        if self.classification is not None:
            data['classification'] = self.classification.to_dict()
        if N is not None:
            data['coefficients'] = self.coefficients(N)
        return data


def _zk(curve, c, m):
    """Z_K(c T^m)."""
    return Z_K(curve).substitute(Fraction(c), m)


def _polynomial(terms):
    if not terms:
        return FactoredRational.polynomial([])
    coeffs = [Fraction(0)] * (max(terms) + 1)
    for n, c in terms.items():
        coeffs[n] += c
    return FactoredRational.polynomial(coeffs)


# projective spaces

def projective_count_formula(n, d, q):
    """#{P in P^n(F_q(T)) : H(P) = q^d} from the polynomial Moebius count."""
    if d < 0:
        return 0

    def G(e):
        # coprime (n+1)-tuples of degree <= e
        if e < 0:
            return 0
        return q ** ((n + 1) * (e + 1)) - 1 - q * (q ** ((n + 1) * e) - 1)

    exact = G(d) - G(d - 1)
    assert exact % (q - 1) == 0, "tuple count {} not divisible by q-1".format(exact)
    return exact // (q - 1)


def z_Pn(n, curve):
    require_genus_zero(curve, "the projective height zeta function")
    if n == 0:
        return FactoredRational.one()
    q = Fraction(curve.q)
    Q = q ** (n + 1)
    a = (Q - q) / (q - 1)
    return FactoredRational([a + 1, -(a + Q)], [(Q, 1, 1)])


def z_affine(n, curve):
    """Z_{P^n} - Z_{P^(n-1)}: the points of A^n = P^n minus a hyperplane."""
    if n == 0:
        return FactoredRational.one()
    return z_Pn(n, curve) - z_Pn(n - 1, curve)


def wan_constant(n, curve):
    """Residue of zeta_{P^n} at s = n + 1."""
    q, g = curve.q, curve.genus
    value = curve.class_number * Fraction(q) ** ((n + 1) * (1 - g)) \
        / (zeta_K_at(curve, n + 1) * (q - 1))
    return ScaledConstant(value, -1, q=q)


# the good open subset

def correction_polynomials(X, L, curve):
    """P_1, P_2, P_3 from their defining sums over deg D <= 2g - 2."""
    g = curve.genus
    if g == 0:
        zero = FactoredRational.polynomial([])
        return zero, zero, zero
    q = Fraction(curve.q)
    top = 2 * g - 2
    r, t, a = X.r, X.t, (0,) + X.a
    NX, E, A = X.N_X, X.e, X.A
    gamma, c = L.gamma, L.c(X)

    def N(D):
        return N_m_n(1, 1, D, curve)

    P1, P2, P3 = {}, {}, {}
    for n in range(top + 1):
        for D in enumerate_effective(n, curve):
            coef = Fraction(N(D)) ** (NX - 1) - q ** ((1 - g + n) * (NX - 1))
            P2[gamma * n] = P2.get(gamma * n, 0) + coef * q ** ((r + 1 - NX) * n)
            coef = Fraction(N(D)) ** (t - 1) - q ** ((t - 1) * (1 - g + n))
            P3[c * n] = P3.get(c * n, 0) + coef * q ** (E * n)

    for n1 in range(top + 1):
        for n2 in range(top + 1):
            if n1 + A * n2 > top:
                continue
            for D in enumerate_effective(n1, curve):
                for D2 in enumerate_effective(n2, curve):
                    exact = Fraction(1)
                    generic = q ** ((r + 1 - NX) * (1 - g))
                    for j in range(r - NX + 1):
                        exact *= N(D + (a[r] - a[j]) * D2)
                        generic *= q ** (n1 + (a[r] - a[j]) * n2)
                    term = Ntilde(t - 1, D2, curve) * Fraction(N(D)) ** (NX - 1) * (exact - generic)
                    key = gamma * n1 + c * n2
                    P1[key] = P1.get(key, 0) + term
    logger.debug("correction polynomials for %s, L=%s: %s %s %s", X, L, P1, P2, P3)
    return _polynomial(P1), _polynomial(P2), _polynomial(P3)


def Z_UL(X, L, curve):
    require_big(L, X)
    if X.a_r == 0:
        raise UnsupportedError("{} has a_r = 0; use Z_XL_product".format(X))
    if not L.is_primitive:
        raise NotPrimitiveError("Z_UL needs a primitive bundle, got {} (eta = {})".format(L, L.eta))
    q, g = Fraction(curve.q), curve.genus
    r, t, d, NX, E = X.r, X.t, X.d, X.N_X, X.e
    gamma, c = L.gamma, L.c(X)

    top = _zk(curve, q ** (E + t - 1), c)
    fibre = _zk(curve, q ** r, gamma)
    bottom = _zk(curve, q ** E, c) * _zk(curve, 1, gamma)
    num = top * fibre * q ** (d * (1 - g))
    if g > 0:
        P1, P2, P3 = correction_polynomials(X, L, curve)
        num = num + P3 * fibre * q ** (r * (1 - g)) \
            + P2 * top * q ** ((d + 1 - NX) * (1 - g)) \
            + P3 * P2 * q ** ((r + 1 - NX) * (1 - g)) \
            + P1 * _zk(curve, q ** E, c)
    Z = num / bottom
    logger.info("Z_UL for %s, L=%s: %r", X, L, Z)
    result = ZetaResult(Z, X, L, 'open', classify(L, X))
    result.constants = leading_constants(result, X, L, curve)
    return result


def z_U_product(X, L, curve):
    """a_r = 0: U = A^r x P^(t-1) with height H^gamma x H^xi."""
    return z_affine(X.r, curve).substitute(1, L.gamma) * z_Pn(X.t - 1, curve).substitute(1, L.xi)


def Z_XL_product(X, L, curve):
    if X.a_r != 0:
        raise UnsupportedError("{} has a_r > 0; the product formula needs a_r = 0".format(X))
    require_big(L, X)
    require_genus_zero(curve, "the a_r = 0 product formula")
    Z = z_Pn(X.r, curve).substitute(1, L.gamma) * z_Pn(X.t - 1, curve).substitute(1, L.xi)
    result = ZetaResult(Z, X, L, 'product', classify(L, X), eta=L.eta, target='variety')
    result.constants = leading_constants(result, X, L, curve)
    return result


def _component_zeta(comp, curve):
    if comp.kind in ('projective', 'affine'):
        if comp.exponent <= 0:
            raise InfiniteCountError("{} has no height zeta function (exponent {})".format(
                comp.label(), comp.exponent))
        base = z_Pn(comp.n, curve) if comp.kind == 'projective' else z_affine(comp.n, curve)
        return base.substitute(1, comp.exponent)
    if comp.kind == 'open':
        return zeta_for_bundle(comp.variety, comp.bundle, curve).Z
    raise UnsupportedError("component kind '{}' has no direct zeta function".format(comp.kind))


def variety_zeta(X, L, curve):
    """zeta_{X,L} as the sum over the pieces of X."""
    require_genus_zero(curve, "the full-variety zeta function")
    total = None
    for comp in decompose(X, L, recursive=True):
        Z = _component_zeta(comp, curve)
        total = Z if total is None else total + Z
    return total


def zeta_for_bundle(X, L, curve, target='open'):
    """Height zeta function of U (target='open') or X (target='variety') for any big L."""
    require_big(L, X)
    if target == 'variety':
        if X.a_r == 0:
            return Z_XL_product(X, L, curve)
        logger.info("Summing component zeta functions of %s", X)
        Z, route = variety_zeta(X, L, curve), 'variety'
    elif target != 'open':
        raise UnsupportedError("target should be 'open' or 'variety', not '{}'".format(target))
    elif X.a_r == 0:
        logger.info("Product route for %s", X)
        Z, route = z_U_product(X, L, curve), 'product'
    else:
        Z, route = Z_UL(X, L.primitive(), curve).Z.substitute(1, L.eta), 'open'
    result = ZetaResult(Z, X, L, route, classify(L, X), eta=L.eta, target=target)
    result.constants = leading_constants(result, X, L, curve)
    return result


def anticanonical_zeta(X, curve):
    result = zeta_for_bundle(X, anticanonical(X), curve)
    C = anticanonical_constant(X, curve)
    result.constants['anticanonical'] = C
    result.constants['C_1'] = ScaledConstant(C.value * X.eta_X, 0, C.q_power, q=curve.q)
    return result


# constants

def anticanonical_constant(X, curve):
    q, g, h = curve.q, curve.genus, curve.class_number
    value = Fraction(q) ** ((X.d + 2) * (1 - g)) * h ** 2 / (
        zeta_K_at(curve, X.t) * zeta_K_at(curve, X.r + 1) * (X.e + X.t) * (X.r + 1) * (q - 1) ** 2)
    return ScaledConstant(value, -2, q=q)


def extracted_constant(Z, a, b, q):
    """lim (s - a)^b zeta(s) read off Z(T) at T = q^-a, or None when q^a
    is irrational or the pole there is not of order b."""
    try:
        base = q_power(q, a)
    except CurveError:
        return None
    if Z.pole_order_at(base) != b:
        return None
    return ScaledConstant(Z.principal_coefficient(base, b), -b, q=q)


def formula_constant(X, L, curve, target='open'):
    """The closed-form leading constant of the position of L, or None when it
    involves zeta values at points where q^-s is irrational."""
    cls = classify(L, X)
    q, g, h = curve.q, curve.genus, curve.class_number
    Q = Fraction(q)
    r, t, d, NX, E = X.r, X.t, X.d, X.N_X, X.e
    gamma, xi, c = L.gamma, L.xi, cls.c_L
    try:
        if cls.position is Position.EQUAL_AB:
            value = Q ** ((d + 2) * (1 - g)) * h ** 2 / (
                zeta_K_at(curve, t) * zeta_K_at(curve, r + 1) * c * gamma * (q - 1) ** 2)
            return ScaledConstant(value, -2, q=q)
        if X.a_r > 0:
            if cls.position is Position.A_LESS_B:
                w = cls.B
                value = Q ** ((d + 2 - NX) * (1 - g)) * h * R_K(curve, 1 - NX, gamma * w - r + NX - 1) / (
                    zeta_K_at(curve, t) * zeta_K_at(curve, gamma * w) * c * (q - 1))
            else:
                w = cls.A
                value = Q ** ((r + 1) * (1 - g)) * h * R_K(curve, 1 - t, c * w - E) / (
                    zeta_K_at(curve, c * w - E) * zeta_K_at(curve, r + 1) * gamma * (q - 1))
            return ScaledConstant(value, -1, q=q)
        if cls.position is Position.A_LESS_B:
            base = z_affine(r, curve) if target == 'open' else z_Pn(r, curve)
            value = base.evaluate(1 / q_power(q, gamma * cls.B)) * h * Q ** (t * (1 - g)) / (
                zeta_K_at(curve, t) * xi * (q - 1))
        else:
            value = z_Pn(t - 1, curve).evaluate(1 / q_power(q, xi * cls.A)) * h * Q ** ((r + 1) * (1 - g)) / (
                gamma * zeta_K_at(curve, r + 1) * (q - 1))
        return ScaledConstant(value, -1, q=q)
    except CurveError as err:
        logger.debug("no closed constant for %s, L=%s: %s", X, L, err)
        return None


def leading_constants(result, X, L, curve):
    cls = result.classification or classify(L, X)
    out = {'extracted': extracted_constant(result.Z, cls.a, cls.b, curve.q)}
    if result.route != 'variety':
        out['formula'] = formula_constant(X, L, curve, result.target)
    return out


# coefficient formulas

def _progression(coeffs, n0, modulus, e, q, K, growth, cutoff):
    """sum_{n = n0 mod modulus, n <= cutoff} coeffs[n] q^(-e (n - n0)) and a
    bound on the rest, given |coeffs[n]| <= K q^(growth n)."""
    Q = Fraction(q)
    step = Q ** -(e * modulus)
    partial = Fraction(0)
    k = 0
    while n0 + modulus * k <= cutoff:
        partial += coeffs[n0 + modulus * k] * step ** k
        k += 1
    sigma = Q ** ((growth - e) * modulus)
    assert sigma < 1, "progression sum diverges ({} >= 1)".format(sigma)
    tail = K * Q ** (growth * n0) * sigma ** k / (1 - sigma)
    return partial, tail


def Q_L_formula(X, L, M, curve, degree_cutoff=12, target='open'):
    """The coefficient of q^(a(L) M) (times M in case 1) in the count of
    height q^M, as a truncated divisor sum with a bound on the omitted tail."""
    cls = classify(L, X)
    q = curve.q
    Q = Fraction(q)
    if cls.position is Position.EQUAL_AB:
        C = formula_constant(X, L, curve, target)
        if C is None:
            return {'case': 1, 'value': None, 'tail': None}
        value = ScaledConstant(C.value * cls.eta_L, 0, C.q_power, q=q)
        return {'case': 1, 'value': value, 'tail': ScaledConstant(0, q=q)}

    case = 2 if cls.position is Position.A_LESS_B else 3
    zero = ScaledConstant(0, q=q)
    if M % cls.eta_L:
        return {'case': case, 'value': zero, 'tail': zero}
    require_genus_zero(curve, "the Q_L divisor sums")
    L0, M0 = L.primitive(), M // cls.eta_L
    cls0 = classify(L0, X)
    r, t, d, NX, E = X.r, X.t, X.d, X.N_X, X.e
    gamma, xi, c = L0.gamma, L0.xi, cls0.c_L
    h = curve.class_number

    if X.a_r > 0 and case == 2:
        m, b = NX - 1, r + 1 - NX
        series = ntilde_f_series(curve, m, b)
        e, modulus, unit = gamma * cls0.B - r + NX - 1, c, gamma
        pref = Q ** (d + 2 - NX) * h / (zeta_K_at(curve, t) * (q - 1))
        growth, K = m + 1, Q ** m * (1 + Q ** -b) * (1 + Q ** (1 - b)) * q / (q - 1)
    elif X.a_r > 0:
        m = t - 1
        series = ntilde_f_series(curve, m, 0)
        e, modulus, unit = c * cls0.A - E, gamma, c
        pref = Q ** (r + 1) * h / (zeta_K_at(curve, r + 1) * (q - 1))
        growth, K = m + 1, Q ** m * 2 * (1 + Q) * q / (q - 1)  # b = 0
    elif case == 2:
        series = z_affine(r, curve) if target == 'open' else z_Pn(r, curve)
        e, modulus, unit = gamma * cls0.B, xi, gamma
        pref = Q ** t * h / (zeta_K_at(curve, t) * (q - 1))
        growth, K = r + 1, Q ** (r + 1) / (q - 1)
    else:
        series = z_Pn(t - 1, curve)
        e, modulus, unit = xi * cls0.A, gamma, xi
        pref = Q ** (r + 1) * h / (zeta_K_at(curve, r + 1) * (q - 1))
        growth, K = t, Q ** t / (q - 1)

    n0 = 0 if modulus == 1 else (M0 * pow(unit, -1, modulus)) % modulus
    partial, tail = _progression(series.expand(degree_cutoff), n0, modulus, e, q, K, growth,
                                 degree_cutoff)
    shift = ScaledConstant(pref, 0, -e * n0, q=q)
    logger.debug("Q_L(%d) for %s, L=%s: case %d, class %d mod %d", M, X, L, case, n0, modulus)
    return {'case': case, 'value': shift * partial, 'tail': shift * tail}


def holomorphy_gap(result, q):
    """Compare the second pole circle of Z with the strip bound a'(L) (a''(L) when a_r = 0)."""
    cls = result.classification
    bound = cls.a_prime if cls.a_prime is not None else cls.a_double_prime
    try:
        second = result.asymptotics().error_exponent(q)
    except SeriesError as err:
        logger.warning("no partial fractions for %s: %s", result.variety, err)
        return {'second_exponent': None, 'bound': bound, 'ok': None}
    return {'second_exponent': second, 'bound': bound, 'ok': second is None or second <= bound}
