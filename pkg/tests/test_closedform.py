import os
from fractions import Fraction

import pytest

from src.hkzeta.closedform import (Q_L_formula, Z_UL, Z_XL_product, anticanonical_constant,
                                   anticanonical_zeta, extracted_constant, formula_constant,
                                   holomorphy_gap, projective_count_formula, wan_constant,
                                   z_affine, z_Pn, zeta_for_bundle)
from src.hkzeta.counting import count_affine, count_projective, count_U_table, count_variety
from src.hkzeta.curve import CurveData
from src.hkzeta.errors import (InfiniteCountError, NotBigError, NotPrimitiveError,
                               UnsupportedError)
from src.hkzeta.hkgeom import HKVariety, LineBundle, anticanonical
from src.hkzeta.series import FactoredRational

CURVE_FILE = os.path.join(os.path.dirname(__file__), '..', 'config-files', 'curves', 'elliptic_q2.json')

X21 = HKVariety(1, 2, (1,))
X22 = HKVariety(1, 2, (2,))
X31 = HKVariety(1, 3, (1,))
X20 = HKVariety(1, 2, (0,))


@pytest.fixture
def curve():
    return CurveData.rational(2)


def test_Z_UL_example(curve):
    result = Z_UL(X21, LineBundle(2, 1), curve)
    assert result.coefficients(5) == [4, 0, 12, 24, 48, 72]
    assert result.route == 'open'


def test_Z_UL_closed_shape(curve):
    # q^2 (1 - T)(1 - qT^2) / ((1 - q^2 T)(1 - q^3 T^2)) at q = 2
    expected = FactoredRational([4, -4, -8, 8], [(4, 1, 1), (8, 2, 1)])
    assert Z_UL(X21, LineBundle(1, 1), curve).Z.expand(10) == expected.expand(10)


@pytest.mark.parametrize('X,L,M', [(X21, LineBundle(1, 1), 4), (X31, LineBundle(1, 1), 3),
                                   (X22, LineBundle(1, 0), 2), (X21, LineBundle(3, 1), 4)])
def test_Z_UL_matches_brute_force(curve, X, L, M):
    assert Z_UL(X, L, curve).coefficients(M) == count_U_table(X, L, M, curve)


def test_Z_UL_primitive_on_X22(curve):
    assert Z_UL(X22, LineBundle(1, 0), curve).coefficients(1) == [4, 12]


def test_Z_UL_errors(curve):
    with pytest.raises(NotPrimitiveError):
        Z_UL(X21, LineBundle(2, 2), curve)
    with pytest.raises(UnsupportedError):
        Z_UL(X20, LineBundle(1, 1), curve)
    with pytest.raises(NotBigError):
        Z_UL(X21, LineBundle(0, 1), curve)


def test_non_primitive_bundle_by_substitution(curve):
    L = anticanonical(X31)
    result = zeta_for_bundle(X31, L, curve)
    assert result.eta == 2
    assert result.coefficients(4) == count_U_table(X31, L, 4, curve)


def test_projective_zeta(curve):
    assert z_Pn(1, curve).expand(3) == [3, 6, 24, 96]
    assert z_affine(1, curve).expand(3) == [2, 6, 24, 96]
    assert z_Pn(0, curve) == FactoredRational.one()
    for q in (2, 3):
        c = CurveData.rational(q)
        for n in (1, 2):
            series = z_Pn(n, c).expand(5)
            assert series == [projective_count_formula(n, d, q) for d in range(6)]
    for n, d in [(1, 2), (2, 1), (2, 2)]:
        assert projective_count_formula(n, d, 2) == count_projective(n, d, curve)
    assert z_affine(2, curve).expand(2) == [count_affine(2, d, curve) for d in range(3)]


@pytest.mark.parametrize('q', [2, 3, 4])
def test_wan_constant(q):
    c = CurveData.rational(q)
    C2 = wan_constant(1, c)
    assert C2.value == Fraction(q * q - 1, q)
    assert C2.log_exponent == -1
    extracted = extracted_constant(z_Pn(1, c), 2, 1, q)
    assert extracted.value == C2.value
    assert extracted_constant(z_affine(1, c), 2, 1, q).value == C2.value


@pytest.mark.parametrize('q', [2, 3])
def test_leading_constant_agreeing_routes(q):
    c = CurveData.rational(q)
    result = Z_UL(X21, LineBundle(1, 1), c)
    C3 = Fraction((q * q + q + 1) * (q * q - 1), q * q)
    assert result.constants['extracted'].value == C3
    assert result.constants['formula'].value == C3


def test_anticanonical_constant(curve):
    result = anticanonical_zeta(X21, curve)
    assert anticanonical_constant(X21, curve).value == Fraction(3, 8)
    for key in ('extracted', 'formula', 'anticanonical', 'C_1'):
        assert result.constants[key].value == Fraction(3, 8)
        assert result.constants[key].log_exponent in (-2, 0)
    exp = result.asymptotics()
    assert exp.order == 2
    assert (exp.dominant.C, exp.dominant.L) == (64, 6)
    assert exp.leading_coefficients() == [Fraction(3, 8)] * 6


def test_anticanonical_leading_constant_q3():
    c = CurveData.rational(3)
    result = anticanonical_zeta(X21, c)
    assert result.constants['extracted'].value == result.constants['anticanonical'].value


def test_formula_constant_a_less_b(curve):
    L = LineBundle(4, -1)
    C = formula_constant(X21, L, curve)
    result = Z_UL(X21, L, curve)
    assert C is not None
    assert result.constants['extracted'].value == C.value


def test_Q_L_case_one(curve):
    L = anticanonical(X31)
    res = Q_L_formula(X31, L, 4, curve)
    assert res['case'] == 1
    assert res['value'].value == formula_constant(X31, L, curve).value * 2


def test_Q_L_case_three_converges_to_constant(curve):
    res = Q_L_formula(X21, LineBundle(1, 1), 3, curve)
    assert res['case'] == 3
    C3 = Fraction(21, 4)
    value, tail = res['value'].value, res['tail'].value
    assert value <= C3 <= value + tail
    assert tail < Fraction(1, 50)


def test_Q_L_case_two_positive(curve):
    for M in range(1, 5):
        res = Q_L_formula(X21, LineBundle(4, -1), M, curve)
        assert res['case'] == 2
        assert float(res['value']) > 0
        assert res['tail'].value >= 0


def test_Q_L_vanishes_off_eta(curve):
    res = Q_L_formula(X21, LineBundle(2, 2), 3, curve)
    assert res['value'].value == 0


def test_holomorphy_gap(curve):
    gap = holomorphy_gap(Z_UL(X21, LineBundle(1, 1), curve), 2)
    assert gap['bound'] == Fraction(3, 2)
    assert gap['ok'] is True
    assert holomorphy_gap(anticanonical_zeta(X21, curve), 2)['ok'] is True


def test_variety_zeta(curve):
    L = anticanonical(X21)
    result = zeta_for_bundle(X21, L, curve, target='variety')
    assert result.route == 'variety'
    assert result.coefficients(3) == [count_variety(X21, L, M, curve) for M in range(4)]
    assert result.coefficients(0) == [9]
    assert zeta_for_bundle(X31, anticanonical(X31), curve, target='variety').coefficients(0) == [21]


def test_product_route(curve):
    L = LineBundle(1, 1)
    result = Z_XL_product(X20, L, curve)
    assert result.coefficients(1) == [9, 36]
    assert zeta_for_bundle(X20, L, curve).route == 'product'
    assert zeta_for_bundle(X20, L, curve).coefficients(2) == count_U_table(X20, L, 2, curve)
    with pytest.raises(UnsupportedError):
        Z_XL_product(X21, L, curve)


def test_variety_zeta_errors(curve):
    with pytest.raises(InfiniteCountError):
        zeta_for_bundle(X22, LineBundle(1, 0), curve, target='variety')
    with pytest.raises(UnsupportedError):
        zeta_for_bundle(X21, LineBundle(1, 1), curve, target='closure')


def test_elliptic_constant_terms():
    elliptic = CurveData.load(CURVE_FILE)
    assert Z_UL(X21, LineBundle(2, 1), elliptic).Z.expand(0)[0] == 4
    assert Z_UL(X31, LineBundle(1, 1), elliptic).Z.expand(0)[0] == 8
