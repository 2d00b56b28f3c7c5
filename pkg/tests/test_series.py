from fractions import Fraction

import pytest

from src.hkzeta.curve import CurveData, Z_K
from src.hkzeta.errors import SeriesError
from src.hkzeta.series import (FactoredRational, ScaledConstant, arith, asymptotics, expand,
                               partial_fractions, q_log, substitute)


def _convolve(a, b, N):
    return [sum(a[i] * b[n - i] for i in range(n + 1)) for n in range(N + 1)]


def test_expand_examples():
    assert expand(FactoredRational.geometric(2), 3) == [1, 2, 4, 8]
    assert expand(Z_K(CurveData.rational(2)), 3) == [1, 3, 7, 15]
    Z = FactoredRational([1, -1], [(1, 1, 1)])
    assert Z.expand(4) == [1, 0, 0, 0, 0]
    with pytest.raises(SeriesError):
        Z.expand(-1)


def test_denominator_recovers_numerator():
    Z = FactoredRational([1, 2, -3], [(2, 1, 2), (3, 2, 1)])
    series = Z.expand(12)
    back = _convolve(series, Z.denominator_poly() + [0] * 12, 12)
    assert back[:3] == [1, 2, -3]
    assert all(c == 0 for c in back[3:])


def test_arith():
    q = 2
    zk = Z_K(CurveData.rational(q))
    assert arith(zk, FactoredRational.one(), 'mul') == zk
    assert arith(zk, zk, 'div') == FactoredRational.one()
    assert not arith(zk, zk, 'div').den

    a, b = zk.substitute(q ** 2, 3), zk.substitute(q, 2)
    assert arith(a, b, 'mul').expand(6) == _convolve(a.expand(6), b.expand(6), 6)
    total = arith(a, b, 'add').expand(6)
    assert total == [x + y for x, y in zip(a.expand(6), b.expand(6))]
    with pytest.raises(ZeroDivisionError):
        zk / FactoredRational.polynomial([])
    with pytest.raises(SeriesError):
        arith(a, b, 'pow')


def test_division_keeps_factored_shape():
    zk = Z_K(CurveData.rational(3))
    Z = zk.substitute(3, 1) / zk
    assert not Z.general
    assert Z.expand(5) == [1, 8, 72, 648, 5832, 52488]


def test_division_by_unsplit_numerator_is_general():
    Z = FactoredRational.one() / FactoredRational.polynomial([1, 1, 1])
    assert Z.general
    series = Z.expand(6)
    assert series == [1, -1, 0, 1, -1, 0, 1]


def test_substitute():
    q = 2
    zk = Z_K(CurveData.rational(q))
    Z = substitute(zk, q ** 2, 3)
    assert sorted(Z.den) == sorted([(Fraction(4), 3, 1), (Fraction(8), 3, 1)])
    assert substitute(zk, 1, 1) == zk
    base = zk.expand(4)
    sub = Z.expand(12)
    for n in range(13):
        expected = base[n // 3] * 4 ** (n // 3) if n % 3 == 0 else 0
        assert sub[n] == expected


def test_evaluate_and_principal_coefficient():
    zk = Z_K(CurveData.rational(2))
    assert zk.evaluate(Fraction(1, 4)) == Fraction(8, 3)
    with pytest.raises(SeriesError):
        zk.evaluate(Fraction(1, 2))
    assert zk.pole_order_at(2) == 1
    # (1 - 2T) Z_K(T) at T = 1/2
    assert zk.principal_coefficient(2) == 2
    assert zk.principal_coefficient(2, 2) == 0
    with pytest.raises(SeriesError):
        (zk * zk).principal_coefficient(2, 1)


def test_json():
    Z = FactoredRational([Fraction(1, 2), 3], [(Fraction(4, 3), 2, 1), (2, 1, 3)])
    data = Z.to_json()
    assert data['num'] == ['1/2', '3']
    assert FactoredRational.from_json(data) == Z
    with pytest.raises(SeriesError):
        FactoredRational.from_json({'num': ['x']})


def test_scaled_constant():
    c = ScaledConstant(Fraction(3), -1, Fraction(3, 2), q=4)
    assert c.value == 12
    assert c.q_power == Fraction(1, 2)
    d = c * ScaledConstant(Fraction(1, 2), 1, Fraction(1, 2), q=4)
    assert d.is_rational and d.rational() == 24
    assert str(ScaledConstant(Fraction(2, 3), -2)) == '2/3*log(q)^(-2)'
    with pytest.raises(SeriesError):
        ScaledConstant(1, 0, Fraction(5, 2))


def test_q_log():
    assert q_log(8, 2) == 3
    assert q_log(Fraction(1, 9), 3) == -2
    assert q_log(6, 2) is None


def test_asymptotics_simple_poles():
    exp = asymptotics(FactoredRational.geometric(2))
    assert exp.order == 1
    assert exp.class_polynomial(0) == [1]
    assert exp.growth_exponent(2) == 1

    exp = asymptotics(FactoredRational.geometric(2, k=2))
    assert exp.order == 2
    assert exp.class_polynomial(0) == [1, 1]


def test_asymptotics_binomial_polynomials():
    q = 3
    for b in range(1, 5):
        exp = asymptotics(FactoredRational.geometric(q, k=b))
        poly = exp.class_polynomial(0)
        for M in range(10):
            value = sum(c * M ** i for i, c in enumerate(poly))
            expected = Fraction(1)
            for s in range(1, b):
                expected *= Fraction(M + s, s)
            assert value == expected


def test_asymptotics_finitely_supported():
    exp = asymptotics(FactoredRational.polynomial([1, 2]))
    assert exp.finitely_supported
    assert exp.coefficient(1) == 2
    with pytest.raises(SeriesError):
        exp.dominant


def test_partial_fractions_merge_equal_radii():
    # 1 - 2T and 1 - 4T^2 share the circle |T| = 1/2
    Z = FactoredRational([1], [(2, 1, 1), (4, 2, 1), (1, 1, 1)])
    groups, poly_part = partial_fractions(Z)
    assert len(groups) == 2
    exp = asymptotics(Z)
    assert exp.dominant.L == 2 and exp.dominant.K == 2
    assert exp.order == 2
    series = Z.expand(20)
    assert [exp.coefficient(M) for M in range(21)] == series


def test_partial_fractions_general_denominator():
    Z = FactoredRational.geometric(2) / FactoredRational.polynomial([1, -5, 6])
    assert Z.general or sorted(Z.den) == sorted([(Fraction(2), 1, 2), (Fraction(3), 1, 1)])
    exp = asymptotics(Z, extra_factorization=[(2, 1, 1), (3, 1, 1)] if Z.general else None)
    assert [exp.coefficient(M) for M in range(15)] == Z.expand(14)
    assert exp.growth_exponent(3) == 1


def test_general_denominator_needs_factorization():
    Z = FactoredRational.one() / FactoredRational.polynomial([1, 1, 1])
    with pytest.raises(SeriesError):
        asymptotics(Z)
    with pytest.raises(SeriesError):
        asymptotics(Z, extra_factorization=[(1, 1, 2)])


def test_remainder_bound():
    q = 2
    zk = Z_K(CurveData.rational(q))
    Z = zk.substitute(q, 2) * zk
    exp = asymptotics(Z)
    for M in range(4, 13):
        assert abs(exp.remainder(M)) <= exp.remainder_bound(M)
    assert exp.error_exponent(q) is not None
    assert exp.error_exponent(q) < exp.growth_exponent(q)
