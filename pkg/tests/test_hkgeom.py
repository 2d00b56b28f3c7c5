from fractions import Fraction

import pytest

from src.hkzeta.errors import HKZetaError, NotBigError, NotPrimitiveError
from src.hkzeta.hkgeom import (HKVariety, LineBundle, Position, alpha_star, alpha_star_numeric,
                               anticanonical, classify, decompose, is_big)


def X(spec):
    return HKVariety.parse(spec)


def test_parse_and_str():
    V = X('HK(r=2, t=3; a=0,1)')
    assert (V.r, V.t, V.a) == (2, 3, (0, 1))
    assert V.d == 4
    assert str(V) == 'HK(r=2,t=3;a=0,1)'
    assert HKVariety.parse(str(V)) == V
    assert HKVariety.from_dict(V.to_dict()) == V
    for bad in ('HK(r=1,t=2;a=2,1)', 'HK(r=1,t=1;a=0)', 'HK(r=2,t=2;a=1)', 'P^2'):
        with pytest.raises(HKZetaError):
            X(bad)


def test_lattice_invariants():
    V = X('HK(r=3,t=2;a=0,2,2)')
    assert V.a_r == 2 and V.a_abs == 4
    assert V.N_X == 2
    assert V.A == 2
    assert V.e == 4
    assert X('HK(r=2,t=2;a=1,1)').A == 1


@pytest.mark.parametrize('a', [0, 1, 2, 3])
def test_anticanonical_of_surfaces_over_p2(a):
    assert anticanonical(X('HK(r=1,t=3;a={})'.format(a))) == LineBundle(2, 3 - a)


def test_anticanonical_examples():
    assert anticanonical(X('HK(r=1,t=2;a=1)')) == LineBundle(2, 1)
    assert anticanonical(X('HK(r=1,t=3;a=0)')) == LineBundle(2, 3)
    assert anticanonical(X('HK(r=2,t=2;a=0,1)')) == LineBundle(3, 1)


def test_is_big():
    V = X('HK(r=1,t=2;a=1)')
    assert is_big(LineBundle(1, 1), V)
    assert is_big(LineBundle(1, 0), V)
    assert not is_big(LineBundle(0, 1), V)
    assert not is_big(LineBundle(1, -2), X('HK(r=1,t=2;a=2)'))
    assert is_big(LineBundle(1, -1), X('HK(r=1,t=2;a=2)'))


def test_alpha_star():
    assert alpha_star(X('HK(r=1,t=2;a=1)')) == Fraction(1, 6)
    assert alpha_star(X('HK(r=1,t=2;a=0)')) == Fraction(1, 4)
    for spec in ('HK(r=1,t=2;a=1)', 'HK(r=1,t=3;a=0)', 'HK(r=1,t=3;a=2)'):
        V = X(spec)
        assert alpha_star_numeric(V) == pytest.approx(float(alpha_star(V)), abs=1e-6)


def test_classify_anticanonical():
    info = classify(LineBundle(2, 1), X('HK(r=1,t=2;a=1)'))
    assert info.position is Position.EQUAL_AB
    assert (info.A, info.B, info.a, info.b) == (1, 1, 1, 2)
    assert info.c_L == 3 and info.eta_L == 1
    assert info.a_prime == Fraction(2, 3)
    assert info.a_double_prime is None

    info = classify(LineBundle(2, 2), X('HK(r=1,t=3;a=1)'))
    assert info.position is Position.EQUAL_AB
    assert info.eta_L == 2
    assert info.secondary_poles == (0, 1)

    info = classify(LineBundle(2, 0), X('HK(r=1,t=2;a=2)'))
    assert info.position is Position.EQUAL_AB and info.eta_L == 2


def test_classify_positions():
    V = X('HK(r=1,t=2;a=1)')
    info = classify(LineBundle(1, 1), V)
    assert info.position is Position.A_GREATER_B
    assert (info.A, info.B, info.a, info.b) == (2, Fraction(3, 2), 2, 1)
    info = classify(LineBundle(4, -1), V)
    assert info.position is Position.A_LESS_B
    assert (info.A, info.B, info.a) == (Fraction(1, 2), 1, 1)

    info = classify(LineBundle(1, 1), X('HK(r=1,t=2;a=0)'))
    assert info.a_prime is None
    assert info.a_double_prime == Fraction(1, 2)


@pytest.mark.parametrize('m', [2, 3, 5])
def test_scaling_law(m):
    V = X('HK(r=1,t=3;a=1)')
    L = LineBundle(1, 2)
    base, scaled = classify(L, V), classify(L.scaled(m), V)
    assert scaled.A == base.A / m and scaled.B == base.B / m
    assert scaled.position is base.position
    assert scaled.b == base.b
    assert scaled.eta_L == m * base.eta_L


def test_not_big_raises():
    with pytest.raises(NotBigError):
        classify(LineBundle(0, 1), X('HK(r=1,t=2;a=1)'))


def test_bundle_helpers():
    L = LineBundle.parse('4,6')
    assert L.eta == 2 and not L.is_primitive
    assert L.primitive() == LineBundle(2, 3)
    assert L.c(X('HK(r=1,t=2;a=1)')) == 10
    assert str(L) == '(4,6)'
    with pytest.raises(NotPrimitiveError):
        LineBundle(0, 0).primitive()
    with pytest.raises(HKZetaError):
        LineBundle.parse('4;6')


def test_decompose_labels():
    V = X('HK(r=1,t=2;a=1)')
    labels = [c.label() for c in decompose(V)]
    assert labels == ['P^1[H^1]', 'A^1[H^2]', 'U[HK(r=1,t=2;a=1);(2,1)]']

    V = X('HK(r=1,t=3;a=1)')
    labels = [c.label() for c in decompose(V, LineBundle(1, 1))]
    assert labels == ['P^2[H^1]', 'A^1[H^1]', 'U[HK(r=1,t=3;a=1);(1,1)]', 'U[HK(r=1,t=2;a=1);(1,1)]']

    assert [c.label() for c in decompose(X('HK(r=1,t=2;a=0)'))] == \
        ['P^1[H^2]', 'U[HK(r=1,t=2;a=0);(2,2)]']


def test_decompose_recursive():
    V = X('HK(r=2,t=2;a=0,1)')
    shallow = decompose(V)
    assert shallow[0].kind == 'variety'
    labels = [c.label() for c in decompose(V, recursive=True)]
    assert labels == ['P^1[H^1]', 'U[HK(r=1,t=2;a=0);(3,1)]', 'A^2[H^3]', 'U[HK(r=2,t=2;a=0,1);(3,1)]']
    assert all(c.kind != 'variety' for c in decompose(V, recursive=True))
