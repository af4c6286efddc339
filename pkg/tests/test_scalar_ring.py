from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from qvertex.scalar_ring import (ONE, Q, S_ONE, ZERO, DomainError, PhaseSumError, QRat, Scalar,
                                 Series, expand_rational, pochhammer_product, pochhammer_series,
                                 RationalCoefficients,
                                 q_pow, qint, scalar_arith, series_arith)

qs = sp.Symbol("q")


def laurent(d):
    return QRat.laurent(d)


small_poly = st.dictionaries(st.integers(-3, 3), st.integers(-4, 4), max_size=4)


@st.composite
def qrats(draw, nonzero=False):
    num = draw(small_poly)
    den = draw(small_poly.filter(lambda d: any(d.values())))
    v = laurent(num) / laurent(den)
    if nonzero and v.is_zero():
        v = v + ONE
    return v


# q-integers ------------------------------------------------------------------

def test_qint_values():
    assert qint(1) == ONE
    assert qint(2) == laurent({1: 1, -1: 1})
    assert qint(3) == laurent({2: 1, 0: 1, -2: 1})


def test_qint_is_odd():
    for k in range(1, 8):
        assert qint(-k) == -qint(k)


def test_qint_zero_is_rejected():
    with pytest.raises(DomainError):
        qint(0)


def test_qint_matches_sympy():
    for k in range(1, 7):
        want = sp.cancel((qs**k - qs**-k) / (qs - 1 / qs))
        assert sp.simplify(qint(k).to_sympy(qs) - want) == 0


# QRat ------------------------------------------------------------------------

def test_canonical_form_is_unique():
    a = (Q - Q.inv()) / (Q * Q - ONE)
    b = Q.inv()
    assert a == b and hash(a) == hash(b)


def test_half_integer_powers():
    h = q_pow(Fraction(1, 2))
    assert h * h == Q
    assert (h + h.inv()) * (h - h.inv()) == Q - Q.inv()


def test_division_by_zero():
    with pytest.raises(Exception):
        ONE / ZERO


@settings(max_examples=1000)
@given(qrats(), qrats(), qrats())
def test_field_axioms(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a + b) - b == a
    assert (a * b) * c == a * (b * c)
    assert a + b == b + a
    if not b.is_zero():
        assert (a * b) / b == a


@settings(max_examples=200)
@given(qrats(), qrats())
def test_agrees_with_sympy(a, b):
    got = (a * b + a).to_sympy(qs)
    want = a.to_sympy(qs) * b.to_sympy(qs) + a.to_sympy(qs)
    assert sp.simplify(got - want) == 0


# phases ----------------------------------------------------------------------

def test_phase_multiplication_example():
    a = Scalar(Q, Fraction(1, 2))
    b = Scalar(Q.inv(), Fraction(1, 2))
    assert scalar_arith("mul", a, b) == Scalar(-ONE)
    assert scalar_arith("mul", a, b).phase.is_trivial()


def test_scalar_inverse_and_eq():
    x = Scalar(Q - Q.inv())
    assert scalar_arith("inv", x) == Scalar(ONE / (Q - Q.inv()))
    assert scalar_arith("eq", Scalar(Q + Q.inv()), Scalar(qint(2)))


def test_unequal_phases_do_not_add():
    with pytest.raises(PhaseSumError):
        Scalar(ONE, Fraction(1, 2)) + Scalar(ONE, Fraction(1, 3))


def test_equal_phases_add():
    h = Fraction(1, 2)
    assert Scalar(ONE, h) + Scalar(Q, h) == Scalar(ONE + Q, h)


@given(st.fractions(min_value=-6, max_value=6, max_denominator=12))
def test_phase_group(r):
    a = Scalar(ONE, r)
    b = Scalar(ONE, 2 - r)
    assert a * b == S_ONE
    assert 0 <= a.r < 2


# expansions ------------------------------------------------------------------

def test_expand_g_factor():
    # (q^2 z - 1)/(z - q^2) about 0
    s = expand_rational({0: -1, 1: q_pow(2)}, {0: -q_pow(2), 1: 1}, "at_zero", 2, "z")
    assert s.coeff(0) == Scalar(q_pow(-2))
    assert s.coeff(1) == Scalar(q_pow(-4) - ONE)
    assert s.order == 2


def test_expand_ratio_constant_term():
    # (q x - q^-1)/(1 - x): constant term is -q^-1 (long division)
    s = expand_rational({0: -q_pow(-1), 1: Q}, {0: 1, 1: -1}, "at_zero", 3)
    assert s.coeff(0) == Scalar(-q_pow(-1))
    assert s.coeff(1) == Scalar(Q - Q.inv()) == s.coeff(2)


def test_expand_identity():
    s = expand_rational({0: -1, 1: 1}, {0: -1, 1: 1}, "at_zero", 3)
    assert s.terms == {0: S_ONE} and s.order == 3


def test_expand_pole_is_rejected():
    with pytest.raises(DomainError):
        RationalCoefficients({0: 1}, {1: 1, 2: 1})
    with pytest.raises(DomainError):
        expand_rational({0: 1}, {0: 0}, "at_zero", 3)


def test_expand_at_infinity():
    s = expand_rational({0: 1}, {0: -1, 1: 1}, "at_infinity", 4)
    # 1/(x - 1) = y/(1 - y), y = 1/x
    assert s.var == "1/x"
    assert s.terms == {1: S_ONE, 2: S_ONE, 3: S_ONE}


def test_expansion_matches_sympy():
    x = sp.Symbol("x")
    f = (qs**3 * x - 1) / (x - qs)
    s = expand_rational({0: -1, 1: q_pow(3)}, {0: -Q, 1: 1}, "at_zero", 5)
    ref = sp.series(f, x, 0, 5).removeO()
    for k in range(5):
        assert sp.simplify(s.coeff(k).value.to_sympy(qs) - ref.coeff(x, k)) == 0


@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3), st.integers(1, 8))
def test_expand_times_denominator(a, b, c, N):
    num = {0: q_pow(a), 1: -q_pow(b)}
    den = {0: ONE, 1: -q_pow(c)}
    s = expand_rational(num, den, "at_zero", N)
    back = s * Series({0: ONE, 1: -q_pow(c)}, N)
    assert back.agrees(Series({0: q_pow(a), 1: -q_pow(b)}, N), N)


# infinite products -------------------------------------------------------------

def test_pochhammer_leading_terms():
    # only the constant term is free of q; the x term collects every factor
    s = pochhammer_series(ONE, q_pow(4), 2)
    assert s.coeff(0) == S_ONE and s.order == 2
    assert s.coeff(1).value.q_expansion(9) == {0: -1, 4: -1, 8: -1}


def test_pochhammer_first_coefficient():
    # (x; q^4)_inf has x coefficient -1/(1 - q^4)
    s = pochhammer_series(ONE, q_pow(4), 3)
    assert s.coeff(1) == Scalar(-(ONE / (ONE - q_pow(4))))


def test_pochhammer_qx():
    s = pochhammer_series(Q, q_pow(4), 3)
    assert s.coeff(1) == Scalar(-Q / (ONE - q_pow(4)))
    assert s.coeff(2) == Scalar(q_pow(6) / ((ONE - q_pow(4)) * (ONE - q_pow(8))))


def test_pochhammer_zero_argument():
    assert pochhammer_series(ZERO, q_pow(4), 5).terms == {0: S_ONE}


@pytest.mark.parametrize("inverse", [False, True])
@pytest.mark.parametrize("a", [0, 1, 3])
def test_pochhammer_against_finite_product(a, inverse):
    # the finite product with m factors agrees q-adically below q^(4m)
    N, m = 4, 6
    s = pochhammer_series(q_pow(a), q_pow(4), N, inverse=inverse)
    f = pochhammer_product(q_pow(a), q_pow(4), m, N, inverse=inverse)
    for k in range(N):
        d = (s.coeff(k) - f.coeff(k)).value
        assert d.is_zero() or min(d.q_expansion(4 * m + 40)) >= 4 * m


def test_pochhammer_stable_under_more_factors():
    a = pochhammer_product(Q, q_pow(4), 5, 3)
    b = pochhammer_product(Q, q_pow(4), 9, 3)
    for k in range(3):
        d = (a.coeff(k) - b.coeff(k)).value
        assert d.is_zero() or min(d.q_expansion(80)) >= 20


# series arithmetic --------------------------------------------------------------

def test_geometric_series_product():
    A = Series({0: 1, 1: -1}, var="x")
    B = Series({0: 1, 1: 1, 2: 1}, 3)
    assert series_arith("mul", A, B).terms == {0: S_ONE}
    assert series_arith("mul", A, B).order == 3


def test_series_inverse():
    s = series_arith("inv", Series({0: 1, 1: -q_pow(2)}, 2))
    assert s.terms == {0: S_ONE, 1: Scalar(q_pow(2))} and s.order == 2


def test_fractional_exponents():
    a = Series({Fraction(1, 2): 1})
    b = Series({Fraction(3, 2): 1})
    assert (a * b).terms == {2: S_ONE}


def test_truncation_is_pessimistic():
    a = Series({0: 1, 1: 1}, 3)
    b = Series({1: 1}, 2)
    assert (a + b).order == 2
    assert (a * b).order == 2


@given(st.lists(st.integers(-3, 3), min_size=1, max_size=4), st.integers(1, 6))
def test_mul_then_inverse(cs, N):
    s = Series({0: 1, **{k + 1: q_pow(c) for k, c in enumerate(cs)}}, N)
    one = s * s.inv()
    assert one.agrees(Series({0: 1}, N), N)


def test_mixed_variables_are_rejected():
    with pytest.raises(ValueError):
        Series({0: 1}, var="x") + Series({0: 1}, var="y")


def test_dump_format():
    s = Series({Fraction(1, 2): Scalar(Q, Fraction(1, 2)), 0: -1}, 2, "x")
    assert s.dump().splitlines() == [
        "0/1 | (-1)^0/1 | -1*q^0 / 1*q^0",
        "1/2 | (-1)^1/2 | 1*q^1 / 1*q^0",
        "O(x^2)",
    ]
