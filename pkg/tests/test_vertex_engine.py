from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qvertex.fock import FockState, basis
from qvertex.lattice import get_lattice
from qvertex.scalar_ring import ONE, Q, S_ONE, Scalar, Series, q_pow, qint
from qvertex.uq_algebra import def21_relations, fock_provider
from qvertex.vertex_engine import (DivergentExpansion, _current, ValidationError, collapse, commutator,
                                   contract, contraction_factors, current, eval_relation,
                                   fj_current, identity_template, mode, normal_ordered_product,
                                   rational, template_diff, template_eq)

KINDS = ("x+", "x-", "phi", "psi")
QQ = Scalar(Q - Q.inv())


def test_phi_template():
    T = fj_current("phi", 1, 2)
    for k in range(1, 5):
        assert T.neg(k) == {1: -QQ}
        assert T.pos(k) == {}
    assert T.qw == (-get_lattice(2).alpha(1)[0],)


def test_xplus_template():
    T = fj_current("x+", 1, 3)
    for k in range(1, 5):
        c = Scalar(q_pow(Fraction(-k, 2)) / qint(k))
        assert T.neg(k) == {1: c}
        assert T.pos(k) == {1: -c}
    L = get_lattice(3)
    assert T.gamma == L.alpha(1) and T.zw == L.alpha(1) and T.zpow == 1


def test_index_range():
    with pytest.raises(ValueError):
        fj_current("x+", 2, 2)


def test_modes_on_vacuum():
    v = FockState.vacuum(2, 0)
    T = fj_current("x+", 1, 2)
    # z^{d+1} on the vacuum puts the constant term at z^1
    assert mode(T, -1, v).terms == {((), (2,)): S_ONE}
    assert mode(T, 0, v).is_zero()
    assert mode(T, -2, v).terms == {(((1, 1),), (2,)): Scalar(q_pow(Fraction(-1, 2)))}
    assert mode(fj_current("phi", 1, 2), 0, v) == v


def test_contract_xplus_xplus():
    T = fj_current("x+", 1, 2)
    c = contract(T, T, 3)
    # (1 - x)(1 - q^-2 x), x = w/z
    assert c.series.terms == {0: S_ONE, 1: Scalar(-ONE - q_pow(-2)), 2: Scalar(q_pow(-2))}
    assert c.zpowers == {"z": 2}


def test_contract_trivial_cases():
    P1, P3 = fj_current("phi", 1, 4), fj_current("phi", 3, 4)
    assert contract(P1, P3, 6).series.terms == {0: S_ONE}
    T = fj_current("x-", 2, 4)
    c = contract(T, identity_template(4), 6)
    assert c.series.terms == {0: S_ONE} and c.prefactor == S_ONE
    with pytest.raises(ValidationError):
        contract(T, T, 3, var=("z", "z"))


def test_contraction_closed_form():
    T = fj_current("x+", 1, 2)
    assert contraction_factors(T, T) == [(-2, -1), (0, -1)]


def test_collapse_pole():
    Tp, Tm = fj_current("x+", 1, 2), fj_current("x-", 1, 2)
    with pytest.raises(DivergentExpansion):
        collapse([(Tp, 0), (Tm, 1)])


@pytest.mark.parametrize("i", [1, 2])
def test_normal_ordered_psi_phi(i):
    n = 3
    half = Fraction(1, 2)
    xp, xm = fj_current("x+", i, n), fj_current("x-", i, n)
    left = normal_ordered_product([(xp, half), (xm, -half)])
    assert template_eq(left, fj_current("psi", i, n).scaled(S_ONE, 2), 20)
    left = normal_ordered_product([(xp, -half), (xm, half)])
    assert template_eq(left, fj_current("phi", i, n).scaled(S_ONE, 2), 20)
    # swapped shifts give the other current
    assert not template_eq(normal_ordered_product([(xp, -half), (xm, half)]),
                           fj_current("psi", i, n).scaled(S_ONE, 2), 20)


def test_normal_order_identity():
    T = fj_current("x-", 1, 2)
    assert template_diff(normal_ordered_product([(T, 0), (identity_template(2), 0)]), T, 12) is None


def test_template_eq():
    T = fj_current("x+", 1, 2)
    assert template_eq(T, T, 20)
    assert not template_eq(fj_current("phi", 1, 2), fj_current("psi", 1, 2), 20)


def test_unannotated_rational():
    with pytest.raises(ValidationError):
        rational({0: 1}, {0: 1, 1: -1})


def _rel(name):
    for r in def21_relations(2, fock_provider(2), 1):
        if r.name == name:
            return r.expr
    raise KeyError(name)


@pytest.mark.parametrize("name", ["[x+_1, x-_1]", "phi_1 phi_1", "x+_1 x+_1 quadratic"])
def test_eval_relation_examples(name):
    kets = [(b,) for b in basis(2, 0, 2)]
    ok, wit = eval_relation(_rel(name), 2, 2, kets)
    assert ok, wit


def test_eval_relation_witness():
    T = fj_current("x+", 1, 2)
    expr = current(T, "z") * current(T, "w")
    ok, wit = eval_relation(expr, 2, 1, [(b,) for b in basis(2, 0, 1)])
    assert not ok
    assert set(wit) == {"coefficient_of", "ket", "bra", "value"}


def _modewise(T1, T2, n, beta, K):
    """Vacuum-to-vacuum coefficients of T1(z) T2(w), ratio to the k = 0 term."""
    lat = get_lattice(n)
    b2 = tuple(a + b for a, b in zip(T2.gamma_free, beta))
    out = tuple(a + b for a, b in zip(T1.gamma_free, b2))
    s2, s1 = T2.s0(beta), T1.s0(b2)
    coeffs = []
    for k in range(K + 1):
        mid = T2.apply_basis(s2 + k, (), beta)
        tot = Scalar(ONE) * 0
        for (mono, ex), c in mid.items():
            tot = tot + c * T1.apply_basis(s1 - k, mono, ex).get(((), out), Scalar(ONE) * 0)
        coeffs.append(tot)
    return coeffs


@settings(max_examples=40)
@given(st.sampled_from([2, 3]), st.sampled_from(KINDS), st.sampled_from(KINDS), st.data())
def test_contraction_matches_modewise(n, k1, k2, data):
    i = data.draw(st.integers(1, n - 1))
    j = data.draw(st.integers(1, n - 1))
    T1, T2 = fj_current(k1, i, n), fj_current(k2, j, n)
    lat = get_lattice(n)
    beta = lat.to_free_basis(lat.lbar(data.draw(st.integers(0, n - 1))))
    K = 6
    mw = _modewise(T1, T2, n, beta, K)
    ser = contract(T1, T2, K).series
    assert mw[0]
    for k in range(K + 1):
        assert mw[k] == mw[0] * ser.coeff(k)


@settings(max_examples=20)
@given(st.sampled_from(KINDS), st.integers(-3, 3))
def test_mode_is_exact(kind, l):
    T = fj_current(kind, 1, 2)
    for b in basis(2, 1, 2):
        s = FockState.basis_vector(2, *b)
        a = mode(T, l, s)
        # a fresh template has no cached partial expansions
        fresh = _current.__wrapped__(kind, 1, 2, None)
        assert a == mode(fresh, l, s)


def test_mode_homogeneity():
    T = fj_current("x-", 1, 2)
    for b in basis(2, 0, 3):
        s = FockState.basis_vector(2, *b)
        d0 = sum(k for _, k in b[0])
        for l in range(-3, 4):
            out = mode(T, l, s)
            if not out.is_zero():
                assert out.degrees() == {d0 - l - T.s0(b[1])}
