from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qvertex.intertwiners import (FAMILIES, commute_exactly, constant, correlator, correlator_report,
                                  normalization, formula_sl2_second, sl2_correlators,
                                  source_sector, target_sector, thm35_report, verify_ope,
                                  verify_thm35, vo)
from qvertex.lattice import get_lattice
from qvertex.mutation import mutate
from qvertex.scalar_ring import ONE, Q, S_ONE, Scalar, q_pow, qint
from qvertex.vertex_engine import ValidationError, fj_current

half = Fraction(1, 2)


def test_constants_n2():
    # [(-1)^{-1} z]^{1/2}: the phase exponent -1/2 is stored as 3/2
    assert constant("I", 0, 0, 2) == (Scalar(ONE, Fraction(3, 2)), half)
    # [(-1)]^{1/2} [q^2 z]^{1/2}
    assert constant("I*", 1, 1, 2) == (Scalar(Q, half), half)


def test_constant_component_factor():
    for n in (2, 3, 4):
        for i in range(n):
            ci, e = constant("I", i, i, n)
            for j in range(n):
                cj, ej = constant("I", i, j, n)
                # (c)_j^i = (-q)^{j-i} (c)_i^i
                assert cj == ci * Scalar(q_pow(j - i), j - i) and ej == e
                assert constant("I*", i, j, n) == constant("I*", i, i, n)


def test_type_one_template_n2():
    T = vo("I", 0, 0, 2).template
    L = get_lattice(2)
    for k in range(1, 5):
        # only a*_{1,-k} q^{k/2} z^k survives (a*_0 = 0); a*_{1,-k} = -a_{1,-k}/[2k]
        assert T.neg(k) == {1: Scalar(-q_pow(Fraction(k, 2)) / qint(2 * k))}
    assert T.gamma == tuple(-x for x in L.lbar(1))
    assert T.rw == L.lbar(1)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_lattice_shifts(n):
    L = get_lattice(n)
    for fam in FAMILIES:
        for j in range(n):
            T = vo(fam, 0, j, n).template
            d = tuple(a - b for a, b in zip(L.lbar(j), L.lbar(j + 1)))
            want = d if fam in ("I", "II") else tuple(-x for x in d)
            assert T.gamma == want


def test_sectors():
    assert (source_sector("I", 0, 3), target_sector("I", 0, 3)) == (1, 0)
    assert (source_sector("I*", 2, 3), target_sector("I*", 2, 3)) == (2, 0)


@pytest.mark.parametrize("fam", FAMILIES)
@pytest.mark.parametrize("i", [0, 1])
def test_normalization_n2(fam, i):
    assert normalization(fam, i, 2) == (S_ONE, 0)


@pytest.mark.parametrize("n,i", [(3, 1), (3, 2), (4, 3)])
def test_normalization_away_from_zero(n, i):
    for fam in FAMILIES:
        assert normalization(fam, i, n) == (S_ONE, 0)


def test_thm35_n2():
    assert thm35_report(2).passed
    for case in (1, 2, 3, 4):
        assert verify_thm35(2, case, 20, 1)


@pytest.mark.parametrize("case", [1, 3, 4])
def test_thm35_n3(case):
    assert verify_thm35(3, case, 20)


def test_thm35_negative_control():
    with mutate("thm35.shift"):
        assert not verify_thm35(2, 3)


def test_ope_type_one_n2():
    r = verify_ope(2, "typeI", 2, 2)
    assert r.passed, r.summary()


def test_locality_n2():
    r = verify_ope(2, "locality", 2, 3)
    assert r.passed, r.summary()


def test_otherwise_cases_commute_exactly():
    n = 4
    for fam in ("I", "II"):
        T = vo(fam, 0, 0, n).template
        for kind in ("x+", "x-", "phi", "psi"):
            # j = 0 is neither i - 1 nor i for i = 3 (indices mod 4)
            ok, why = commute_exactly(T, fj_current(kind, 3, n))
            assert ok, why


def test_ope_negative_control():
    with mutate("ope.coef"):
        assert not verify_ope(2, "typeI", 1, 1).passed


def test_zero_correlators():
    res = sl2_correlators(8)
    assert res["zero_a"].zero and res["zero_b"].zero


def test_second_correlator_leading_term():
    c = sl2_correlators(8)["second"]
    assert c.coefficient == Scalar(-q_pow(-1))
    want = formula_sl2_second(8)
    assert want.valuation() == half and want.coeff(half) == Scalar(-q_pow(-1))


def test_correlator_sector_mismatch():
    with pytest.raises(ValidationError):
        correlator([(vo("I", 0, 0, 2), "z1"), (vo("I", 0, 0, 2), "z2")], 4)


def test_correlator_report_statuses():
    r = correlator_report(8)
    st_ = {c.name: c.status for c in r.checks}
    assert st_["zero correlator Phi_0 Phi_0"] == "pass"
    assert st_["third correlator vs displayed formula"] in ("pass", "discrepancy")


@st.composite
def chains(draw):
    n = draw(st.sampled_from([2, 3]))
    length = draw(st.integers(1, 3))
    fam = draw(st.sampled_from(["I", "II"]))
    a = draw(st.integers(0, n - 1))
    ops, src = [], a
    for t in range(length):
        # I/II lower the sector by one: choose the operator whose source is src
        i = (src - 1) % n
        j = draw(st.integers(0, n - 1))
        ops.append((vo(fam, i, j, n), f"z{t + 1}"))
        src = i
    return n, list(reversed(ops)), a


@settings(max_examples=60)
@given(chains())
def test_charge_selection(chain):
    n, ops, a = chain
    L = get_lattice(n)
    total = [0] * (n - 1)
    for op, _ in ops:
        total = [x + y for x, y in zip(total, op.template.gamma_free)]
    bra = target_sector(ops[0][0].family, ops[0][0].sector, n)
    c = correlator(ops, 3, bra=a)
    if any(total):
        assert c.zero
    else:
        assert not c.zero and bra == a


def test_two_point_powers_are_half_integral():
    for c in sl2_correlators(6).values():
        if not c.zero:
            assert all((2 * e).denominator == 1 for e in c.zpowers.values())
