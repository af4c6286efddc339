"""Acceptance criteria, one test each.  Every test prints a single verdict line.

Run alone with ``pytest tests/test_acceptance.py -s`` or ``python3 tests/test_acceptance.py``.
"""

import sys
import time

import pytest

from qvertex.fock import boson_commutator, get_bosons
from qvertex.intertwiners import correlator_report, thm35_report, verify_normalization, verify_ope
from qvertex.mutation import mutate
from qvertex.scalar_ring import ZERO, QRat, qint
from qvertex.uq_algebra import verify_def21, verify_hopf, verify_rmatrix

OPE_SUITES = ("typeI", "typeII", "dualI", "dualII", "locality")


VERDICTS = []


def verdict(number, title, ok, detail=""):
    line = f"criterion {number} [{'PASS' if ok else 'FAIL'}] {title}"
    if detail:
        line += f" :: {detail}"
    VERDICTS.append(line)
    # shown in the terminal summary; also visible immediately with -s
    print(line)


def failing(reports):
    return [f"{r.suite} n={r.n}: {c.name}" for r in reports for c in r.failures()]


def test_criterion_1_defining_relations():
    reports, times = [], []
    for n, sector, D, M in [(2, 0, 3, 3), (3, 1, 2, 2)]:
        t = time.perf_counter()
        reports.append(verify_def21(n, sector, D, M))
        times.append(time.perf_counter() - t)
    bad = failing(reports)
    ok = not bad and max(times) <= 300
    verdict(1, "defining relations n=2 (3,3), n=3 (2,2)", ok,
            "; ".join(bad[:4]) or f"{sum(len(r.checks) for r in reports)} relations, {max(times):.0f}s max")
    assert not bad, bad
    assert max(times) <= 300


def test_criterion_2_heisenberg_layer():
    bad = []
    for n in (2, 3, 4):
        B = get_bosons(n)
        for i in range(1, n):
            for j in range(1, n):
                for k in range(-6, 7):
                    if not k:
                        continue
                    for l in range(-6, 7):
                        if l and boson_commutator(i, k, j, l, n) != -boson_commutator(j, l, i, k, n):
                            bad.append(f"antisymmetry n={n} ({i},{k}) ({j},{l})")
                    want = qint(k) / QRat.from_int(k) if i == j else ZERO
                    if B.astar_commutator(i, k, j, -k) != want:
                        bad.append(f"a* duality n={n} i={i} j={j} k={k}")
    verdict(2, "boson antisymmetry and a* duality, n in {2,3,4}, |k| <= 6", not bad, "; ".join(bad[:4]))
    assert not bad, bad


def test_criterion_3_hopf():
    t = time.perf_counter()
    r = verify_hopf(2, 2, 2, coassoc_degree=1)
    el = time.perf_counter() - t
    bad = failing([r])
    verdict(3, "Hopf structure on F_0 (x) F_0, n=2, (D,M)=(2,2)", not bad and el <= 900,
            "; ".join(bad[:4]) or f"{len(r.checks)} checks, {el:.0f}s")
    assert not bad, bad
    assert el <= 900


def test_criterion_4_rmatrix():
    t = time.perf_counter()
    r = verify_rmatrix(10, 3)
    el = time.perf_counter() - t
    bad = failing([r])
    verdict(4, "R Delta = Delta' R to order 10, |l| <= 3, n=2", not bad and el <= 60,
            "; ".join(bad[:4]) or f"{len(r.checks)} modes, {el:.1f}s")
    assert not bad, bad
    assert el <= 60


def test_criterion_5_vertex_operators():
    t = time.perf_counter()
    reports = [verify_normalization(2), verify_normalization(3)]
    for n, D, M in [(2, 3, 3), (3, 2, 2)]:
        for suite in OPE_SUITES:
            if suite == "locality":
                reports.append(verify_ope(n, suite, D, 3))
            else:
                reports.append(verify_ope(n, suite, D, M))
    el = time.perf_counter() - t
    bad = failing(reports)
    total = sum(len(r.checks) for r in reports)
    verdict(5, "normalizations, OPE lists and locality for n=2,3", not bad and el <= 1200,
            f"{total - len(bad)}/{total} checks pass, {el:.0f}s"
            + ("" if not bad else "; failing e.g. " + "; ".join(bad[:3])))
    assert not bad, bad
    assert el <= 1200


def test_criterion_6_normal_ordering_identities():
    t = time.perf_counter()
    reports = [thm35_report(2, 20), thm35_report(3, 20)]
    el = time.perf_counter() - t
    bad = failing(reports)
    verdict(6, "four normal-ordering identities, n=2,3, K=20", not bad and el <= 60,
            "; ".join(bad[:4]) or f"{el:.1f}s")
    assert not bad, [(c.name, c.witness) for r in reports for c in r.failures()]
    assert el <= 60


def test_criterion_7_correlators():
    t = time.perf_counter()
    r = correlator_report(8)
    el = time.perf_counter() - t
    st = {c.name: c for c in r.checks}
    third = st["third correlator vs displayed formula"].status
    bad = [c.name for c in r.failures()]
    verdict(7, "sl_2 correlators to order 8", not bad and el <= 60,
            (("; ".join(bad) + "; ") if bad else "") + f"third correlator verdict: {third}")
    assert not bad, [(c.name, c.witness) for c in r.failures()]
    assert el <= 60


# negative controls: (hook, label, runner); each runner must pass unperturbed
def _def21(n=2, only=None):
    return lambda: verify_def21(n, 0, 1, 1, only=only)


MUTATIONS = [
    ("fj.x+.half", "def21", _def21()),
    ("fj.x-.half", "def21", _def21()),
    ("fj.phi.zero", "def21", _def21()),
    ("def21.cartan", "def21", _def21()),
    ("def21.delta", "def21", _def21()),
    ("def21.quadratic", "def21", _def21()),
    ("def21.serre", "def21", _def21(3, lambda s: "Serre" in s)),
    ("hopf.coproduct", "hopf", lambda: verify_hopf(2, 1, 1, parts=("antipode", "counit"))),
    ("rmat.q", "rmatrix", lambda: verify_rmatrix(6, 2)),
    ("vec.delta", "rmatrix", lambda: verify_rmatrix(6, 2)),
    ("vo.c.q", "normalization", lambda: verify_normalization(2)),
    ("vo.cstar.q", "normalization", lambda: verify_normalization(2)),
    ("vo.zmode.q", "normalization", lambda: verify_normalization(2)),
    ("thm35.shift", "thm35", lambda: thm35_report(2, 10)),
    ("ope.delta", "ope", lambda: verify_ope(2, "typeI", 1, 1)),
    ("ope.coef", "ope", lambda: verify_ope(2, "typeI", 1, 1)),
    ("vo.I.neg", "ope", lambda: verify_ope(2, "typeI", 1, 1)),
    ("loc.q", "ope", lambda: verify_ope(2, "locality", 1, 2)),
]


def test_criterion_8_negative_controls():
    results = []
    for hook, suite, runner in MUTATIONS:
        base = runner()
        with mutate(hook):
            r = runner()
        bad = r.failures()
        caught = base.passed and bool(bad) and all(c.witness for c in bad)
        results.append((hook, suite, caught, base.passed))
    missed = [f"{h} ({s}{'' if b else ', baseline not passing'})" for h, s, c, b in results if not c]
    verdict(8, f"negative controls over {len(results)} mutations", not missed and len(results) >= 10,
            "; ".join(missed) or "every perturbation caught with a witness")
    assert len(results) >= 10
    assert not missed, missed


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
