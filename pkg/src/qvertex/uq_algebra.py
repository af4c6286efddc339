"""Defining relations, the Drinfeld Hopf structure and the vector representation.

Relations are built against a *provider*: a function
``provider(kind, i, var, shift)`` returning the CurrentExpr of the current
``kind_i(var q^shift)``.  The Fock provider gives level one currents; the
coproduct provider gives their images on a tensor product.  Central charges
in coproduct and antipode formulas are kept as linear forms until bound to
numbers.
"""

from collections import namedtuple
from fractions import Fraction

from .fock import basis
from .lattice import get_lattice
from .mutation import bump
from .report import Report, Timer, check
from .scalar_ring import (ONE, Q, S_ONE, S_ZERO, QRat, Scalar, Series, expand_rational)
from .vertex_engine import (CurrentExpr, Op, Term, ValidationError, commutator, current,
                            delta, eval_relation, fj_current, laurent, rational,
                            template_diff)

KINDS = ("x+", "x-", "phi", "psi")


def _q(e):
    return Scalar(QRat.q_power(e))


# linear forms in the central charges -----------------------------------------


class Lin:
    """const + sum a_name * name, names like "c", "c1", "c2"."""

    __slots__ = ("const", "coef")

    def __init__(self, const=0, **coef):
        self.const = Fraction(const)
        self.coef = {k: Fraction(v) for k, v in coef.items() if v}

    @staticmethod
    def _of(x):
        return x if isinstance(x, Lin) else Lin(x)

    def __add__(self, other):
        other = Lin._of(other)
        d = dict(self.coef)
        for k, v in other.coef.items():
            d[k] = d.get(k, 0) + v
        return Lin(self.const + other.const, **d)

    __radd__ = __add__

    def __neg__(self):
        return Lin(-self.const, **{k: -v for k, v in self.coef.items()})

    def __sub__(self, other):
        return self + (-Lin._of(other))

    def __mul__(self, a):
        a = Fraction(a)
        return Lin(self.const * a, **{k: v * a for k, v in self.coef.items()})

    __rmul__ = __mul__

    def subs(self, mapping):
        out = Lin(self.const)
        for k, v in self.coef.items():
            out = out + (Lin._of(mapping[k]) if k in mapping else Lin(0, **{k: 1})) * v
        return out

    def value(self, levels):
        s = self.const
        for k, v in self.coef.items():
            if k not in levels:
                raise ValidationError(f"central charge {k} is not bound")
            s += v * Fraction(levels[k])
        return s

    def __eq__(self, other):
        other = Lin._of(other)
        return self.const == other.const and self.coef == other.coef

    def __hash__(self):
        return hash((self.const, tuple(sorted(self.coef.items()))))

    def __repr__(self):
        parts = [str(self.const)] if self.const or not self.coef else []
        parts += [f"{v}*{k}" for k, v in sorted(self.coef.items())]
        return "+".join(parts)


C, C1, C2, C3 = Lin(c=1), Lin(c1=1), Lin(c2=1), Lin(c3=1)

Gen = namedtuple("Gen", "kind i shift inv")
SymTerm = namedtuple("SymTerm", "coeff slots")


class SymExpr:
    """Sum of terms coeff * (word_1 (x) ... (x) word_m), words of generators."""

    def __init__(self, terms, nslots):
        self.terms = [t for t in terms if t.coeff]
        self.nslots = nslots

    def __repr__(self):
        out = []
        for t in self.terms:
            words = [" ".join(f"{g.kind}_{g.i}(zq^({g.shift})){'^-1' if g.inv else ''}"
                              for g in w) or "1" for w in t.slots]
            out.append(f"{t.coeff!r} * " + " (x) ".join(words))
        return " + ".join(out) or "0"


def _gen(kind, i, shift=0, inv=False):
    return Gen(kind, i, Lin._of(shift), inv)


def _shifted(g, s):
    return g._replace(shift=g.shift + s)


def _subs_gen(g, mapping):
    return g._replace(shift=g.shift.subs(mapping))


def coproduct(kind, i):
    """Delta of the current kind_i(z) with slot charges c1, c2."""
    if kind not in KINDS:
        raise ValidationError(f"unknown generator {kind!r}")
    d = bump("hopf.coproduct")
    if kind == "x+":
        terms = [SymTerm(S_ONE, ((_gen("x+", i),), ())),
                 SymTerm(S_ONE, ((_gen("phi", i, C1 * Fraction(1, 2) + d),), (_gen("x+", i, C1),)))]
    elif kind == "x-":
        terms = [SymTerm(S_ONE, ((), (_gen("x-", i),))),
                 SymTerm(S_ONE, ((_gen("x-", i, C2 + d),), (_gen("psi", i, C2 * Fraction(1, 2)),)))]
    elif kind == "phi":
        terms = [SymTerm(S_ONE, ((_gen("phi", i, -C2 * Fraction(1, 2) + d),),
                                 (_gen("phi", i, C1 * Fraction(1, 2)),)))]
    else:
        terms = [SymTerm(S_ONE, ((_gen("psi", i, C2 * Fraction(1, 2) + d),),
                                 (_gen("psi", i, -C1 * Fraction(1, 2)),)))]
    return SymExpr(terms, 2)


def counit(g):
    """epsilon of a single generator (a Scalar)."""
    return S_ZERO if g.kind in ("x+", "x-") else S_ONE


def antipode(g):
    """a(g) for one generator g = kind_i(z q^L): list of (coeff, word) in one slot."""
    L = g.shift
    if g.inv:
        if g.kind in ("phi", "psi"):
            return [(S_ONE, (g._replace(inv=False),))]
        raise ValidationError("only phi and psi have inverses")
    if g.kind == "x+":
        return [(-S_ONE, (_gen("phi", g.i, L - C * Fraction(1, 2), True), _gen("x+", g.i, L - C)))]
    if g.kind == "x-":
        return [(-S_ONE, (_gen("x-", g.i, L - C), _gen("psi", g.i, L - C * Fraction(1, 2), True)))]
    return [(S_ONE, (g._replace(inv=True),))]


def antipode_counit(kind, i, c=None):
    """(a(kind_i(z)), epsilon(kind_i(z))): the antipode image as a one-slot
    SymExpr and the counit value.  With ``c`` given the image is bound to a
    CurrentExpr for modules of level c (at n taken from ``c[1]``)."""
    img = SymExpr([SymTerm(cf, (w,)) for cf, w in antipode(_gen(kind, i))], 1)
    eps = counit(_gen(kind, i))
    if c is not None:
        level, n = c
        return bind(img, n, "z", {"c": level}), eps
    return img, eps


def delta_on_slot(expr, s):
    """(1 (x) .. Delta .. (x) 1) applied to slot s (0-based); charges renamed."""
    m = expr.nslots
    ren = {}
    for t in range(1, m + 1):
        if t < s + 1:
            continue
        if t == s + 1:
            ren[f"c{t}"] = Lin(0, **{f"c{t}": 1, f"c{t + 1}": 1})
        else:
            ren[f"c{t}"] = Lin(0, **{f"c{t + 1}": 1})
    inner = {"c1": Lin(0, **{f"c{s + 1}": 1}), "c2": Lin(0, **{f"c{s + 2}": 1})}
    out = []
    for term in expr.terms:
        slots = [tuple(_subs_gen(g, ren) for g in w) for w in term.slots]
        w = slots[s]
        if len(w) > 1:
            raise ValidationError("coproduct of a product word is not needed here")
        if not w:
            pieces = [SymTerm(S_ONE, ((), ()))]
        else:
            g = w[0]
            if g.inv:
                raise ValidationError("coproduct of an inverse generator is not needed here")
            pieces = [SymTerm(p.coeff, tuple(tuple(_shifted(_subs_gen(h, inner), g.shift)
                                                  for h in ww) for ww in p.slots))
                      for p in coproduct(g.kind, g.i).terms]
        for p in pieces:
            out.append(SymTerm(term.coeff * p.coeff, tuple(slots[:s]) + p.slots + tuple(slots[s + 1:])))
    return SymExpr(out, m + 1)


def counit_on_slot(expr, s):
    """Apply epsilon to slot s of a two-slot expression; the other slot keeps charge c."""
    if expr.nslots != 2:
        raise ValidationError("counit binding is defined for two slots")
    other = 1 - s
    mapping = {f"c{s + 1}": Lin(0), f"c{other + 1}": C}
    out = []
    for t in expr.terms:
        c = t.coeff
        for g in t.slots[s]:
            c = c * counit(g)
        out.append(SymTerm(c, (tuple(_subs_gen(g, mapping) for g in t.slots[other]),)))
    return SymExpr(out, 1)


def antipode_composition(expr, side):
    """multiply o (1 (x) a) o Delta (side=2) or multiply o (a (x) 1) o Delta (side=1)."""
    if side == 2:
        mapping = {"c1": C, "c2": -C}
    else:
        mapping = {"c1": -C, "c2": C}
    out = []
    for t in expr.terms:
        a, b = (tuple(_subs_gen(g, mapping) for g in w) for w in t.slots)
        target = b if side == 2 else a
        # a is an anti-homomorphism: reverse the word, map each generator
        imgs = [(S_ONE, ())]
        for g in reversed(target):
            imgs = [(c1 * c2, w1 + w2) for c1, w1 in imgs for c2, w2 in antipode(g)]
        for c, w in imgs:
            word = a + w if side == 2 else w + b
            out.append(SymTerm(t.coeff * c, (word,)))
    return SymExpr(out, 1)


def _template(kind, i, n, inv):
    T = fj_current(kind, i, n)
    return T.inverse() if inv else T


def bind(expr, n, var, levels, shift=0):
    """CurrentExpr of a symbolic expression at variable ``var`` (times q^shift)."""
    terms = []
    for t in expr.terms:
        slots = tuple(tuple(Op(_template(g.kind, g.i, n, g.inv), var,
                               g.shift.value(levels) + Fraction(shift)) for g in w)
                      for w in t.slots)
        terms.append(Term(t.coeff, (), (), slots))
    return CurrentExpr(terms, expr.nslots)


def fock_provider(n):
    def prov(kind, i, var, shift=0):
        return current(fj_current(kind, i, n), var, shift)
    prov.nslots = 1
    return prov


def coproduct_provider(n, levels=(1, 1)):
    lv = {f"c{k + 1}": v for k, v in enumerate(levels)}

    def prov(kind, i, var, shift=0):
        return bind(coproduct(kind, i), n, var, lv, shift)
    prov.nslots = 2
    return prov


# Def 2.1 -------------------------------------------------------------------

Relation = namedtuple("Relation", "name expr window")


def _pmul(a, b):
    out = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            out[e1 + e2] = out.get(e1 + e2, S_ZERO) + c1 * c2
    return {e: c for e, c in out.items() if c}


def _g_parts(a, s):
    """numerator, denominator of g_a(q^s x) = (q^{a+s} x - 1)/(q^s x - q^a)."""
    return {0: -S_ONE, 1: _q(a + s)}, {0: -_q(a), 1: _q(s)}


def g_factor(a, s, ratio, power=1, nslots=1):
    """g_a(q^s x)^power with x = ratio[0]/ratio[1], expanded about x = 0."""
    num, den = _g_parts(a, s)
    if power < 0:
        num, den = den, num
    return rational(num, den, ratio, nslots, label=f"g_{a}(q^{s} x)^{power}")


def g_ratio(a, s1, s2, ratio, nslots=1):
    """g_a(q^s1 x) / g_a(q^s2 x) about x = 0."""
    n1, d1 = _g_parts(a, s1)
    n2, d2 = _g_parts(a, s2)
    return rational(_pmul(n1, d2), _pmul(d1, n2), ratio, nslots,
                    label=f"g_{a}(q^{s1} x)/g_{a}(q^{s2} x)")


def def21_relations(n, prov, c, serre_window=1):
    """Every defining relation as an expression that must vanish."""
    ns = prov.nslots
    A = get_lattice(n).cartan
    half = Fraction(c, 2)
    ZW, WZ = ("z", "w"), ("w", "z")
    rels = [Relation("q^{c/2} q^{-c/2} = 1",
                     CurrentExpr.one(ns, _q(half) * _q(-half)) - CurrentExpr.one(ns), None)]
    X = prov
    for i in range(1, n):
        for j in range(1, n):
            a = A[i - 1][j - 1] + bump("def21.cartan")
            rels.append(Relation(f"phi_{i} phi_{j}", commutator(X("phi", i, "z"), X("phi", j, "w")), None))
            rels.append(Relation(f"psi_{i} psi_{j}", commutator(X("psi", i, "z"), X("psi", j, "w")), None))
            rels.append(Relation(
                f"phi_{i} psi_{j}",
                X("phi", i, "z") * X("psi", j, "w")
                - g_ratio(a, -c, c, ZW, ns) * X("psi", j, "w") * X("phi", i, "z"), None))
            for sg, kind in ((1, "x+"), (-1, "x-")):
                rels.append(Relation(
                    f"phi_{i} {kind}_{j}",
                    X("phi", i, "z") * X(kind, j, "w")
                    - g_factor(a, -sg * half, ZW, sg, ns) * X(kind, j, "w") * X("phi", i, "z"), None))
                rels.append(Relation(
                    f"psi_{i} {kind}_{j}",
                    X("psi", i, "z") * X(kind, j, "w")
                    - g_factor(a, -sg * half, WZ, -sg, ns) * X(kind, j, "w") * X("psi", i, "z"), None))
            rhs = 0
            if i == j:
                dl = bump("def21.delta")
                rhs = (delta("z", "w", -c + dl, ns) * X("psi", i, "w", half)
                       - delta("z", "w", c, ns) * X("phi", i, "z", half)) * Scalar((Q - Q.inv()).inv())
            rels.append(Relation(f"[x+_{i}, x-_{j}]",
                                 commutator(X("x+", i, "z"), X("x-", j, "w")) - rhs, None))
            for sg, kind in ((1, "x+"), (-1, "x-")):
                if a == 0 and A[i - 1][j - 1] == 0:
                    rels.append(Relation(f"[{kind}_{i}, {kind}_{j}] = 0",
                                         commutator(X(kind, i, "z"), X(kind, j, "w")), None))
                    continue
                e = sg * (a + bump("def21.quadratic"))
                left = laurent([({"z": 1}, S_ONE), ({"w": 1}, -_q(e))], ns)
                right = laurent([({"z": 1}, _q(e)), ({"w": 1}, -S_ONE)], ns)
                rels.append(Relation(f"{kind}_{i} {kind}_{j} quadratic",
                                     left * X(kind, i, "z") * X(kind, j, "w")
                                     - right * X(kind, j, "w") * X(kind, i, "z"), None))
            if A[i - 1][j - 1] == -1:
                qq = _q(1 + bump("def21.serre")) + _q(-1)
                for kind in ("x+", "x-"):
                    def s3(z1, z2):
                        return (X(kind, i, z1) * X(kind, i, z2) * X(kind, j, "w")
                                - X(kind, i, z1) * X(kind, j, "w") * X(kind, i, z2) * qq
                                + X(kind, j, "w") * X(kind, i, z1) * X(kind, i, z2))
                    rels.append(Relation(f"Serre {kind}_{i} {kind}_{j}",
                                         s3("z1", "z2") + s3("z2", "z1"), serre_window))
    return rels


def fock_kets(n, sector, D, nslots=1, radius=1):
    """Tensor basis kets with total boson degree <= D."""
    single = basis(n, sector, D, radius)
    kets = [()]
    for _ in range(nslots):
        kets = [k + (b,) for k in kets for b in single
                if sum(sum(kk for _, kk in m) for m, _ in k + (b,)) <= D]
    return kets


def _run(name, rel_list, kets, M, D):
    checks = []
    for rel in rel_list:
        ok, wit = eval_relation(rel.expr, rel.window if rel.window is not None else M, D, kets)
        checks.append(check(rel.name, ok, wit))
    return checks


def verify_def21(n, sector=0, D=2, M=2, only=None):
    """All defining relations on the level one Fock module F_sector."""
    with Timer() as t:
        rels = def21_relations(n, fock_provider(n), 1)
        if only is not None:
            rels = [r for r in rels if only(r.name)]
        checks = _run("def21", rels, [(b,) for b in basis(n, sector, D)], M, D)
    return Report("def21", n, {"sector": sector, "degree": D, "window": M}, checks, t.elapsed)


# Hopf structure ------------------------------------------------------------


def counit_checks(n, K=12):
    checks = []
    for kind in KINDS:
        for i in range(1, n):
            for s in (0, 1):
                e = counit_on_slot(coproduct(kind, i), s)
                terms = e.terms
                ok = len(terms) == 1 and terms[0].coeff == S_ONE and len(terms[0].slots[0]) == 1
                diff = "not a single generator"
                if ok:
                    g = terms[0].slots[0][0]
                    T = _template(g.kind, g.i, n, g.inv).substitute(g.shift.value({"c": 1}))
                    diff = template_diff(T, fj_current(kind, i, n), K)
                    ok = g.kind == kind and g.i == i and diff is None
                checks.append(check(f"counit slot {s + 1} on Delta({kind}_{i})", ok,
                                    None if ok else {"result": repr(e), "difference": diff}))
    return checks


def antipode_checks(n, D, M, kets):
    checks = []
    for kind in KINDS:
        for i in range(1, n):
            eps = counit(_gen(kind, i))
            for side in (2, 1):
                sym = antipode_composition(coproduct(kind, i), side)
                expr = bind(sym, n, "z", {"c": 1}) - CurrentExpr.one(1, eps)
                ok, wit = eval_relation(expr, M, D, kets)
                label = "m(1 (x) a)Delta" if side == 2 else "m(a (x) 1)Delta"
                checks.append(check(f"{label}({kind}_{i}) = epsilon", ok, wit))
    return checks


def group_like_checks(n, K=12):
    """a(phi) phi = 1 and a(psi) psi = 1 as templates."""
    from .vertex_engine import identity_template, normal_ordered_product
    checks = []
    for kind in ("phi", "psi"):
        for i in range(1, n):
            T = fj_current(kind, i, n)
            P = normal_ordered_product([(T.inverse(), 0), (T, 0)])
            diff = template_diff(P, identity_template(n), K)
            checks.append(check(f"a({kind}_{i}) {kind}_{i} = 1", diff is None, diff))
    return checks


def coassociativity_checks(n, D, M):
    kets = fock_kets(n, 0, D, 3)
    lv = {"c1": 1, "c2": 1, "c3": 1}
    checks = []
    for kind in KINDS:
        for i in range(1, n):
            d = coproduct(kind, i)
            left = bind(delta_on_slot(d, 0), n, "z", lv)
            right = bind(delta_on_slot(d, 1), n, "z", lv)
            ok, wit = eval_relation(left - right, M, D, kets)
            checks.append(check(f"coassociativity {kind}_{i}", ok, wit))
    return checks


def verify_hopf(n=2, D=2, M=2, coassoc_degree=1, parts=("relations", "counit", "antipode", "coassociativity")):
    """Hopf axioms of the Drinfeld coproduct on F_0 (x) F_0 at c1 = c2 = 1."""
    with Timer() as t:
        checks = []
        if "relations" in parts:
            rels = def21_relations(n, coproduct_provider(n), 2)
            kets = fock_kets(n, 0, D, 2)
            for r in rels:
                ok, wit = eval_relation(r.expr, r.window if r.window is not None else M, D, kets)
                checks.append(check(f"Delta image: {r.name}", ok, wit))
        if "counit" in parts:
            checks += counit_checks(n)
        if "antipode" in parts:
            checks += group_like_checks(n)
            checks += antipode_checks(n, D, M, [(b,) for b in basis(n, 0, D)])
        if "coassociativity" in parts:
            checks += coassociativity_checks(n, coassoc_degree, M)
    return Report("hopf", n, {"degree": D, "window": M, "coassociativity_degree": coassoc_degree},
                  checks, t.elapsed)


# vector representation -------------------------------------------------------


def _vec_diag(n, kind, i, j):
    """phi_i(w)|j> or psi_i(w)|j> as (num, den) in x = w/z (phi) or x = z/w (psi)."""
    if kind == "phi":
        if j == i - 1:
            return {0: _q(-1), 1: -_q(-i + 1)}, {0: S_ONE, 1: -_q(-i)}
        if j == i:
            return {0: _q(1), 1: -_q(-i - 1)}, {0: S_ONE, 1: -_q(-i)}
    else:
        if j == i - 1:
            return {0: _q(1), 1: -_q(i - 1)}, {0: S_ONE, 1: -_q(i)}
        if j == i:
            return {0: _q(-1), 1: -_q(i + 1)}, {0: S_ONE, 1: -_q(i)}
    return {0: S_ONE}, {0: S_ONE}


def _vec_delta(n, kind, i, j):
    """x_i^pm(w)|j> = delta(w/(q^e z))|target>: returns (target, e) or None."""
    e = i + bump("vec.delta")
    if kind == "x+" and j == i:
        return i - 1, e
    if kind == "x-" and j == i - 1:
        return i, e
    return None


def vecrep_apply(n, kind, i, l, j, var="z"):
    """The mode kind_i(l) on |j> of V_z: {target: Series monomial in var}.

    Modes are coefficients of w^{-l}; phi has modes l <= 0 and psi l >= 0.
    """
    if not 0 <= j < n or not 1 <= i < n:
        raise ValidationError("index out of range")
    l = int(l)
    if kind in ("x+", "x-"):
        d = _vec_delta(n, kind, i, j)
        if d is None or not 0 <= d[0] < n:
            return {}
        tgt, e = d
        return {tgt: Series({l: _q(e * l)}, var=var)}
    if kind in ("phi", "psi"):
        num, den = _vec_diag(n, kind, i, j)
        k = -l if kind == "phi" else l
        if k < 0:
            return {}
        ser = expand_rational(num, den, "at_zero", k + 1)
        c = ser.coeff(k)
        return {j: Series({l: c}, var=var)} if c else {}
    raise ValidationError(f"unknown generator {kind!r}")


def _diag_at(n, kind, i, j, point):
    """phi_i or psi_i acting on |j> of slot with parameter z_t, at w = point.

    ``point`` = (e, p): w = q^e y^p z_t.  Returns (num, den) in y.
    """
    num, den = _vec_diag(n, kind, i, j)
    e, p = point
    if kind == "psi":
        e, p = -e, -p
    # x = q^e y^p
    def sub(poly):
        return {k * p: c * _q(e * k) for k, c in poly.items()}
    nn, dd = sub(num), sub(den)
    lo = min(min(nn), min(dd))
    if lo < 0:
        nn = {k - lo: c for k, c in nn.items()}
        dd = {k - lo: c for k, c in dd.items()}
    return nn, dd


def _entry_series(parts, N):
    """sum of coeff * y^shift * prod num/den, each expanded at y = 0 to O(y^N)."""
    total = Series({}, N, "y")
    for coeff, yshift, rats in parts:
        s = Series({0: coeff}, N + 50, "y")
        for num, den in rats:
            s = s * expand_rational(num, den, "at_zero", N + 50, "y")
        total = total + s.shift(yshift).truncate(N)
    return total


def _tensor_matrix(kind, l, N, opposite):
    """4x4 matrix of Delta(kind_1(l)) (or Delta') on V_{z1} (x) V_{z2}, n = 2, c = 0.

    Entries are Series in y = z2/z1 after removing the common factor z1^l.
    Keys ((k1, k2), (j1, j2)).
    """
    n, i = 2, 1
    if kind == "x+":
        terms = [(("x+", 0), None), (("phi", 0), ("x+", 1))]
    elif kind == "x-":
        terms = [(None, ("x-", 1)), (("x-", 0), ("psi", 1))]
    else:
        terms = [((kind, 0), (kind, 1))]
    if opposite:
        # swap the tensor factors of every term
        terms = [tuple(None if f is None else (f[0], 1 - f[1]) for f in (b, a)) for a, b in
                 [(t[0], t[1]) for t in terms]]
        terms = [(a, b) if (a is None or a[1] == 0) and (b is None or b[1] == 1) else (b, a)
                 for a, b in terms]
    out = {}
    states = [(a, b) for a in range(2) for b in range(2)]
    for j in states:
        for A, B in terms:
            ops = [f for f in (A, B) if f is not None]
            dl = [f for f in ops if f[0] in ("x+", "x-")]
            if dl:
                (dk, ds), = dl
                d = _vec_delta(n, dk, i, j[ds])
                if d is None:
                    continue
                tgt, e = d
                k = list(j)
                k[ds] = tgt
                # w = q^e z_ds; coefficient of w^{-l} is (q^e z_ds)^l
                yshift = l if ds == 1 else 0
                rats = []
                for f in ops:
                    if f[0] in ("phi", "psi"):
                        t = f[1]
                        p = 0 if t == ds else (1 if ds == 1 else -1)
                        rats.append(_diag_at(n, f[0], i, j[t], (e, p)))
                key = (tuple(k), j)
                out.setdefault(key, []).append((_q(e * l), yshift, rats))
            else:
                # phi (x) phi or psi (x) psi: finite convolution
                sers = []
                for f in ops:
                    num, den = _vec_diag(n, f[0], i, j[f[1]])
                    sers.append(expand_rational(num, den, "at_zero", abs(l) + 1))
                terms_y = {}
                for a in range(abs(l) + 1):
                    b = abs(l) - a
                    c = sers[0].coeff(a) * sers[1].coeff(b)
                    if c:
                        # phi: z1^{-a} z2^{-b} = z1^{l} y^{-b};  psi: z1^a z2^b = z1^l y^b
                        yb = -b if kind == "phi" else b
                        terms_y[yb] = terms_y.get(yb, S_ZERO) + c
                if (kind == "phi" and l > 0) or (kind == "psi" and l < 0):
                    continue
                for yb, c in terms_y.items():
                    out.setdefault((j, j), []).append((c, yb, []))
    return {key: _entry_series(parts, N) for key, parts in out.items()}


def rmatrix_diag(N):
    """Diagonal entries of R(z1/z2) for n = 2 as Series in y = z2/z1."""
    d = bump("rmat.q")
    # x = z1/z2 = 1/y
    r01 = expand_rational({0: -_q(-1 - d), 1: _q(1)}, {0: -S_ONE, 1: S_ONE}, "at_zero", N, "y")
    r10 = expand_rational({0: -S_ONE, 1: S_ONE}, {0: -_q(1), 1: _q(-1)}, "at_zero", N, "y")
    one = Series({0: S_ONE}, N, "y")
    return {(0, 0): one, (1, 1): one, (0, 1): r01, (1, 0): r10}


def verify_rmatrix(N=10, L=3):
    """R Delta(x) = Delta'(x) R entrywise to O((z2/z1)^N) for all modes |l| <= L, n = 2."""
    with Timer() as t:
        R = rmatrix_diag(N)
        checks = []
        for kind in KINDS:
            for l in range(-L, L + 1):
                if (kind == "phi" and l > 0) or (kind == "psi" and l < 0):
                    continue
                Dm = _tensor_matrix(kind, l, N, False)
                Dp = _tensor_matrix(kind, l, N, True)
                bad = None
                for key in sorted(set(Dm) | set(Dp)):
                    k, j = key
                    lhs = R[k] * Dm[key] if key in Dm else Series({}, N, "y")
                    rhs = Dp[key] * R[j] if key in Dp else Series({}, N, "y")
                    if not lhs.agrees(rhs, N):
                        bad = {"entry": f"<{k}|.|{j}>", "R Delta": lhs.dump(), "Delta' R": rhs.dump()}
                        break
                checks.append(check(f"R Delta({kind}_1({l})) = Delta'({kind}_1({l})) R", bad is None, bad))
    return Report("rmatrix", 2, {"order": N, "modes": L}, checks, t.elapsed)
