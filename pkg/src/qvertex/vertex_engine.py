"""Normal-ordered exponential operators and their exact evaluation.

A ``Template`` is the operator

    pref * z^zpow * exp(sum N_{j,k} a_{j,-k} z^k) * exp(sum P_{j,k} a_{j,k} z^-k)
         * e^gamma * z^{d_zw} * q^{d_qw} * (-1)^{d_rw}

where d_w acts on e^beta by the pairing (w, beta).  Normal ordering never
produces zero-mode factors: moving e^gamma to the left of a z^d, q^d or
phase-partial factor is done without the eigenvalue, and the product of two
lattice parts keeps its cocycle sign.

Applying a template to a basis vector is exact.  The annihilation
exponential acts on a polynomial f in the creation variables by translation,
exp(P) f(x) = f(x + t), and the creation exponential is expanded by
homogeneous degree, so a fixed power of z picks out finitely many terms.

The second half of the module evaluates linear combinations of products of
templates (``CurrentExpr``) coefficient by coefficient on Fock basis vectors.
"""

from collections import namedtuple
from fractions import Fraction
from functools import lru_cache
from math import comb, inf

from .fock import FockError, get_bosons, mono_degree, mono_mul
from .lattice import get_lattice
from .mutation import active, bump
from .scalar_ring import (ONE, S_ONE, S_ZERO, QRat, RationalCoefficients, Scalar,
                          Series, qint, scalar)


class ValidationError(ValueError):
    """Malformed expression, e.g. a rational factor with no expansion direction."""


class DivergentExpansion(ValidationError):
    """A coefficient would need infinitely many terms of the expansion."""


def _addto(d, key, val):
    if key in d:
        v = d[key] + val
        if v:
            d[key] = v
        else:
            del d[key]
    elif val:
        d[key] = val


def _zero_weight(n):
    return (Fraction(0),) * (n - 1)


def _wadd(u, v, c=1):
    return tuple(a + c * b for a, b in zip(u, v))


def _dot(u, m):
    s = 0
    for a, b in zip(u, m):
        if b:
            s += a * b
    return s


def _memo(fn):
    cache = {}

    def get(k):
        v = cache.get(k)
        if v is None:
            v = {j: c for j, c in fn(k).items() if c}
            cache[k] = v
        return v

    return get


def _empty(k):
    return {}


class Template:
    """A normal-ordered exponential operator in one formal variable."""

    def __init__(self, n, neg=None, pos=None, gamma=None, zw=None, qw=None, rw=None,
                 pref=S_ONE, zpow=0, name="T"):
        self.n = n
        self.lattice = get_lattice(n)
        self.bosons = get_bosons(n)
        self.neg = _memo(neg) if neg is not None else _empty
        self.pos = _memo(pos) if pos is not None else _empty
        self.has_neg = neg is not None
        self.has_pos = pos is not None
        z = _zero_weight(n)
        self.gamma = tuple(Fraction(x) for x in gamma) if gamma is not None else z
        self.zw = tuple(Fraction(x) for x in zw) if zw is not None else z
        self.qw = tuple(Fraction(x) for x in qw) if qw is not None else z
        self.rw = tuple(Fraction(x) for x in rw) if rw is not None else z
        self.gamma_free = self.lattice.to_free_basis(self.gamma)
        self.pref = scalar(pref)
        self.zpow = Fraction(zpow)
        self.name = name
        lat = self.lattice
        self._zc = lat.covector(self.zw)
        self._qc = lat.covector(self.qw)
        self._rc = lat.covector(self.rw)
        self._trans = {}
        self._creat = {}
        self._shiftvec = {}
        self._apply = {}

    # structure ---------------------------------------------------------

    def zero_mode_key(self):
        return (self.gamma, self.zw, self.qw, self.rw, self.zpow)

    def s0(self, exps):
        """z-exponent of the zero-mode part on the lattice monomial ``exps``."""
        return self.zpow + _dot(self._zc, exps)

    def eigen(self, exps):
        """Scalar eigenvalue q^(qw,beta) (-1)^(rw,beta) on e^beta (no z part)."""
        return Scalar(QRat.q_power(_dot(self._qc, exps)), _dot(self._rc, exps))

    def substitute(self, c, name=None):
        """The template of T(q^c z)."""
        c = Fraction(c)
        if c == 0:
            return self
        neg, pos = self.neg, self.pos
        qc = lambda k: Scalar.q_power(c * k)
        return Template(
            self.n,
            (lambda k: {j: v * qc(k) for j, v in neg(k).items()}) if self.has_neg else None,
            (lambda k: {j: v * qc(-k) for j, v in pos(k).items()}) if self.has_pos else None,
            self.gamma, self.zw, _wadd(self.qw, self.zw, c), self.rw,
            self.pref * Scalar.q_power(c * self.zpow), self.zpow,
            name or f"{self.name}(q^{c}z)")

    def inverse(self):
        """Inverse of a purely creating or purely annihilating template."""
        if self.has_neg and self.has_pos:
            raise ValidationError("only one-sided exponentials are inverted exactly")
        if any(self.gamma) or any(self.zw) or self.zpow:
            raise ValidationError("inverse needs a template without lattice or z-power part")
        neg, pos = self.neg, self.pos
        return Template(
            self.n,
            (lambda k: {j: -v for j, v in neg(k).items()}) if self.has_neg else None,
            (lambda k: {j: -v for j, v in pos(k).items()}) if self.has_pos else None,
            None, None, tuple(-x for x in self.qw), tuple(-x for x in self.rw),
            self.pref.inv(), 0, f"{self.name}^-1")

    def scaled(self, c, zpow=0, name=None):
        """c * z^zpow * T."""
        t = Template.__new__(Template)
        t.__dict__.update(self.__dict__)
        t.pref = self.pref * scalar(c)
        t.zpow = self.zpow + Fraction(zpow)
        t.name = name or self.name
        t._trans, t._creat, t._shiftvec, t._apply = self._trans, self._creat, self._shiftvec, {}
        return t

    # exact action ------------------------------------------------------

    def _shift(self, k):
        """t_{j',k} = sum_j P_{j,k} [a_{j,k}, a_{j',-k}]."""
        t = self._shiftvec.get(k)
        if t is None:
            g = self.bosons.gram(k)
            t = {}
            for j, p in self.pos(k).items():
                row = g[j - 1]
                for jj in range(1, self.n):
                    if row[jj - 1]:
                        _addto(t, jj, p * row[jj - 1])
            self._shiftvec[k] = t
        return t

    def _translate(self, mono):
        """f(x + t) for f = mono, as {removed degree: {mono: coeff}}."""
        out = self._trans.get(mono)
        if out is not None:
            return out
        counts = {}
        for lab in mono:
            counts[lab] = counts.get(lab, 0) + 1
        partial = {0: {(): S_ONE}}
        for (j, k), e in counts.items():
            t = self._shift(k).get(j)
            nxt = {}
            for A, polys in partial.items():
                for m, c in polys.items():
                    for l in range(0, e + 1 if t else 1):
                        coef = c if l == 0 else c * t ** l * Scalar(QRat.from_int(comb(e, l)))
                        key = mono_mul(m, ((j, k),) * (e - l))
                        _addto(nxt.setdefault(A + l * k, {}), key, coef)
            partial = nxt
        out = {A: p for A, p in partial.items() if p}
        self._trans[mono] = out
        return out

    def _creation(self, C):
        """Degree-C part of exp(sum N_{j,k} x_{j,k}), via C E_C = sum_k k N_k x_k E_{C-k}."""
        got = self._creat.get(C)
        if got is not None:
            return got
        if C == 0:
            res = {(): S_ONE}
        else:
            res = {}
            inv = Scalar(QRat.from_fraction(Fraction(1, C)))
            for k in range(1, C + 1):
                nk = self.neg(k)
                if not nk:
                    continue
                prev = self._creation(C - k)
                for j, v in nk.items():
                    f = v * Scalar(QRat.from_int(k)) * inv
                    for m, c in prev.items():
                        _addto(res, mono_mul(m, ((j, k),)), c * f)
        self._creat[C] = res
        return res

    def apply_basis(self, e, mono, exps):
        """Coefficient of z^e in T(z) acting on mono (x) e^exps."""
        key = (e, mono, exps)
        got = self._apply.get(key)
        if got is not None:
            return got
        out = {}
        delta = Fraction(e) - self.s0(exps)
        if delta.denominator == 1:
            delta = int(delta)
            deg = mono_degree(mono)
            lat = self.lattice
            coef = self.pref * self.eigen(exps)
            if lat.cocycle(self.gamma_free, exps):
                coef = -coef
            new = tuple(a + b for a, b in zip(self.gamma_free, exps))
            trans = self._translate(mono) if self.has_pos else {0: {mono: S_ONE}}
            for A in range(max(0, -delta), deg + 1):
                C = delta + A
                if C and not self.has_neg:
                    continue
                tr = trans.get(A)
                if not tr:
                    continue
                cr = self._creation(C)
                for m1, c1 in tr.items():
                    for m2, c2 in cr.items():
                        _addto(out, (mono_mul(m1, m2), new), c1 * c2 * coef)
        self._apply[key] = out
        return out

    def dump(self, K=4):
        lat = self.lattice
        lines = [f"template {self.name}",
                 f"prefactor: {self.pref.dump()} * z^{self.zpow}",
                 f"lattice: e^[{','.join(map(str, self.gamma_free))}]",
                 f"z-modes: z^d[{','.join(map(str, self.zw))}]",
                 f"q-modes: q^d[{','.join(map(str, self.qw))}]",
                 f"phase-partial: (-1)^d[{','.join(map(str, self.rw))}]"]
        for k in range(1, K + 1):
            for j, v in sorted(self.neg(k).items()):
                lines.append(f"neg {j} {k} | {v.dump()}")
        for k in range(1, K + 1):
            for j, v in sorted(self.pos(k).items()):
                lines.append(f"pos {j} {k} | {v.dump()}")
        return "\n".join(lines)

    def __repr__(self):
        return f"<Template {self.name}>"


def identity_template(n):
    return Template(n, name="1")


# currents ------------------------------------------------------------------


@lru_cache(maxsize=None)
def _current(kind, i, n, mut):
    lat = get_lattice(n)
    if not 1 <= i <= n - 1:
        raise ValueError(f"current index {i} out of range for n={n}")
    a = lat.alpha(i)
    qq = QRat.q_power(1) - QRat.q_power(-1)
    if kind == "x+":
        h = Fraction(-1, 2) + bump("fj.x+.half")
        return Template(n, lambda k: {i: Scalar(QRat.q_power(h * k) / qint(k))},
                        lambda k: {i: Scalar(-QRat.q_power(h * k) / qint(k))},
                        a, a, None, None, S_ONE, 1, f"x+_{i}")
    if kind == "x-":
        h = Fraction(1, 2) + bump("fj.x-.half")
        return Template(n, lambda k: {i: Scalar(-QRat.q_power(h * k) / qint(k))},
                        lambda k: {i: Scalar(QRat.q_power(h * k) / qint(k))},
                        tuple(-x for x in a), tuple(-x for x in a), None, None, S_ONE, 1,
                        f"x-_{i}")
    if kind == "phi":
        c = Scalar(-qq)
        return Template(n, lambda k: {i: c}, None, None, None,
                        tuple(-(1 + bump("fj.phi.zero")) * x for x in a), None,
                        S_ONE, 0, f"phi_{i}")
    if kind == "psi":
        c = Scalar(qq)
        return Template(n, None, lambda k: {i: c}, None, None, a, None, S_ONE, 0, f"psi_{i}")
    raise ValueError(f"unknown current kind {kind!r}")


def fj_current(kind, i, n):
    """The level-one bosonized current x+, x-, phi or psi of index i."""
    kind = {"x−": "x-", "x+": "x+"}.get(kind, kind)
    return _current(kind, i, n, active())


# products and contractions -------------------------------------------------


def normal_ordered_product(factors, name=None):
    """:T_1(q^{c_1} z) ... T_m(q^{c_m} z): for [(T, c), ...], no contractions."""
    factors = [(T, Fraction(c)) for T, c in factors]
    subs = [T.substitute(c) for T, c in factors]
    n = subs[0].n
    lat = get_lattice(n)
    pref = S_ONE
    gamma_free = (0,) * (n - 1)
    for T in subs:
        pref = pref * T.pref
        if lat.cocycle(gamma_free, T.gamma_free):
            pref = -pref
        gamma_free = tuple(a + b for a, b in zip(gamma_free, T.gamma_free))
    negs = [T.neg for T in subs if T.has_neg]
    poss = [T.pos for T in subs if T.has_pos]

    def merged(parts):
        def f(k):
            out = {}
            for p in parts:
                for j, v in p(k).items():
                    _addto(out, j, v)
            return out
        return f

    z = _zero_weight(n)
    zw, qw, rw, gamma = z, z, z, z
    zpow = Fraction(0)
    for T in subs:
        zw, qw, rw, gamma = _wadd(zw, T.zw), _wadd(qw, T.qw), _wadd(rw, T.rw), _wadd(gamma, T.gamma)
        zpow += T.zpow
    return Template(n, merged(negs) if negs else None, merged(poss) if poss else None,
                    gamma, zw, qw, rw, pref, zpow,
                    name or ":" + " ".join(T.name for T in subs) + ":")


Contraction = namedtuple("Contraction", "series prefactor zpowers product")


def contraction_log(T1, T2, k, c1=0, c2=0):
    """Coefficient of (w/z)^k in log of the boson contraction of T1(q^c1 z) T2(q^c2 w)."""
    p, m = T1.pos(k), T2.neg(k)
    if not p or not m:
        return S_ZERO
    g = T1.bosons.gram(k)
    s = S_ZERO
    for j, pv in p.items():
        for jj, nv in m.items():
            if g[j - 1][jj - 1]:
                s = s + pv * nv * g[j - 1][jj - 1]
    if s:
        s = s * Scalar.q_power(Fraction(c2 - c1) * k)
    return s


def exp_series(logc, order, var):
    """exp(sum_{k>=1} logc(k) x^k) to O(x^order), by E_m = (1/m) sum k L_k E_{m-k}."""
    L = [None] + [logc(k) for k in range(1, order)]
    E = [S_ONE]
    for m in range(1, order):
        s = S_ZERO
        for k in range(1, m + 1):
            if L[k]:
                s = s + L[k] * E[m - k] * Scalar(QRat.from_int(k))
        E.append(s * Scalar(QRat.from_fraction(Fraction(1, m))))
    return Series({m: c for m, c in enumerate(E) if c}, order, var)


def contract(T1, T2, K, var=("z", "w"), shifts=(0, 0)):
    """Wick contraction of T1(q^c1 z) T2(q^c2 w).

    Returns ``Contraction(series, prefactor, zpowers, product)``: T1 T2 equals
    prefactor * z^zpowers[z] * series(w/z) * :T1 T2:, with the series
    truncated after (w/z)^K and ``product`` the list of the two normal-ordered
    factors.
    """
    if var[0] == var[1]:
        raise ValidationError("contraction needs two distinct variables")
    c1, c2 = (Fraction(s) for s in shifts)
    ser = exp_series(lambda k: contraction_log(T1, T2, k, c1, c2), K + 1, f"{var[1]}/{var[0]}")
    g2 = T2.gamma_free
    zexp = _dot(T1._zc, g2)
    pref = T1.eigen(g2) * Scalar.q_power(c1 * zexp)
    return Contraction(ser, pref, {var[0]: zexp}, [(T1, var[0], c1), (T2, var[1], c2)])


def contraction_factors(T1, T2, c1=0, c2=0, K=12):
    """Closed form of the contraction of T1(q^c1 z) T2(q^c2 w) as a product.

    Returns ``[(u, s)]`` with the contraction equal to prod (1 - u w/z)^(-s),
    u an exponent of q.  This is read off from k * log-coefficient at k = 1
    and confirmed for k <= K; contractions not of this shape raise.
    """
    def klog(k):
        v = contraction_log(T1, T2, k, c1, c2) * Scalar(QRat.from_int(k))
        if v.r or not v.value.is_laurent():
            raise ValidationError("contraction is not a product of linear factors")
        return dict(v.value.num_terms())

    first = klog(1) if T1.has_pos and T2.has_neg else {}
    for k in range(2, K + 1):
        want = {}
        for e, s in first.items():
            want[e * k] = want.get(e * k, 0) + s
        got = klog(k) if first else {}
        if got != {e: s for e, s in want.items() if s}:
            raise ValidationError("contraction is not a product of linear factors")
    return sorted(first.items())


def collapse(factors, name=None):
    """T_1(q^{c_1} z) ... T_m(q^{c_m} z) on a single variable, as one template.

    Each pairwise contraction is evaluated at coinciding variables from its
    closed form; a pole there raises DivergentExpansion.
    """
    factors = [(T, Fraction(c)) for T, c in factors]
    coef = S_ONE
    zexp = Fraction(0)
    for a in range(len(factors)):
        Ta, ca = factors[a]
        Tas = Ta.substitute(ca)
        for b in range(a + 1, len(factors)):
            Tb, cb = factors[b]
            for u, s in contraction_factors(Ta, Tb, ca, cb):
                v = ONE - QRat.q_power(u)
                if v.is_zero():
                    if s > 0:
                        raise DivergentExpansion("contraction has a pole at coinciding points")
                    return None
                coef = coef * Scalar(v ** (-s))
            g = Tb.gamma_free
            coef = coef * Tas.eigen(g)
            zexp += _dot(Ta._zc, g)
    N = normal_ordered_product(factors, name)
    return N.scaled(coef, zexp)


def template_eq(T1, T2, K):
    """Exact equality of zero-mode data, prefactors and the first K mode coefficients."""
    if T1.n != T2.n or T1.zero_mode_key() != T2.zero_mode_key():
        return False
    if T1.pref != T2.pref:
        return False
    for k in range(1, K + 1):
        if T1.neg(k) != T2.neg(k) or T1.pos(k) != T2.pos(k):
            return False
    return True


def template_diff(T1, T2, K):
    """First difference between two templates, or None."""
    for name in ("gamma", "zw", "qw", "rw", "zpow"):
        if getattr(T1, name) != getattr(T2, name):
            return f"{name}: {getattr(T1, name)} vs {getattr(T2, name)}"
    if T1.pref != T2.pref:
        return f"prefactor: {T1.pref!r} vs {T2.pref!r}"
    for k in range(1, K + 1):
        if T1.neg(k) != T2.neg(k):
            return f"neg mode {k}: {T1.neg(k)} vs {T2.neg(k)}"
        if T1.pos(k) != T2.pos(k):
            return f"pos mode {k}: {T1.pos(k)} vs {T2.pos(k)}"
    return None


def mode(T, l, state):
    """Coefficient of z^{-l} of T(z) applied to a FockState."""
    from .fock import FockState
    out = {}
    e = -Fraction(l)
    for (mono, exps), c in state.terms.items():
        for key, v in T.apply_basis(e, mono, exps).items():
            _addto(out, key, c * v)
    if not out:
        lat = get_lattice(T.n)
        return FockState(T.n, state.sector + lat.sector(T.gamma_free))
    return FockState(T.n, get_lattice(T.n).sector(next(iter(out))[1]), out)


# expressions ---------------------------------------------------------------

Op = namedtuple("Op", "template var shift")


class RatioFactor:
    """sum_{k=kmin}^{kmax} coef(k) (num/den)^k, a one-parameter family of monomials."""

    __slots__ = ("num", "den", "coef", "kmin", "kmax", "label")

    def __init__(self, num, den, coef, kmin=None, kmax=None, label=""):
        self.num, self.den = num, den
        self.coef = coef
        self.kmin, self.kmax = kmin, kmax
        self.label = label


Term = namedtuple("Term", "coeff mono factors slots")


def _mono_merge(a, b):
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted((v, e) for v, e in d.items() if e))


class CurrentExpr:
    """Linear combination of products of templates at named variables.

    Each term carries a scalar, a monomial in the variables, a list of
    ratio factors (delta functions and expanded rational functions) and one
    operator word per tensor slot.
    """

    def __init__(self, terms, nslots=1):
        self.terms = [t for t in terms if t.coeff]
        self.nslots = nslots

    @staticmethod
    def one(nslots=1, c=S_ONE):
        return CurrentExpr([Term(scalar(c), (), (), ((),) * nslots)], nslots)

    def _lift(self, other):
        if isinstance(other, CurrentExpr):
            return other
        return CurrentExpr.one(self.nslots, scalar(other))

    def __add__(self, other):
        other = self._lift(other)
        if other.nslots != self.nslots:
            raise ValidationError("slot counts differ")
        return CurrentExpr(self.terms + other.terms, self.nslots)

    __radd__ = __add__

    def __neg__(self):
        return CurrentExpr([t._replace(coeff=-t.coeff) for t in self.terms], self.nslots)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, CurrentExpr):
            c = scalar(other)
            return CurrentExpr([t._replace(coeff=t.coeff * c) for t in self.terms], self.nslots)
        if other.nslots != self.nslots:
            raise ValidationError("slot counts differ")
        out = []
        for a in self.terms:
            for b in other.terms:
                out.append(Term(a.coeff * b.coeff, _mono_merge(a.mono, b.mono),
                                a.factors + b.factors,
                                tuple(x + y for x, y in zip(a.slots, b.slots))))
        return CurrentExpr(out, self.nslots)

    def __rmul__(self, other):
        c = scalar(other)
        return CurrentExpr([t._replace(coeff=c * t.coeff) for t in self.terms], self.nslots)

    def variables(self):
        vs = set()
        for t in self.terms:
            vs.update(v for v, _ in t.mono)
            for f in t.factors:
                vs.update((f.num, f.den))
            for w in t.slots:
                vs.update(op.var for op in w)
        return sorted(vs)


def commutator(a, b):
    return a * b - b * a


def current(T, var, shift=0, nslots=1, slot=0):
    word = ((Op(T, var, Fraction(shift)),),)
    slots = tuple(word[0] if s == slot else () for s in range(nslots))
    return CurrentExpr([Term(S_ONE, (), (), slots)], nslots)


def tensor(*exprs):
    """Outer tensor product of single-slot expressions."""
    terms = [Term(S_ONE, (), (), ())]
    for e in exprs:
        if e.nslots != 1:
            raise ValidationError("tensor takes single-slot factors")
        terms = [Term(a.coeff * b.coeff, _mono_merge(a.mono, b.mono), a.factors + b.factors,
                      a.slots + b.slots) for a in terms for b in e.terms]
    return CurrentExpr(terms, len(exprs))


def monomial(powers, c=S_ONE, nslots=1):
    """c * prod var^e for powers = {var: e}."""
    mono = tuple(sorted((v, Fraction(e)) for v, e in powers.items() if e))
    return CurrentExpr([Term(scalar(c), mono, (), ((),) * nslots)], nslots)


def laurent(terms, nslots=1):
    """Sum of monomials: terms = [({var: e}, c), ...]."""
    out = CurrentExpr([], nslots)
    for powers, c in terms:
        out = out + monomial(powers, c, nslots)
    return out


def delta(num, den, c=0, nslots=1):
    """delta(q^c num/den) = sum_{k in Z} q^{ck} (num/den)^k."""
    c = Fraction(c)
    f = RatioFactor(num, den, lambda k: Scalar.q_power(c * k), None, None,
                    f"delta(q^{c} {num}/{den})")
    return CurrentExpr([Term(S_ONE, (), (f,), ((),) * nslots)], nslots)


def rational(num, den, ratio=None, nslots=1, label=""):
    """num(x)/den(x) expanded at x = 0 where x = ratio[0]/ratio[1].

    ``num`` and ``den`` map nonnegative integer powers of x to coefficients.
    The expansion direction must be given explicitly.
    """
    if ratio is None:
        raise ValidationError(f"rational factor {label or (num, den)} has no expansion direction")
    rc = RationalCoefficients(num, den)
    f = RatioFactor(ratio[0], ratio[1], rc, 0, None, label or f"rational in {ratio[0]}/{ratio[1]}")
    return CurrentExpr([Term(S_ONE, (), (f,), ((),) * nslots)], nslots)


def series_factor(coef, ratio, kmin=0, kmax=None, nslots=1, label=""):
    f = RatioFactor(ratio[0], ratio[1], coef, kmin, kmax, label)
    return CurrentExpr([Term(S_ONE, (), (f,), ((),) * nslots)], nslots)


# evaluation ----------------------------------------------------------------

_BIG = 10 ** 9


def _floor(x):
    return x.numerator // x.denominator if isinstance(x, Fraction) else x


def _ceil(x):
    return -((-x.numerator) // x.denominator) if isinstance(x, Fraction) else x


def _propagate(bounds, cons):
    """Tighten integer interval bounds under linear constraints; False if infeasible."""
    for _ in range(60):
        changed = False
        for coeffs, c0, L, H in cons:
            lo_sum, lo_inf, hi_sum, hi_inf = c0, 0, c0, 0
            parts = []
            for idx, a in coeffs:
                lo, hi = bounds[idx]
                if a > 0:
                    mn = None if lo is None else a * lo
                    mx = None if hi is None else a * hi
                else:
                    mn = None if hi is None else a * hi
                    mx = None if lo is None else a * lo
                parts.append((idx, a, mn, mx))
                if mn is None:
                    lo_inf += 1
                else:
                    lo_sum += mn
                if mx is None:
                    hi_inf += 1
                else:
                    hi_sum += mx
            if L is not None and hi_inf == 0 and hi_sum < L:
                return False
            if H is not None and lo_inf == 0 and lo_sum > H:
                return False
            for idx, a, mn, mx in parts:
                # bounds on a * x_idx
                up = None
                if H is not None:
                    if mn is None:
                        if lo_inf == 1:
                            up = H - lo_sum
                    elif lo_inf == 0:
                        up = H - (lo_sum - mn)
                dn = None
                if L is not None:
                    if mx is None:
                        if hi_inf == 1:
                            dn = L - hi_sum
                    elif hi_inf == 0:
                        dn = L - (hi_sum - mx)
                lo, hi = bounds[idx]
                if a > 0:
                    nlo = None if dn is None else _ceil(Fraction(dn) / a)
                    nhi = None if up is None else _floor(Fraction(up) / a)
                else:
                    nlo = None if up is None else _ceil(Fraction(up) / a)
                    nhi = None if dn is None else _floor(Fraction(dn) / a)
                if nlo is not None and (lo is None or nlo > lo):
                    lo = nlo
                    changed = True
                if nhi is not None and (hi is None or nhi < hi):
                    hi = nhi
                    changed = True
                if lo is not None and hi is not None and lo > hi:
                    return False
                bounds[idx] = (lo, hi)
        if not changed:
            return True
    return True


def _apply_state(op, e, state):
    T = op.template
    out = {}
    sh = Scalar.q_power(op.shift * e) if op.shift else None
    for (mono, exps), c in state.items():
        for key, v in T.apply_basis(e, mono, exps).items():
            _addto(out, key, c * v)
    if sh is not None and out:
        out = {k: v * sh for k, v in out.items()}
    return out


def _plan(term, ket, variables, window, out_degree):
    """Unknowns and linear constraints for one term acting on one ket."""
    bounds = []
    cons = []
    slots = []
    vidx = {v: i for i, v in enumerate(variables)}
    totals = [[[], Fraction(0)] for _ in variables]
    for v, e in term.mono:
        totals[vidx[v]][1] += e
    finals = []
    for s, word in enumerate(term.slots):
        mono, exps = ket[s]
        d_prev = None
        d0 = mono_degree(mono)
        steps = []
        cur = exps
        for op in reversed(word):
            T = op.template
            s0 = T.s0(cur)
            idx = len(bounds)
            bounds.append((0, None))
            tot = totals[vidx[op.var]]
            tot[1] += s0
            tot[0].append((idx, 1))
            if d_prev is None:
                tot[1] -= d0
                if not T.has_pos:
                    cons.append((((idx, 1),), Fraction(-d0), 0, None))
                if not T.has_neg:
                    cons.append((((idx, 1),), Fraction(-d0), None, 0))
            else:
                tot[0].append((d_prev, -1))
                if not T.has_pos:
                    cons.append((((idx, 1), (d_prev, -1)), Fraction(0), 0, None))
                if not T.has_neg:
                    cons.append((((idx, 1), (d_prev, -1)), Fraction(0), None, 0))
            steps.append((op, idx, d_prev, s0))
            cur = tuple(a + b for a, b in zip(T.gamma_free, cur))
            d_prev = idx
        slots.append((steps, d0))
        if d_prev is not None:
            finals.append((d_prev, 1))
        else:
            cons_const = d0
            finals.append(None)
    fixed_deg = sum(mono_degree(ket[s][0]) for s, (steps, d0) in enumerate(slots) if not steps)
    fin = [f for f in finals if f is not None]
    cons.append((tuple(fin), Fraction(fixed_deg), None, out_degree))
    kidx = []
    for f in term.factors:
        idx = len(bounds)
        bounds.append((f.kmin, f.kmax))
        kidx.append(idx)
        totals[vidx[f.num]][0].append((idx, 1))
        totals[vidx[f.den]][0].append((idx, -1))
    lo, hi = window
    for coeffs, c0 in totals:
        merged = {}
        for idx, a in coeffs:
            merged[idx] = merged.get(idx, 0) + a
        cons.append((tuple((i, a) for i, a in merged.items() if a), c0, lo, hi))
    return bounds, cons, slots, kidx, totals


def eval_term(term, ket, variables, window, out_degree, sink):
    """Accumulate the window coefficients of one term applied to one ket into sink."""
    bounds, cons, slots, kidx, totals = _plan(term, ket, variables, window, out_degree)
    if not _propagate(bounds, cons):
        return
    for i, (lo, hi) in enumerate(bounds):
        if lo is None or hi is None:
            raise DivergentExpansion(
                f"term with words {[[op.template.name for op in w] for w in term.slots]} "
                f"needs unboundedly many expansion terms")
    order = []
    for s, (steps, d0) in enumerate(slots):
        for st in steps:
            order.append(("d", s, st))
    for f, idx in zip(term.factors, kidx):
        order.append(("k", f, idx))
    states = [{ket[s]: S_ONE} for s in range(len(slots))]
    nvar = len(variables)

    def emit(b):
        coeff = term.coeff
        for f, idx in zip(term.factors, kidx):
            c = f.coef(b[idx][0])
            if not c:
                return
            coeff = coeff * c
        ex = []
        for coeffs, c0 in totals:
            t = c0
            for idx, a in coeffs:
                t += a * b[idx][0]
            ex.append(t)
        key = tuple(ex)
        tgt = sink.setdefault(key, {})
        prods = [((), coeff)]
        for st in states:
            prods = [(k + (kk,), c * v) for k, c in prods for kk, v in st.items()]
        for k, v in prods:
            _addto(tgt, k, v)

    def rec(pos, b):
        if pos == len(order):
            emit(b)
            return
        kind, a, item = order[pos]
        if kind == "d":
            op, idx, dprev, s0 = item
            lo, hi = b[idx]
            prev = states[a]
            pd = mono_degree(ket[a][0]) if dprev is None else b[dprev][0]
            for v in range(lo, hi + 1):
                nb = list(b)
                nb[idx] = (v, v)
                if not _propagate(nb, cons):
                    continue
                new = _apply_state(op, s0 + v - pd, prev)
                if not new:
                    continue
                states[a] = new
                rec(pos + 1, nb)
            states[a] = prev
        else:
            idx = item
            lo, hi = b[idx]
            for v in range(lo, hi + 1):
                nb = list(b)
                nb[idx] = (v, v)
                if _propagate(nb, cons):
                    rec(pos + 1, nb)

    rec(0, bounds)


def eval_expr(expr, kets, window, out_degree, variables=None):
    """Window coefficients of expr on each ket.

    Returns {ket: {exponent tuple: {output basis tuple: Scalar}}} with zero
    entries removed.  ``window`` is an integer M (exponents in [-M, M]) or a
    pair (lo, hi).
    """
    if isinstance(window, int):
        window = (-window, window)
    window = (Fraction(window[0]), Fraction(window[1]))
    variables = variables or expr.variables()
    out = {}
    for ket in kets:
        sink = {}
        for term in expr.terms:
            eval_term(term, ket, variables, window, out_degree, sink)
        sink = {k: v for k, v in sink.items() if v}
        if sink:
            out[ket] = sink
    return out, variables


def first_witness(result, variables):
    res, _ = result if isinstance(result, tuple) else (result, None)
    for ket in sorted(res, key=repr):
        for ex in sorted(res[ket]):
            for bra in sorted(res[ket][ex], key=repr):
                return {"coefficient_of": {v: str(e) for v, e in zip(variables, ex)},
                        "ket": _basis_text(ket), "bra": _basis_text(bra),
                        "value": repr(res[ket][ex][bra])}
    return None


def _basis_text(b):
    return " (x) ".join(f"{list(m)}|e^{list(e)}" for m, e in b)


def eval_relation(expr, window, degree, kets):
    """Check that expr vanishes on every ket coefficientwise.

    Returns (passed, witness) where witness is None on success.
    """
    res, variables = eval_expr(expr, kets, window, degree)
    if not res:
        return True, None
    return False, first_witness(res, variables)
