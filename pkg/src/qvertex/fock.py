"""Heisenberg algebra, dual bosons and the level-one Fock modules F_i.

A basis vector of F_i is a pair ``(mono, lat)``: ``mono`` is a sorted tuple
of creation labels ``(j, k)`` (one entry per factor a_{j,-k}) and ``lat`` is
the free-basis exponent tuple of the normal-form lattice monomial.  The sign
of a lattice monomial is always absorbed into the coefficient.
"""

from fractions import Fraction
from functools import lru_cache
from itertools import product

from .lattice import get_lattice
from .scalar_ring import ONE, ZERO, S_ONE, S_ZERO, QRat, Scalar, qint, scalar


class FockError(ValueError):
    pass


def mono_degree(mono):
    return sum(k for _, k in mono)


def mono_mul(m1, m2):
    if not m1:
        return m2
    if not m2:
        return m1
    return tuple(sorted(m1 + m2))


def mono_str(mono):
    return "[" + ",".join(f"a{j}(-{k})" for j, k in mono) + "]"


class Bosons:
    """Heisenberg algebra [a_{i,k}, a_{j,l}] = delta_{k+l,0} [a_ij k][k]/k."""

    def __init__(self, n):
        self.n = n
        self.lattice = get_lattice(n)
        self._gram = {}
        self._astar = {}

    def commutator(self, i, k, j, l):
        if k + l != 0 or k == 0:
            return ZERO
        a = self.lattice.cartan[i - 1][j - 1]
        if a == 0:
            return ZERO
        return qint(a * k) * qint(k) / QRat.from_int(k)

    def gram(self, k):
        """Matrix G[i][j] = [a_{i,k}, a_{j,-k}] for k > 0 (0-based indices)."""
        g = self._gram.get(k)
        if g is None:
            r = self.n - 1
            g = [[Scalar(self.commutator(i, k, j, -k)) for j in range(1, r + 1)]
                 for i in range(1, r + 1)]
            self._gram[k] = g
        return g

    def astar_expand(self, i, k):
        """Coefficients {j: QRat} with a*_{i,k} = sum_j c_j a_{j,k}."""
        key = (i, k)
        out = self._astar.get(key)
        if out is None:
            n = self.n
            if not 1 <= i < n or k == 0:
                raise FockError("a* needs 1 <= i < n and k != 0")
            d = qint(k) * qint(k) * qint(n * k)
            out = {}
            for j in range(1, n):
                c = qint(min(i, j) * k) * qint(min(n - i, n - j) * k) / d
                if c:
                    out[j] = c
            self._astar[key] = out
        return out

    def astar_commutator(self, i, k, j, l):
        """[a*_{i,k}, a_{j,l}] computed through astar_expand."""
        s = ZERO
        for m, c in self.astar_expand(i, k).items():
            s = s + c * self.commutator(m, k, j, l)
        return s


@lru_cache(maxsize=None)
def get_bosons(n):
    return Bosons(n)


def boson_commutator(i, k, j, l, n):
    return get_bosons(n).commutator(i, k, j, l)


def astar_expand(i, k, n):
    return get_bosons(n).astar_expand(i, k)


class FockState:
    """Finite linear combination of basis vectors of F_sector."""

    __slots__ = ("n", "sector", "terms")

    def __init__(self, n, sector, terms=None):
        self.n = n
        self.sector = sector % n
        self.terms = {}
        lat = get_lattice(n)
        for key, c in (terms or {}).items():
            c = scalar(c)
            if not c:
                continue
            mono, exps = key
            if lat.sector(exps) != self.sector:
                raise FockError(f"lattice part {exps} not in the coset of sector {self.sector}")
            mono = tuple(sorted(mono))
            key = (mono, tuple(exps))
            self.terms[key] = self.terms[key] + c if key in self.terms else c
        self.terms = {k: v for k, v in self.terms.items() if v}

    @classmethod
    def vacuum(cls, n, i):
        lat = get_lattice(n)
        return cls(n, i, {((), lat.to_free_basis(lat.lbar(i))): S_ONE})

    @classmethod
    def basis_vector(cls, n, mono, exps, coeff=S_ONE):
        return cls(n, get_lattice(n).sector(exps), {(tuple(mono), tuple(exps)): coeff})

    def _new(self, terms):
        s = FockState.__new__(FockState)
        s.n, s.sector = self.n, self.sector
        s.terms = {k: v for k, v in terms.items() if v}
        return s

    def __add__(self, other):
        if self.sector != other.sector:
            raise FockError("sum of states in different sectors")
        t = dict(self.terms)
        for k, v in other.terms.items():
            t[k] = t[k] + v if k in t else v
        return self._new(t)

    def __neg__(self):
        return self._new({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = scalar(c)
        return self._new({k: v * c for k, v in self.terms.items()})

    __rmul__ = scale

    def is_zero(self):
        return not self.terms

    def degrees(self):
        return {mono_degree(m) for m, _ in self.terms}

    def __eq__(self, other):
        return (isinstance(other, FockState) and self.sector == other.sector
                and self.terms == other.terms)

    def dump(self):
        lines = []
        for (mono, exps) in sorted(self.terms):
            c = self.terms[(mono, exps)]
            lines.append(f"{_coeff_text(c)} | {mono_str(mono)} | +e^[{','.join(map(str, exps))}]")
        return "\n".join(lines)

    def __repr__(self):
        return self.dump() or "0"


def _coeff_text(c):
    txt = c.value.dump()
    if c.r:
        txt = f"(-1)^{Fraction(c.r)}*({txt})"
    return txt


def apply_boson(j, k, s):
    """a_{j,k} acting on a FockState."""
    if k == 0:
        raise FockError("a_{j,0} is not part of the Heisenberg algebra")
    terms = {}
    if k < 0:
        lab = (j, -k)
        for (mono, exps), c in s.terms.items():
            key = (mono_mul(mono, (lab,)), exps)
            terms[key] = terms[key] + c if key in terms else c
        return s._new(terms)
    bos = get_bosons(s.n)
    for (mono, exps), c in s.terms.items():
        seen = set()
        for idx, (jj, kk) in enumerate(mono):
            if kk != k or (jj, kk) in seen:
                continue
            seen.add((jj, kk))
            g = bos.commutator(j, k, jj, -k)
            if not g:
                continue
            mult = mono.count((jj, kk))
            rest = mono[:idx] + mono[idx + 1:]
            key = (rest, exps)
            v = c * Scalar(g * mult)
            terms[key] = terms[key] + v if key in terms else v
    return s._new(terms)


def weight_ops(kind, datum, s, base=None):
    """Zero-mode actions on a FockState.

    partial_alpha   multiply by (datum, beta)
    q_power_partial multiply by base^((datum, beta)) with base = q^e (e given)
    lattice_mul     left multiplication by e^{datum} with cocycle sign
    phase_partial   multiply by (-1)^{(datum, beta)}
    """
    lat = get_lattice(s.n)
    terms = {}
    if kind == "lattice_mul":
        g = lat.to_free_basis(datum)
        out = {}
        for (mono, exps), c in s.terms.items():
            new = tuple(a + b for a, b in zip(g, exps))
            out[(mono, new)] = -c if lat.cocycle(g, exps) else c
        return FockState(s.n, s.sector + lat.sector(g), out)
    for (mono, exps), c in s.terms.items():
        p = lat.pairing(datum, lat.from_free_basis(exps))
        if kind == "partial_alpha":
            f = Scalar(QRat.from_fraction(p))
        elif kind == "q_power_partial":
            e = Fraction(0 if base is None else base)
            f = Scalar.q_power(e * p)
        elif kind == "phase_partial":
            f = Scalar(ONE, p)
        else:
            raise FockError(f"unknown weight operation {kind!r}")
        terms[(mono, exps)] = c * f
    return s._new(terms)


def matrix_element(bra, state):
    """Coefficient of the basis vector ``bra`` = (mono, exps) in ``state``.

    ``bra`` may also be an integer i, meaning the highest weight vector
    1 (x) e^{Lbar_i} of F_i.
    """
    lat = get_lattice(state.n)
    if isinstance(bra, int):
        if bra % state.n != state.sector:
            raise FockError(f"bra in sector {bra % state.n}, state in sector {state.sector}")
        bra = ((), lat.to_free_basis(lat.lbar(bra)))
    mono, exps = bra
    if lat.sector(exps) != state.sector:
        raise FockError("bra and state lie in different sectors")
    return state.terms.get((tuple(sorted(mono)), tuple(exps)), S_ZERO)


def monomials(n, degree):
    """All creation monomials of exactly the given degree, sorted."""
    labels = [(j, k) for k in range(1, degree + 1) for j in range(1, n)]
    out = []

    def rec(rem, start, acc):
        if rem == 0:
            out.append(tuple(sorted(acc)))
            return
        for t in range(start, len(labels)):
            lab = labels[t]
            if lab[1] > rem:
                break
            rec(rem - lab[1], t, acc + [lab])

    rec(degree, 0, [])
    return sorted(out)


def lattice_shell(n, sector, radius=1):
    """Lattice parts Lbar_i + sum m_j alpha_j with sum |m_j| <= radius."""
    lat = get_lattice(n)
    base = lat.lbar(sector)
    out = []
    for m in product(range(-radius, radius + 1), repeat=n - 1):
        if sum(abs(x) for x in m) > radius:
            continue
        w = list(base)
        for j, c in enumerate(m, start=1):
            if c:
                w = [a + c * b for a, b in zip(w, lat.alpha(j))]
        out.append(lat.to_free_basis(tuple(w)))
    return sorted(out)


def basis(n, sector, degree, radius=1):
    """Basis vectors (mono, exps) of F_sector with boson degree <= degree."""
    shell = lattice_shell(n, sector, radius)
    out = []
    for d in range(degree + 1):
        for m in monomials(n, d):
            for e in shell:
                out.append((m, e))
    return out
